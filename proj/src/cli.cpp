#include "svamp/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json_io.hpp"
#include "svamp/error.hpp"
#include "svamp/logspace.hpp"
#include "svamp/toy_example.hpp"

namespace svamp::cli {

namespace {

using io::json;
using io::number;

struct Options {
  std::string output_path;
  std::string format = "json";

  double epsilon = 0.0;
  int r_bits = 0;
  double m_exponent = 1.99;
  int m_override = 0;
  bool ky_fan = false;
  int r_max = 0;
  std::string gnuplot_path;
  double entropy_tolerance = 1e-14;

  bool lower_side = false;
  bool oracle = false;
  int max_simplex_m = 1200;
  std::string dual_variant = "two_point";

  int cloud_m = 3;
  std::int64_t cloud_n = 2;
  std::string weights = "uniform";

  int n = 8;
  std::int64_t runs = 0;
  std::string supplier = "honest_quantum";
  std::string source_strategy = "uniform";
  std::string bad_box_kind = "local_deterministic";
  std::vector<double> attack_type_probs;
  int attack_type = 0;
  int attack_m = 0;
  std::uint64_t trials = 1000;
  int threads = 1;
  std::uint64_t seed = 0;
  std::string transcript_path;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SVAMP_SEED")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return 1;
}

json bounds_params(const Options& o) {
  return {{"epsilon", number(o.epsilon)}, {"r_bits", o.r_bits}, {"m_exponent", number(o.m_exponent)},
          {"ky_fan", o.ky_fan}, {"r_max", o.r_max}};
}

json cmd_threshold(const Options& o) {
  const double c = bounds::solve_entropy_constant(o.entropy_tolerance);
  const double e2 = attack::threshold_epsilon2(o.m_exponent);
  return {{"epsilon1", number(bounds::threshold_epsilon1())},
          {"epsilon_kyfan", number(bounds::threshold_ky_fan(c))},
          {"epsilon2", number(e2)},
          {"c", number(c)},
          {"entropy_residual", number(bounds::binary_entropy(c / 2.0) - 0.5)},
          {"epsilon2_residual", number(attack::epsilon2_residual(e2, o.m_exponent))}};
}

json bound_sweep(const source::SvParameter& sv, int r_max, bool ky_fan) {
  json arr = json::array();
  for (int r = 1; r <= r_max; ++r) {
    const auto chain = bounds::bound_chain(sv, r, ky_fan);
    arr.push_back({{"r_bits", r},
                   {"log_delta_big", number(chain.log_delta_big)},
                   {"log_d_upper", number(chain.log_d_upper)}});
  }
  return arr;
}

void write_gnuplot(const std::string& path, const json& sweep, double epsilon) {
  std::ofstream f(path);
  require(static_cast<bool>(f), "cannot open gnuplot script path '" + path + "'");
  f << "# svamp bound sweep, epsilon = " << io::sig15(epsilon) << "\n"
    << "set xlabel 'r bits'\nset ylabel 'natural log'\nset key left top\n"
    << "$sweep << EOD\n";
  for (const auto& row : sweep) {
    f << row["r_bits"].get<int>() << ' ' << row["log_delta_big"].dump() << ' '
      << row["log_d_upper"].dump() << '\n';
  }
  f << "EOD\n"
    << "plot $sweep using 1:2 with linespoints title 'log Delta (closed form)', \\\n"
    << "     $sweep using 1:3 with linespoints title 'log d upper'\n";
}

json cmd_bounds(const Options& o) {
  source::SvParameter sv(o.epsilon);
  require(o.r_bits >= 1 && o.r_bits <= 60, "--r-bits must lie in [1, 60]");
  const std::int64_t n = std::int64_t{1} << (o.r_bits + 1);
  const auto b = o.ky_fan ? source::ky_fan_bounds(sv, o.r_bits, bounds::solve_entropy_constant(), o.m_exponent)
                          : source::setting_prob_bounds(sv, o.r_bits, n, o.m_exponent);
  json result = {{"bounds", io::to_json(b)}, {"chain", io::to_json(bounds::bound_chain(sv, o.r_bits, o.ky_fan))}};
  const int r_max = o.r_max > 0 ? o.r_max : (o.gnuplot_path.empty() ? 0 : std::max(o.r_bits, 60));
  if (r_max > 0) {
    require(r_max <= 60, "--r-max must not exceed 60");
    result["sweep"] = bound_sweep(sv, r_max, o.ky_fan);
    if (!o.gnuplot_path.empty()) write_gnuplot(o.gnuplot_path, result["sweep"], o.epsilon);
  }
  return result;
}

attack::AttackParams lp_params(const Options& o) {
  source::SvParameter sv(o.epsilon);
  auto p = o.m_override > 0 ? attack::attack_params_for_runs(sv, o.r_bits, o.m_override)
                            : attack::derive_attack_params(sv, o.r_bits, o.m_exponent);
  return p;
}

json lp_echo(const Options& o) {
  return {{"epsilon", number(o.epsilon)},   {"r_bits", o.r_bits},
          {"m_exponent", number(o.m_exponent)}, {"m", o.m_override},
          {"lower_side", o.lower_side},     {"oracle", o.oracle},
          {"max_simplex_m", o.max_simplex_m}};
}

json cmd_lp(const Options& o) {
  const auto p = lp_params(o);
  const auto form = attack::closed_form_optimum(p);
  const auto cert = attack::dual_certificate(p, attack::DualVariant::two_point, 1e-9, false);
  json result = {{"m", p.m},
                 {"n", p.n},
                 {"a", number(p.a)},
                 {"one_minus_a", number(p.one_minus_a)},
                 {"c_plus", number(p.c_plus)},
                 {"dual_precondition", p.dual_precondition()},
                 {"closed_form", io::to_json(form)},
                 {"value", number(form.value)},
                 {"certificate", io::to_json(cert, false)}};
  if (p.m <= o.max_simplex_m) {
    const auto solved = attack::solve_acceptance_lp(p, o.lower_side);
    result["simplex"] = io::to_json(solved.solution);
    result["primal"] = io::numbers(solved.solution.primal);
    result["dual"] = io::numbers(solved.solution.dual);
    result["primal_dual_gap"] = number(solved.solution.residuals.gap);
    result["closed_form_agreement"] = number(std::abs(solved.solution.value - form.value));
  } else {
    result["simplex"] = nullptr;
    result["primal"] = io::numbers(attack::closed_form_primal(p, form));
    result["dual"] = io::numbers(cert.y);
    result["primal_dual_gap"] = number(std::abs(cert.objective - form.value));
    result["closed_form_agreement"] = nullptr;
  }
  result["slacks"] = io::numbers(cert.slacks);
  if (o.oracle) {
    require(p.m <= 6 && p.n <= 4, "--oracle needs m <= 6 and n <= 4 (use --m and --r-bits 1)");
    const auto ensemble = attack::ensemble_from_type_probs(attack::closed_form_primal(p, form), p.n);
    result["oracle"] = io::to_json(attack::brute_force_cloud_oracle(p, ensemble), true);
  }
  return result;
}

json cmd_dual_check(const Options& o, bool& failed) {
  const auto p = lp_params(o);
  std::vector<attack::DualVariant> variants;
  const bool all = o.dual_variant == "all";
  if (all) {
    variants = {attack::DualVariant::two_point, attack::DualVariant::real_exponent,
                attack::DualVariant::shifted_exponent};
  } else {
    variants = {attack::parse_dual_variant(o.dual_variant)};
  }
  json certs = json::array();
  for (auto v : variants) {
    const auto cert = attack::dual_certificate(p, v);
    if (!all && !cert.feasible) failed = true;
    certs.push_back(io::to_json(cert, true));
  }
  return {{"attack", io::to_json(p)},
          {"closed_form_value", number(attack::closed_form_optimum(p).value)},
          {"certificates", certs}};
}

json cmd_cloud_verify(const Options& o) {
  source::SvParameter sv(o.epsilon);
  const double c_plus = source::c_plus(sv, o.cloud_m);
  const auto p = attack::make_attack_params(o.cloud_m, o.cloud_n, 0.5, c_plus);
  std::vector<double> r(o.cloud_m, 1.0);
  if (o.weights == "random") {
    Rng rng(o.seed);
    for (double& v : r) v = 0.05 + rng.uniform();
  } else {
    require(o.weights == "uniform", "--weights must be uniform or random");
  }
  // normalize so that sum_j C(m,j) n^j r_j = 1
  double total = 0.0;
  for (int j = 1; j <= o.cloud_m; ++j)
    total += logspace::binomial_value(o.cloud_m, j) * std::pow(static_cast<double>(o.cloud_n), j) * r[j - 1];
  for (double& v : r) v /= total;
  const auto ensemble = attack::ensemble_from_sequence_weights(r, o.cloud_n);
  return {{"attack", io::to_json(p)},
          {"sequence_weights", io::numbers(r)},
          {"type_probs", io::numbers(ensemble.type_probs)},
          {"report", io::to_json(attack::brute_force_cloud_oracle(p, ensemble), true)}};
}

protocol::ProtocolConfig sim_config(const Options& o) {
  protocol::ProtocolConfig c;
  c.n = o.n;
  c.runs = o.runs;
  c.epsilon = o.epsilon;
  c.source_strategy = source::parse_bias_strategy(o.source_strategy);
  c.supplier = protocol::parse_supplier(o.supplier);
  c.bad_box_kind = protocol::parse_bad_box_kind(o.bad_box_kind);
  c.seed = o.seed;
  if (c.supplier == protocol::Supplier::attack) {
    if (o.attack_type > 0) {
      require(o.attack_m >= o.attack_type, "--attack-m must be at least --attack-type");
      c.attack_type_probs.assign(o.attack_m, 0.0);
      c.attack_type_probs[o.attack_type - 1] = 1.0;
    } else {
      c.attack_type_probs = o.attack_type_probs;
    }
    require(!c.attack_type_probs.empty(),
            "attack supplier needs --attack-type-probs or --attack-type with --attack-m");
  }
  return c;
}

json sim_echo(const Options& o, const protocol::ProtocolConfig& c) {
  return {{"n", c.n},
          {"M", c.runs == 0 ? protocol::default_runs(c.n) : c.runs},
          {"epsilon", number(c.epsilon)},
          {"source_strategy", o.source_strategy},
          {"supplier", o.supplier},
          {"bad_box_kind", o.bad_box_kind},
          {"attack_type_probs", io::numbers(c.attack_type_probs)},
          {"trials", o.trials},
          {"seed", o.seed}};
}

json cmd_simulate(const Options& o, const protocol::ProtocolConfig& c) {
  const auto summary = protocol::simulate(c, o.trials, o.threads);
  json result = io::to_json(summary);
  if (c.supplier == protocol::Supplier::attack) {
    // per-run non-detection 1 - 1/n holds for uniformly drawn settings
    const double a = 1.0 - 1.0 / c.n;
    double formula = 0.0;
    for (std::size_t k = 0; k < c.attack_type_probs.size(); ++k)
      formula += c.attack_type_probs[k] * std::pow(a, static_cast<double>(k + 1));
    result["uniform_input_acceptance"] = number(formula);
  }
  return result;
}

json cmd_toy() {
  const auto sc = boxes::canonical_toy_scenario();
  json witnesses = json::array();
  bool all_violated = true;
  bool all_pinned = true;
  for (int s = 1; s <= boxes::ToyScenario::n; ++s) {
    const auto pr = boxes::pr_outcome(sc, s);
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        const auto post = boxes::toy_attack(sc, s, {x, y});
        const bool matches_pr = x == pr[0] && y == pr[1];
        if (matches_pr) all_pinned = all_pinned && post.mass_on_tester_input == 1.0;
        if (!matches_pr && post.event_probability > 0.0) all_violated = all_violated && post.sv_condition_violated;
        witnesses.push_back({{"tester_input", s},
                             {"observed", {x, y}},
                             {"matches_pr", matches_pr},
                             {"event_probability", number(post.event_probability)},
                             {"posterior", io::numbers(post.posterior)},
                             {"posterior_on_tester_input", number(post.mass_on_tester_input)},
                             {"sv_condition_violated", post.sv_condition_violated}});
      }
    }
  }
  const auto mixture = boxes::toy_mixture(sc);
  json locals = json::array();
  for (std::size_t j = 0; j < sc.local_boxes.size(); ++j)
    locals.push_back({{"outputs", sc.local_outputs[j]},
                      {"true_bell_value", number(boxes::true_bell_value(sc.local_boxes[j]))}});
  return {{"n", boxes::ToyScenario::n},
          {"local_boxes", locals},
          {"mixture", io::to_json(mixture)},
          {"mixture_true_bell_value", number(boxes::true_bell_value(mixture))},
          {"observed_bell_value", number(boxes::toy_observed_value(sc))},
          {"matched_observation_pins_source", all_pinned},
          {"mismatch_violates_sv_condition", all_violated},
          {"witnesses", witnesses}};
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.output_path, std::ios::binary);
  require(static_cast<bool>(f), "cannot open output path '" + o.output_path + "'");
  f << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  o.seed = default_seed();
  CLI::App app{"Randomness amplification from SV sources: bounds, attack LP and protocol simulation", "svamp"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("-o,--output", o.output_path, "Write the artifact to this file instead of stdout");
  app.add_option("--format", o.format, "Output format: json, or csv (simulate transcript only)")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* threshold = app.add_subcommand("threshold", "Critical epsilon values and the entropy constant");
  threshold->add_option("--m-exponent", o.m_exponent, "Run exponent used by the LP threshold");
  threshold->add_option("--entropy-tolerance", o.entropy_tolerance, "Bisection width for the entropy root");

  auto* bounds_cmd = app.add_subcommand("bounds", "Setting-probability bounds and the single-box bound chain");
  bounds_cmd->add_option("--epsilon", o.epsilon, "Source bias")->required();
  bounds_cmd->add_option("--r-bits", o.r_bits, "Setting bits r, n = 2^(r+1)")->required();
  bounds_cmd->add_option("--m-exponent", o.m_exponent, "m = round((n/2)^exponent) for c_plus");
  bounds_cmd->add_flag("--ky-fan", o.ky_fan, "Use the refined large-n bounds");
  bounds_cmd->add_option("--r-max", o.r_max, "Also sweep r = 1..r-max");
  bounds_cmd->add_option("--gnuplot-script", o.gnuplot_path, "Write a gnuplot script plotting the sweep");

  auto add_lp_flags = [&o](CLI::App* sub) {
    sub->add_option("--epsilon", o.epsilon, "Source bias")->required();
    sub->add_option("--r-bits", o.r_bits, "Setting bits r, n = 2^(r+1)")->required();
    sub->add_option("--m-exponent", o.m_exponent, "m = round((n/2)^exponent)");
    sub->add_option("--m", o.m_override, "Explicit run count m (overrides the exponent)");
  };
  auto* lp_cmd = app.add_subcommand("lp", "Acceptance-probability LP: simplex, closed form and dual");
  add_lp_flags(lp_cmd);
  lp_cmd->add_flag("--lower-side", o.lower_side, "Add the lower steering constraints");
  lp_cmd->add_flag("--oracle", o.oracle, "Run the brute-force cloud oracle (m <= 6, n <= 4)");
  lp_cmd->add_option("--max-simplex-m", o.max_simplex_m, "Largest m solved by the simplex");

  auto* dual_cmd = app.add_subcommand("dual-check", "Verify a dual certificate constraint by constraint");
  add_lp_flags(dual_cmd);
  dual_cmd->add_option("--variant", o.dual_variant, "two_point, real_exponent, shifted_exponent or all")
      ->check(CLI::IsMember({"two_point", "real_exponent", "shifted_exponent", "all"}));

  auto* cloud_cmd = app.add_subcommand("cloud-verify", "Exhaustive cloud enumeration against the LP rows");
  cloud_cmd->add_option("--m", o.cloud_m, "Runs m (<= 6)");
  cloud_cmd->add_option("--n", o.cloud_n, "Chain edges n (<= 4)");
  cloud_cmd->add_option("--epsilon", o.epsilon, "Source bias for c_plus");
  cloud_cmd->add_option("--weights", o.weights, "uniform or random sequence weights")
      ->check(CLI::IsMember({"uniform", "random"}));
  cloud_cmd->add_option("--seed", o.seed, "Seed for random weights (default $SVAMP_SEED or 1)");

  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo simulation of the protocol");
  sim_cmd->add_option("--n", o.n, "Chain length (power of two, >= 4)");
  sim_cmd->add_option("--M", o.runs, "Total runs M (default round((n/2)^2.99))");
  sim_cmd->add_option("--epsilon", o.epsilon, "Source bias");
  sim_cmd->add_option("--supplier", o.supplier, "honest_quantum, honest_ideal, attack or toy")
      ->check(CLI::IsMember({"honest_quantum", "honest_ideal", "attack", "toy"}));
  sim_cmd->add_option("--source-strategy", o.source_strategy, "uniform or extremal_bernoulli")
      ->check(CLI::IsMember({"uniform", "extremal_bernoulli"}));
  sim_cmd->add_option("--bad-box-kind", o.bad_box_kind, "local_deterministic or uniform_flipped")
      ->check(CLI::IsMember({"local_deterministic", "uniform_flipped"}));
  sim_cmd->add_option("--attack-type-probs", o.attack_type_probs, "Attack ensemble P_1..P_m")
      ->delimiter(',');
  sim_cmd->add_option("--attack-type", o.attack_type, "Put all attack mass on this type");
  sim_cmd->add_option("--attack-m", o.attack_m, "Ensemble size m for --attack-type");
  sim_cmd->add_option("--trials", o.trials, "Number of protocol executions");
  sim_cmd->add_option("--threads", o.threads, "Worker threads (results do not depend on it)");
  sim_cmd->add_option("--seed", o.seed, "Master seed (default $SVAMP_SEED or 1)");
  sim_cmd->add_option("--transcript", o.transcript_path, "Write the CSV transcript of trial 0 here");

  auto* toy_cmd = app.add_subcommand("toy-example", "Source-adapted local boxes and the SV-condition witness");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return usage_error;
  }

  if (o.format == "csv" && !sim_cmd->parsed()) {
    err << "error: --format csv is only available for simulate\n";
    return usage_error;
  }

  try {
    json doc;
    bool failed = false;
    if (threshold->parsed()) {
      doc = {{"command", "threshold"},
             {"params", {{"m_exponent", number(o.m_exponent)}, {"entropy_tolerance", number(o.entropy_tolerance)}}},
             {"result", cmd_threshold(o)}};
    } else if (bounds_cmd->parsed()) {
      doc = {{"command", "bounds"}, {"params", bounds_params(o)}, {"result", cmd_bounds(o)}};
    } else if (lp_cmd->parsed()) {
      doc = {{"command", "lp"}, {"params", lp_echo(o)}, {"result", cmd_lp(o)}};
    } else if (dual_cmd->parsed()) {
      json params = lp_echo(o);
      params["variant"] = o.dual_variant;
      doc = {{"command", "dual-check"}, {"params", params}, {"result", cmd_dual_check(o, failed)}};
    } else if (cloud_cmd->parsed()) {
      doc = {{"command", "cloud-verify"},
             {"params",
              {{"m", o.cloud_m}, {"n", o.cloud_n}, {"epsilon", number(o.epsilon)}, {"weights", o.weights}, {"seed", o.seed}}},
             {"result", cmd_cloud_verify(o)}};
    } else if (sim_cmd->parsed()) {
      const auto config = sim_config(o);
      protocol::validate(config);
      if (!o.transcript_path.empty() || o.format == "csv") {
        auto single = config;
        single.keep_transcript = true;
        const auto outcome = protocol::run_protocol(single);
        std::ostringstream csv;
        io::write_transcript_csv(csv, outcome.transcript);
        if (!o.transcript_path.empty()) {
          std::ofstream f(o.transcript_path, std::ios::binary);
          require(static_cast<bool>(f), "cannot open transcript path '" + o.transcript_path + "'");
          f << csv.str();
        }
        if (o.format == "csv") {
          emit(o, csv.str(), out);
          return ok;
        }
      }
      doc = {{"command", "simulate"}, {"params", sim_echo(o, config)}, {"result", cmd_simulate(o, config)}};
    } else if (toy_cmd->parsed()) {
      doc = {{"command", "toy-example"}, {"params", json::object()}, {"result", cmd_toy()}};
    }
    emit(o, io::dump(doc), out);
    if (failed) {
      err << "error: dual certificate has a constraint with slack below -1e-9\n";
      return computation_error;
    }
    return ok;
  } catch (const precondition_error& e) {
    err << "error: " << e.what() << '\n';
    return computation_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return computation_error;
  }
}

}  // namespace svamp::cli

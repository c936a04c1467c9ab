#include "json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "svamp/error.hpp"

namespace svamp::io {

double sig15(double v) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return std::strtod(buf, nullptr);
}

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return sig15(v);
}

json numbers(const std::vector<double>& values) {
  json arr = json::array();
  for (double v : values) arr.push_back(number(v));
  return arr;
}

json to_json(const boxes::ChainBox& box) {
  json edges = json::array();
  for (const auto& t : box.edges) edges.push_back(numbers({t[0], t[1], t[2], t[3]}));
  return {{"n", box.n}, {"edges", edges}};
}

boxes::ChainBox chain_box_from_json(const json& j) {
  require(j.is_object() && j.contains("n") && j.contains("edges"), "box JSON needs fields n and edges");
  require(j["n"].is_number_integer(), "box field n must be an integer");
  boxes::ChainBox box;
  box.n = j["n"].get<int>();
  boxes::require_chain_length(box.n);
  const auto& edges = j["edges"];
  require(edges.is_array() && edges.size() == static_cast<std::size_t>(box.n),
          "box field edges must list n tables");
  for (const auto& e : edges) {
    require(e.is_array() && e.size() == 4, "each edge table needs [p00, p01, p10, p11]");
    boxes::EdgeTable t{};
    for (int c = 0; c < 4; ++c) {
      require(e[c].is_number(), "edge table entries must be numbers");
      t[c] = e[c].get<double>();
    }
    box.edges.push_back(t);
  }
  return box;
}

json to_json(const source::ConditionalBounds& b) {
  return {{"epsilon", number(b.epsilon)},
          {"r_bits", b.r_bits},
          {"n_settings", b.n_settings},
          {"m_runs", number(b.m_runs)},
          {"p_min", number(b.p_min())},
          {"p_max", number(b.p_max())},
          {"zeta_min", number(b.zeta_min())},
          {"zeta_max", number(b.zeta_max())},
          {"c_plus", number(b.c_plus())},
          {"log_p_min", number(b.log_p_min)},
          {"log_p_max", number(b.log_p_max)},
          {"log_zeta_min", number(b.log_zeta_min)},
          {"log_zeta_max", number(b.log_zeta_max)},
          {"log_c_plus", number(b.log_c_plus)}};
}

json to_json(const bounds::BoundChainResult& r) {
  return {{"ratio_lower_bound", number(r.ratio_lower_bound)},
          {"delta_true_upper", number(r.delta_true_upper)},
          {"d_upper", number(r.d_upper)},
          {"delta_big", number(r.delta_big)},
          {"log_delta_true_upper", number(r.log_delta_true_upper)},
          {"log_d_upper", number(r.log_d_upper)},
          {"log_delta_big", number(r.log_delta_big)}};
}

json to_json(const attack::AttackParams& p) {
  return {{"m", p.m},
          {"n", p.n},
          {"a", number(p.a)},
          {"one_minus_a", number(p.one_minus_a)},
          {"c_plus", number(p.c_plus)},
          {"c_minus", number(p.c_minus)},
          {"dual_precondition", p.dual_precondition()}};
}

json to_json(const attack::ClosedForm& f) {
  return {{"u", f.u},
          {"v", f.v},
          {"s", number(f.s)},
          {"integral", f.integral},
          {"p_u", number(f.p_u)},
          {"p_v", number(f.p_v)},
          {"value", number(f.value)},
          {"upper_bound", number(f.upper_bound)}};
}

json to_json(const attack::DualCertificate& c, bool with_slacks) {
  json out = {{"variant", std::string(attack::to_string(c.variant))},
              {"objective", number(c.objective)},
              {"y1", number(c.y.front())},
              {"y_top", number(c.y[c.y.size() - 2])},
              {"min_slack", number(c.min_slack)},
              {"min_slack_index", c.min_slack_index},
              {"feasible", c.feasible},
              {"precondition_ok", c.precondition_ok}};
  if (with_slacks) out["slacks"] = numbers(c.slacks);
  return out;
}

json to_json(const lp::LpSolution& s) {
  return {{"status", std::string(lp::to_string(s.status))},
          {"value", number(s.value)},
          {"iterations", s.iterations},
          {"residuals",
           {{"primal", number(s.residuals.primal)},
            {"dual", number(s.residuals.dual)},
            {"gap", number(s.residuals.gap)},
            {"complementarity", number(s.residuals.complementarity)}}}};
}

json to_json(const attack::CloudOracleReport& r, bool with_clouds) {
  json out = {{"m", r.m},
              {"n", r.n},
              {"sequences", r.sequences},
              {"clouds_checked", r.clouds.size()},
              {"max_q_error", number(r.max_q_error)},
              {"max_f_error", number(r.max_f_error)},
              {"max_residual_error", number(r.max_residual_error)}};
  if (with_clouds) {
    json arr = json::array();
    for (const auto& c : r.clouds) {
      arr.push_back({{"pattern", c.pattern},
                     {"k", c.k},
                     {"q_enumerated", number(c.q_enumerated)},
                     {"q_formula", number(c.q_formula)},
                     {"f_given_cloud", number(c.f_given_cloud)},
                     {"residual_enumerated", number(c.residual_enumerated)},
                     {"residual_lp", number(c.residual_lp)},
                     {"sv_bound_holds", c.sv_bound_holds}});
    }
    out["clouds"] = arr;
  }
  return out;
}

json to_json(const protocol::Interval& i) {
  return {{"estimate", number(i.estimate)}, {"lower", number(i.lower)}, {"upper", number(i.upper)}};
}

json to_json(const protocol::SimulationSummary& s) {
  return {{"trials", s.trials},
          {"accepted", s.accepted},
          {"fail_cardinality", s.fail_cardinality},
          {"fail_consistency", s.fail_consistency},
          {"ones", s.ones},
          {"guess_hits", s.guess_hits},
          {"in_s_runs", s.in_s_runs},
          {"inconsistent_in_s", s.inconsistent_in_s},
          {"f_on_bad", s.f_on_bad},
          {"steering_clipped", s.clipped},
          {"mean_s_size", number(static_cast<double>(s.s_size_total) / static_cast<double>(s.trials))},
          {"acceptance", to_json(s.acceptance())},
          {"acceptance_given_cardinality", to_json(s.acceptance_given_cardinality())},
          {"inconsistency_rate", to_json(s.inconsistency_rate())},
          {"bias", to_json(s.bias())},
          {"marginal_bias", to_json(s.marginal_bias())},
          {"f_on_bad_rate", to_json(s.f_on_bad_rate())}};
}

void write_transcript_csv(std::ostream& out, const std::vector<protocol::RunRecord>& runs) {
  out << "run_index,alice_setting,bob_setting,in_s,edge,x,y,consistent,bad,contradiction_edge\n";
  for (const auto& r : runs) {
    out << r.run_index << ',' << r.alice_setting << ',' << r.bob_setting << ',' << (r.in_s ? 1 : 0)
        << ',' << r.edge << ',' << r.x << ',' << r.y << ',' << (r.consistent ? 1 : 0) << ','
        << (r.bad ? 1 : 0) << ',' << r.contradiction_edge << '\n';
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace svamp::io

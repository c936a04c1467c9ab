#include "svamp/attack_lp.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "svamp/error.hpp"
#include "svamp/logspace.hpp"

namespace svamp::attack {

using logspace::neg_inf;

double AttackParams::log_q() const { return std::log1p(-1.0 / static_cast<double>(n)); }

double AttackParams::log_a() const { return std::log1p(-one_minus_a); }

bool AttackParams::dual_precondition() const {
  return one_minus_a <= 1.0 / static_cast<double>(n) * (1.0 + 1e-12);
}

namespace {

void check_params(const AttackParams& p) {
  require(p.m >= 1, "m must be at least 1");
  require(p.n >= 2, "n must be at least 2");
  require(p.one_minus_a > 0.0 && p.one_minus_a < 1.0, "a must lie in (0, 1)");
  require(p.c_plus > 0.0 && p.c_plus <= 1.0, "c_plus must lie in (0, 1]");
  require(p.c_minus >= 0.0 && p.c_minus <= p.c_plus, "c_minus must lie in [0, c_plus]");
  require(p.c_plus * p.m >= 1.0 - 1e-12,
          "c_plus must be at least 1/m, otherwise no ensemble satisfies the constraints");
}

}  // namespace

AttackParams make_attack_params(int m, std::int64_t n, double a, double c_plus, double c_minus) {
  AttackParams p;
  p.m = m;
  p.n = n;
  p.a = a;
  p.one_minus_a = 1.0 - a;
  p.c_plus = c_plus;
  p.c_minus = c_minus;
  check_params(p);
  return p;
}

AttackParams attack_params_for_runs(const source::SvParameter& params, int r_bits, int m) {
  require(r_bits >= 1 && r_bits <= 60, "r_bits must lie in [1, 60]");
  require(m >= 1, "m must be at least 1");
  const std::int64_t n = std::int64_t{1} << (r_bits + 1);
  const auto b = source::setting_prob_bounds(params, r_bits, n);
  AttackParams p;
  p.m = m;
  p.n = n;
  p.one_minus_a = std::exp(b.log_p_min + b.log_zeta_min - b.log_p_max);
  p.a = 1.0 - p.one_minus_a;
  p.c_plus = source::c_plus(params, m);
  p.c_minus = std::pow(params.p_minus(), std::log2(static_cast<double>(m)));
  p.epsilon = params.epsilon();
  p.r_bits = r_bits;
  check_params(p);
  return p;
}

AttackParams derive_attack_params(const source::SvParameter& params, int r_bits, double m_exponent) {
  require(r_bits >= 1 && r_bits <= 60, "r_bits must lie in [1, 60]");
  require(m_exponent > 0.0, "m_exponent must be positive");
  const double n_half = std::ldexp(1.0, r_bits);
  const double m = std::round(std::pow(n_half, m_exponent));
  require(m >= 1.0 && m <= static_cast<double>(std::numeric_limits<int>::max()),
          "run count m = round((n/2)^m_exponent) does not fit the supported range");
  auto p = attack_params_for_runs(params, r_bits, static_cast<int>(m));
  p.m_exponent = m_exponent;
  return p;
}

double AttackEnsemble::sequence_weight(int j) const { return std::exp(log_sequence_weights[j - 1]); }

AttackEnsemble ensemble_from_type_probs(const std::vector<double>& type_probs, std::int64_t n) {
  require(!type_probs.empty(), "ensemble needs at least one type");
  require(n >= 2, "n must be at least 2");
  AttackEnsemble e;
  e.m = static_cast<int>(type_probs.size());
  e.n = n;
  e.type_probs = type_probs;
  double total = 0.0;
  const double log_n = std::log(static_cast<double>(n));
  for (int j = 1; j <= e.m; ++j) {
    const double pj = type_probs[j - 1];
    require(std::isfinite(pj) && pj >= 0.0, "type probabilities must be nonnegative");
    total += pj;
    e.log_sequence_weights.push_back(pj > 0.0 ? std::log(pj) - logspace::binomial(e.m, j) - j * log_n
                                              : neg_inf);
  }
  require(std::abs(total - 1.0) <= 1e-12, "type probabilities must sum to 1");
  return e;
}

AttackEnsemble ensemble_from_sequence_weights(const std::vector<double>& weights, std::int64_t n) {
  require(!weights.empty(), "ensemble needs at least one type");
  require(n >= 2, "n must be at least 2");
  const int m = static_cast<int>(weights.size());
  const double log_n = std::log(static_cast<double>(n));
  std::vector<double> probs;
  for (int j = 1; j <= m; ++j) {
    require(std::isfinite(weights[j - 1]) && weights[j - 1] >= 0.0,
            "sequence weights must be nonnegative");
    probs.push_back(weights[j - 1] > 0.0
                        ? std::exp(std::log(weights[j - 1]) + logspace::binomial(m, j) + j * log_n)
                        : 0.0);
  }
  auto e = ensemble_from_type_probs(probs, n);
  for (int j = 1; j <= m; ++j)
    e.log_sequence_weights[j - 1] = weights[j - 1] > 0.0 ? std::log(weights[j - 1]) : neg_inf;
  return e;
}

double log_cloud_probability(const AttackEnsemble& ensemble, int k) {
  require(k >= 1 && k <= ensemble.m, "cloud size k must lie in [1, m]");
  const double log_n1 = std::log(static_cast<double>(ensemble.n - 1));
  double acc = neg_inf;
  for (int s = 0; s <= ensemble.m - k; ++s) {
    const double lr = ensemble.log_sequence_weights[k + s - 1];
    if (lr == neg_inf) continue;
    acc = logspace::add(acc, logspace::binomial(ensemble.m - k, s) + s * log_n1 + lr);
  }
  return acc;
}

double cloud_probability(const AttackEnsemble& ensemble, int k) {
  return std::exp(log_cloud_probability(ensemble, k));
}

namespace {

// 1/j - c with rounding noise snapped to zero, so c = 1/m stays feasible
double steering_gap(double inverse, double c) {
  const double d = inverse - c;
  return std::abs(d) <= 1e-12 * inverse ? 0.0 : d;
}

}  // namespace

double constraint_coefficient(const AttackParams& params, int k, int j) {
  if (j < k) return 0.0;
  const double weight = std::exp(logspace::binomial(j, k) + (j - k) * params.log_q());
  return weight * steering_gap(1.0 / j, params.c_plus);
}

lp::LpStandardForm lp_constraints(const AttackParams& params, bool lower_side) {
  check_params(params);
  require(params.m <= 5000, "dense LP construction is limited to m <= 5000");
  const int m = params.m;
  lp::LpStandardForm out;
  out.objective.resize(m);
  const double log_a = params.log_a();
  for (int k = 1; k <= m; ++k) out.objective[k - 1] = std::exp(k * log_a);
  for (int k = 1; k <= m; ++k) {
    std::vector<double> row(m, 0.0);
    for (int j = k; j <= m; ++j) row[j - 1] = constraint_coefficient(params, k, j);
    out.matrix.push_back(std::move(row));
    out.rhs.push_back(0.0);
  }
  if (lower_side) {
    for (int k = 1; k <= m; ++k) {
      std::vector<double> row(m, 0.0);
      for (int j = k; j <= m; ++j) {
        const double weight = std::exp(logspace::binomial(j, k) + (j - k) * params.log_q());
        row[j - 1] = -weight * steering_gap(1.0 / j, params.c_minus);
      }
      out.matrix.push_back(std::move(row));
      out.rhs.push_back(0.0);
    }
  }
  out.matrix.emplace_back(m, 1.0);
  out.rhs.push_back(1.0);
  out.matrix.emplace_back(m, -1.0);
  out.rhs.push_back(-1.0);
  return out;
}

AcceptanceLp solve_acceptance_lp(const AttackParams& params, bool lower_side,
                                 const lp::SimplexOptions& options) {
  AcceptanceLp out;
  out.lp = lp_constraints(params, lower_side);
  // The steering rows are homogeneous and the objective is positive, so the
  // optimum of the relaxation with only sum P <= 1 sits on sum P = 1. Solving
  // that form avoids the paired +-sum rows, whose bases go singular.
  auto relaxed = out.lp;
  relaxed.matrix.pop_back();
  relaxed.rhs.pop_back();
  auto sol = lp::simplex_solve(relaxed, options);
  if (sol.status == lp::LpStatus::optimal) {
    const double mass = std::accumulate(sol.primal.begin(), sol.primal.end(), 0.0);
    if (std::abs(mass - 1.0) > 1e-9) {
      sol.status = lp::LpStatus::infeasible;
    } else {
      sol.dual.push_back(0.0);
      sol.residuals = lp::check_solution(out.lp, sol.primal, sol.dual);
    }
  }
  out.solution = std::move(sol);
  return out;
}

namespace {

// u = floor(1/c) with near-integers snapped, so that c = 1/m computed in
// floating point still counts as integral.
std::pair<int, bool> floor_inverse(double c) {
  const double inv = 1.0 / c;
  const double nearest = std::round(inv);
  if (std::abs(inv - nearest) <= 1e-9 * std::max(1.0, inv)) return {static_cast<int>(nearest), true};
  return {static_cast<int>(std::floor(inv)), false};
}

}  // namespace

ClosedForm closed_form_optimum(const AttackParams& params) {
  check_params(params);
  const double c = params.c_plus;
  const auto [u, integral] = floor_inverse(c);
  ClosedForm out;
  out.u = std::min(u, params.m);
  out.v = out.u + 1;
  out.integral = integral || out.u == params.m;
  const double log_a = params.log_a();
  out.upper_bound = std::exp(log_a / c);
  if (out.integral) {
    out.s = 0.0;
    out.p_u = 1.0;
    out.p_v = 0.0;
    out.value = std::exp(out.u * log_a);
    return out;
  }
  out.s = (1.0 - out.u * c) / (params.q() * (out.v * c - 1.0));
  out.p_u = 1.0 / (1.0 + out.s);
  out.p_v = out.s / (1.0 + out.s);
  // a^u (P_u + P_v a) = a^u (1 - P_v (1 - a))
  out.value = std::exp(out.u * log_a) * (1.0 - out.p_v * params.one_minus_a);
  return out;
}

std::vector<double> closed_form_primal(const AttackParams& params, const ClosedForm& form) {
  std::vector<double> p(params.m, 0.0);
  p[form.u - 1] = form.p_u;
  if (!form.integral && form.v <= params.m) p[form.v - 1] = form.p_v;
  return p;
}

std::string_view to_string(DualVariant variant) {
  switch (variant) {
    case DualVariant::two_point: return "two_point";
    case DualVariant::real_exponent: return "real_exponent";
    case DualVariant::shifted_exponent: return "shifted_exponent";
  }
  return "two_point";
}

DualVariant parse_dual_variant(std::string_view name) {
  if (name == "two_point") return DualVariant::two_point;
  if (name == "real_exponent") return DualVariant::real_exponent;
  if (name == "shifted_exponent") return DualVariant::shifted_exponent;
  throw precondition_error("unknown dual variant '" + std::string(name) + "'");
}

DualCertificate dual_certificate(const AttackParams& params, DualVariant variant, double tolerance,
                                 bool enforce_precondition) {
  check_params(params);
  DualCertificate out;
  out.variant = variant;
  out.precondition_ok = params.dual_precondition();
  if (enforce_precondition)
    require(out.precondition_ok, "dual certificate needs (1 - a) <= 1/n; got 1 - a = " +
                                     std::to_string(params.one_minus_a) + ", 1/n = " +
                                     std::to_string(1.0 / static_cast<double>(params.n)));
  const int m = params.m;
  const double c = params.c_plus;
  const double w = params.one_minus_a;
  const double log_a = params.log_a();
  const double log_q = params.log_q();
  const double inv_c = 1.0 / c;

  // coefficient of y_1 in dual constraint k: q^{k-1} (1 - k c)
  auto y1_coefficient = [&](double k) { return std::exp((k - 1.0) * log_q) * (1.0 - k * c); };

  double y1 = 0.0;
  double log_top = 0.0;  // log y_{m+1}
  switch (variant) {
    case DualVariant::two_point: {
      const auto [u_raw, integral] = floor_inverse(c);
      (void)integral;
      const int u = std::min(u_raw, m);
      const int v = u + 1;
      const double cu = y1_coefficient(u);
      const double cv = y1_coefficient(v);
      // constraints u and v tight: cu y1 + Y = a^u, cv y1 + Y = a^v
      y1 = std::exp(u * log_a) * w / (cu - cv);
      log_top = u * log_a + std::log1p(-cu * y1 / std::exp(u * log_a));
      break;
    }
    case DualVariant::real_exponent:
      y1 = std::exp(inv_c * log_a) * w / (c * std::exp(inv_c * log_q));
      log_top = inv_c * log_a;
      break;
    case DualVariant::shifted_exponent:
      y1 = std::exp(inv_c * log_a) * w / ((inv_c + 1.0) * std::exp(inv_c * log_q));
      log_top = inv_c * log_a;
      break;
  }

  out.y.assign(m + 2, 0.0);
  out.y[0] = y1;
  out.y[m] = std::exp(log_top);
  out.objective = out.y[m];
  out.slacks.resize(m);
  out.min_slack = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= m; ++k) {
    // Y - a^k computed as a^k expm1(log Y - k log a) to keep the small difference exact
    const double diff = std::exp(k * log_a) * std::expm1(log_top - k * log_a);
    const double slack = diff + y1_coefficient(k) * y1;
    out.slacks[k - 1] = slack;
    if (slack < out.min_slack) {
      out.min_slack = slack;
      out.min_slack_index = k;
    }
  }
  out.feasible = out.min_slack >= -tolerance && y1 >= 0.0 && out.y[m] >= 0.0;
  return out;
}

double acceptance_probability(const AttackEnsemble& ensemble, double a) {
  require(a > 0.0 && a < 1.0, "a must lie in (0, 1)");
  double total = 0.0;
  const double log_a = std::log(a);
  for (int k = 1; k <= ensemble.m; ++k) total += ensemble.type_probs[k - 1] * std::exp(k * log_a);
  return total;
}

double epsilon2_residual(double epsilon, double m_exponent) {
  return std::pow(0.5 - epsilon, 12.0) - 2.0 * std::pow(0.5 + epsilon, 12.0 + m_exponent);
}

double threshold_epsilon2(double m_exponent, double tolerance) {
  require(m_exponent > 0.0, "m_exponent must be positive");
  require(tolerance > 0.0, "tolerance must be positive");
  auto f = [m_exponent](double e) { return epsilon2_residual(e, m_exponent); };
  require(f(0.0) > 0.0, "no positive root: the inequality already fails at epsilon = 0");
  auto stop = [tolerance](double lo, double hi) { return std::abs(hi - lo) < tolerance; };
  const auto [lo, hi] = boost::math::tools::bisect(f, 0.0, 0.5, stop);
  return 0.5 * (lo + hi);
}

}  // namespace svamp::attack

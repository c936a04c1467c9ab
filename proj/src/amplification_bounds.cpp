#include "svamp/amplification_bounds.hpp"

#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "svamp/error.hpp"
#include "svamp/logspace.hpp"

namespace svamp::bounds {

double quantum_value(double n_settings) {
  require(n_settings >= 2.0, "n_settings must be at least 2");
  const double s = std::sin(std::numbers::pi / (2.0 * n_settings));
  return s * s;
}

double log_ratio_bound(const source::ConditionalBounds& b) {
  return std::min(0.0, std::log(static_cast<double>(b.n_settings)) + b.log_p_min + b.log_zeta_min - b.log_p_max);
}

double ratio_bound(const source::ConditionalBounds& b) { return std::exp(log_ratio_bound(b)); }

double log_delta_true_upper(const source::ConditionalBounds& b) {
  return std::log(quantum_value(static_cast<double>(b.n_settings))) - log_ratio_bound(b);
}

double delta_true_upper(const source::ConditionalBounds& b) {
  return std::exp(log_delta_true_upper(b));
}

double log_d_upper(const source::ConditionalBounds& b) {
  return std::log(quantum_value(static_cast<double>(b.n_settings))) + b.log_p_max -
         std::log(2.0) - b.log_p_min - b.log_zeta_min;
}

double d_upper(const source::ConditionalBounds& b) { return std::exp(log_d_upper(b)); }

double log_delta_big(const source::SvParameter& params, int r_bits) {
  require(r_bits >= 0 && r_bits <= 1000, "r_bits must lie in [0, 1000]");
  const double r = r_bits;
  const double lp = params.log_p_plus();
  const double lm = params.log_p_minus();
  const double log_two = std::log(2.0);
  const double log_settings_minus_one = logspace::sub((r + 1.0) * log_two, 0.0);
  const double log_den_inner = logspace::add(2.0 * r * lp, log_settings_minus_one + 2.0 * r * lm);
  return std::log(std::numbers::pi * std::numbers::pi / 8.0) + (r + 1.0) * std::log(4.0) +
         12.0 * r * lp - 6.0 * r * lm - 3.0 * log_den_inner;
}

double delta_big(const source::SvParameter& params, int r_bits) {
  return std::exp(log_delta_big(params, r_bits));
}

double threshold_epsilon1() {
  const double t = std::exp2(1.0 / 12.0);
  return (t - 1.0) / (2.0 * (t + 1.0));
}

double binary_entropy(double p) {
  require(p >= 0.0 && p <= 1.0, "binary entropy argument must lie in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -(p * std::log(p) + (1.0 - p) * std::log1p(-p)) / std::numbers::ln2;
}

double solve_entropy_constant(double tolerance) {
  require(tolerance > 0.0, "tolerance must be positive");
  auto f = [](double x) { return binary_entropy(x) - 0.5; };
  auto stop = [tolerance](double lo, double hi) { return std::abs(hi - lo) < tolerance; };
  const auto [lo, hi] = boost::math::tools::bisect(f, 1e-12, 0.5 - 1e-12, stop);
  return lo + hi;  // c = 2 * midpoint
}

double threshold_ky_fan(double entropy_constant) {
  require(entropy_constant > 0.0 && entropy_constant < 1.0, "entropy constant must lie in (0, 1)");
  const double t = std::exp2(1.0 / (6.0 * (2.0 - entropy_constant)));
  return (t - 1.0) / (2.0 * (t + 1.0));
}

double threshold_ky_fan() { return threshold_ky_fan(solve_entropy_constant()); }

BoundChainResult bound_chain(const source::SvParameter& params, int r_bits, bool ky_fan) {
  require(r_bits >= 1 && r_bits <= 60, "r_bits must lie in [1, 60]");
  const std::int64_t n = std::int64_t{1} << (r_bits + 1);
  const auto b = ky_fan ? source::ky_fan_bounds(params, r_bits, solve_entropy_constant())
                        : source::setting_prob_bounds(params, r_bits, n);
  BoundChainResult out;
  out.epsilon = params.epsilon();
  out.r_bits = r_bits;
  out.n_settings = static_cast<double>(n);
  out.ratio_lower_bound = ratio_bound(b);
  out.log_delta_true_upper = log_delta_true_upper(b);
  out.log_d_upper = log_d_upper(b);
  out.log_delta_big = log_delta_big(params, r_bits);
  out.delta_true_upper = std::exp(out.log_delta_true_upper);
  out.d_upper = std::exp(out.log_d_upper);
  out.delta_big = std::exp(out.log_delta_big);
  return out;
}

}  // namespace svamp::bounds

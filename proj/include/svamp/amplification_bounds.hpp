#pragma once

#include "svamp/sv_source.hpp"

namespace svamp::bounds {

/// sin^2(pi / 2n), the quantum chain value. n may exceed int range.
double quantum_value(double n_settings);

/// n p_min zeta_min / p_max, the guaranteed ratio of observed to true value.
double ratio_bound(const source::ConditionalBounds& b);
double log_ratio_bound(const source::ConditionalBounds& b);

/// delta_Q p_max / (n p_min zeta_min).
double delta_true_upper(const source::ConditionalBounds& b);
double log_delta_true_upper(const source::ConditionalBounds& b);

/// delta_Q p_max / (2 p_min zeta_min).
double d_upper(const source::ConditionalBounds& b);
double log_d_upper(const source::ConditionalBounds& b);

/// Closed-form upper estimate of d_upper at n = 2^(r+1) using sin x <= x:
/// (pi^2/8) 4^(r+1) p+^(12r) / (p-^(6r) (p+^(2r) + (2^(r+1) - 1) p-^(2r))^3).
double log_delta_big(const source::SvParameter& params, int r_bits);
double delta_big(const source::SvParameter& params, int r_bits);

/// (2^(1/12) - 1) / (2 (2^(1/12) + 1)).
double threshold_epsilon1();

/// Binary entropy in bits; H(0) = H(1) = 0.
double binary_entropy(double p);

/// c in (0, 1) with H(c/2) = 1/2, bracketed on (1e-12, 0.5 - 1e-12) and
/// bisected until the bracket on c/2 is narrower than `tolerance`.
double solve_entropy_constant(double tolerance = 1e-10);

/// (2^(1/(6(2-c))) - 1) / (2 (2^(1/(6(2-c))) + 1)) with c from the entropy root.
double threshold_ky_fan(double entropy_constant);
double threshold_ky_fan();

struct BoundChainResult {
  double epsilon = 0.0;
  int r_bits = 0;
  double n_settings = 0.0;
  double ratio_lower_bound = 0.0;
  double delta_true_upper = 0.0;
  double d_upper = 0.0;
  double delta_big = 0.0;
  double log_delta_true_upper = 0.0;
  double log_d_upper = 0.0;
  double log_delta_big = 0.0;
};

/// Full single-box chain at n = 2^(r+1), with plain or Ky Fan bound bundles.
BoundChainResult bound_chain(const source::SvParameter& params, int r_bits, bool ky_fan = false);

}  // namespace svamp::bounds

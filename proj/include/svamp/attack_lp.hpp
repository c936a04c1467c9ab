#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "svamp/simplex.hpp"
#include "svamp/sv_source.hpp"

namespace svamp::attack {

struct AttackParams {
  int m = 1;                  // runs in S
  std::int64_t n = 2;         // chain edges
  double a = 0.5;             // per-run non-detection probability
  double one_minus_a = 0.5;   // kept separately: a is close to 1 for large n
  double c_plus = 1.0;        // upper steering bound p_+^{log2 m}
  double c_minus = 1.0;       // lower steering bound p_-^{log2 m}
  double epsilon = 0.0;       // source bias, when derived from one
  int r_bits = 0;
  double m_exponent = 0.0;

  double q() const { return 1.0 - 1.0 / static_cast<double>(n); }  // (n-1)/n
  double log_q() const;
  double log_a() const;
  /// (1 - a) <= 1/n, needed by the dual certificate.
  bool dual_precondition() const;
};

/// Validating constructor for hand-picked parameters; c_minus defaults to a
/// lower bound that never binds.
AttackParams make_attack_params(int m, std::int64_t n, double a, double c_plus, double c_minus = 0.0);

/// n = 2^(r+1), m = round((n/2)^m_exponent), a = 1 - p_min zeta_min / p_max with
/// the plain bounds, c_plus = p_+^{log2 m}.
AttackParams derive_attack_params(const source::SvParameter& params, int r_bits,
                                  double m_exponent = 1.99);

/// Same composition with an explicit run count m.
AttackParams attack_params_for_runs(const source::SvParameter& params, int r_bits, int m);

// P[j-1] is the probability of the class of type-j sequences; r[j-1] the
// probability of one such sequence, kept as a logarithm because it underflows.
struct AttackEnsemble {
  int m = 0;
  std::int64_t n = 0;
  std::vector<double> type_probs;
  std::vector<double> log_sequence_weights;

  double sequence_weight(int j) const;
};

/// From type probabilities; checks nonnegativity and sum 1 within 1e-12.
AttackEnsemble ensemble_from_type_probs(const std::vector<double>& type_probs, std::int64_t n);

/// From per-sequence weights r_j; P_j = C(m,j) n^j r_j must sum to 1.
AttackEnsemble ensemble_from_sequence_weights(const std::vector<double>& weights, std::int64_t n);

/// Q_k = sum_s C(m-k, s) (n-1)^s r_{k+s}.
double cloud_probability(const AttackEnsemble& ensemble, int k);
double log_cloud_probability(const AttackEnsemble& ensemble, int k);

/// C(j, k) q^{j-k} (1/j - c_plus): row k, column j entry of the constraint matrix.
double constraint_coefficient(const AttackParams& params, int k, int j);

/// The acceptance LP in standard form. Rows 1..m are the steering
/// constraints, then (optionally) m lower-side rows, then sum <= 1 and
/// -sum <= -1.
lp::LpStandardForm lp_constraints(const AttackParams& params, bool lower_side = false);

struct AcceptanceLp {
  lp::LpStandardForm lp;
  lp::LpSolution solution;  // primal, dual and residuals for `lp`
};

/// Solves the acceptance LP. Internally the objective is shifted to
/// (a^k - 1)/(1 - a), which keeps full precision when a is close to 1, and the
/// result is mapped back.
AcceptanceLp solve_acceptance_lp(const AttackParams& params, bool lower_side = false,
                                 const lp::SimplexOptions& options = {});

struct ClosedForm {
  int u = 1;
  int v = 2;
  double s = 0.0;
  bool integral = false;    // 1/c_plus is an integer
  double p_u = 1.0;         // mass on type u
  double p_v = 0.0;         // mass on type v (zero when integral)
  double value = 0.0;
  double upper_bound = 0.0;  // a^{1/c_plus}
};

/// Two-point optimum on u = floor(1/c_plus), v = u + 1.
ClosedForm closed_form_optimum(const AttackParams& params);

/// Dense (P_1..P_m) of a closed-form solution.
std::vector<double> closed_form_primal(const AttackParams& params, const ClosedForm& form);

enum class DualVariant { two_point, real_exponent, shifted_exponent };

std::string_view to_string(DualVariant variant);
DualVariant parse_dual_variant(std::string_view name);

struct DualCertificate {
  DualVariant variant = DualVariant::two_point;
  std::vector<double> y;        // length m + 2
  double objective = 0.0;       // y_{m+1} - y_{m+2}
  std::vector<double> slacks;   // (A^T y - c)_k for k = 1..m
  double min_slack = 0.0;
  int min_slack_index = 0;
  bool feasible = false;        // min_slack >= -tolerance and y >= 0
  bool precondition_ok = false;
};

/// Dual vector with only y_1 and y_{m+1} nonzero.
///  two_point:          constraints u and v tight (the certificate used by default)
///  real_exponent:    y_1 = (a^{1/c} - a^{1/c+1}) / (c q^{1/c}), y_{m+1} = a^{1/c}
///  shifted_exponent: y_1 = a^{1/c} (1 - a) / ((1/c + 1) q^{1/c}), y_{m+1} = a^{1/c}
/// Throws when (1 - a) > 1/n unless `enforce_precondition` is false.
DualCertificate dual_certificate(const AttackParams& params,
                                 DualVariant variant = DualVariant::two_point,
                                 double tolerance = 1e-9, bool enforce_precondition = true);

/// sum_k P_k a^k.
double acceptance_probability(const AttackEnsemble& ensemble, double a);

/// Root of (0.5 - eps)^12 = 2 (0.5 + eps)^(12 + m_exponent) on (0, 0.5).
double threshold_epsilon2(double m_exponent = 1.99, double tolerance = 1e-14);

/// (0.5 - eps)^12 - 2 (0.5 + eps)^(12 + m_exponent).
double epsilon2_residual(double epsilon, double m_exponent = 1.99);

}  // namespace svamp::attack

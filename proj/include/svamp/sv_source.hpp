#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svamp/rng.hpp"

namespace svamp::source {

/// Bias parameter of an epsilon-SV source. Every bit has conditional
/// probability in [p_minus, p_plus] = [0.5 - epsilon, 0.5 + epsilon].
class SvParameter {
 public:
  explicit SvParameter(double epsilon);

  double epsilon() const { return epsilon_; }
  double p_minus() const { return 0.5 - epsilon_; }
  double p_plus() const { return 0.5 + epsilon_; }
  double log_p_minus() const;
  double log_p_plus() const;

  /// True when p lies in [p_minus, p_plus] up to `tol`.
  bool admits(double p, double tol = 1e-15) const;

 private:
  double epsilon_;
};

enum class BiasStrategy { uniform, extremal_bernoulli, adversarial_table };

std::string_view to_string(BiasStrategy strategy);
BiasStrategy parse_bias_strategy(std::string_view name);

// Conditional probability of the next bit being 1, indexed by the last
// `memory_bits` emitted bits (most recent bit in the lowest position; missing
// history counts as zeros). A table whose entries alternate between p_minus
// and p_plus realizes an extremal source.
struct ConditionalTable {
  int memory_bits = 0;
  std::vector<double> p_one;
};

/// Validates table shape and that every entry respects the SV bound.
void validate_table(const SvParameter& params, const ConditionalTable& table);

struct SteeredBit {
  int bit;
  double p_one;   // probability actually used
  bool clipped;   // requested probability was outside [p_minus, p_plus]
};

// Stateful SV bit generator. The random variable e of the SV definition is
// represented only by the seed.
class SvGenerator {
 public:
  SvGenerator(SvParameter params, BiasStrategy strategy, std::uint64_t seed,
              ConditionalTable table = {});

  /// Next bit under the configured strategy.
  int next();

  /// Next bit with a caller-chosen conditional probability of 1, clipped into
  /// the SV interval. Used by adversaries steering the source.
  SteeredBit next_steered(double wanted_p_one);

  /// Conditional probability of 1 that the next call to next() will use.
  double next_probability() const;

  const SvParameter& params() const { return params_; }
  BiasStrategy strategy() const { return strategy_; }
  std::uint64_t emitted() const { return emitted_; }

 private:
  int emit(double p_one);

  SvParameter params_;
  BiasStrategy strategy_;
  ConditionalTable table_;
  Rng rng_;
  std::uint64_t history_ = 0;
  std::uint64_t emitted_ = 0;
};

struct SvBitString {
  std::vector<int> bits;
  std::vector<double> p_one;  // conditional probability used for each bit
  BiasStrategy strategy;
  std::uint64_t seed;
};

SvBitString sample_sv_bits(const SvParameter& params, std::int64_t count, BiasStrategy strategy,
                           std::uint64_t seed, const ConditionalTable& table = {});

// Bound bundle for conditional setting probabilities. Everything is held as a
// natural logarithm; the accessors exponentiate.
struct ConditionalBounds {
  double epsilon = 0.0;
  int r_bits = 0;
  std::int64_t n_settings = 0;
  double m_runs = 1.0;
  double log_p_min = 0.0;
  double log_p_max = 0.0;
  double log_zeta_min = 0.0;
  double log_zeta_max = 0.0;
  double log_c_plus = 0.0;

  double p_min() const;
  double p_max() const;
  double zeta_min() const;
  double zeta_max() const;
  double c_plus() const;

  // Generic pair bounding P(S=s | S'=s', O=o) in the box SV-condition;
  // instantiated with the zeta pair.
  double eta_min() const { return zeta_min(); }
  double eta_max() const { return zeta_max(); }
};

struct ZetaPair {
  double zeta_min;
  double zeta_max;
};

/// zeta_min = p_min^2 / (n p_max^2), zeta_max = 1 - (n - 1) zeta_min.
ZetaPair derive_conditional_bounds(double p_min, double p_max, std::int64_t n_settings);

/// Log-space variant used internally; returns {log zeta_min, log zeta_max}.
ZetaPair derive_conditional_bounds_log(double log_p_min, double log_p_max, std::int64_t n_settings);

/// Plain bounds p_min = p_-^{2r}/(n p_+^{2r}), p_max = p_+^{2r}/(p_+^{2r} + (n-1) p_-^{2r}).
/// Requires n_settings == 2^(r_bits+1). c_plus is filled for m = (n/2)^m_exponent
/// rounded to the nearest integer.
ConditionalBounds setting_prob_bounds(const SvParameter& params, int r_bits, std::int64_t n_settings,
                                      double m_exponent = 1.99);

/// Refined large-n bounds with the entropy constant c (H(c/2) = 1/2).
ConditionalBounds ky_fan_bounds(const SvParameter& params, int r_bits, double entropy_constant,
                                double m_exponent = 1.99);

/// c_+ = p_+^{log2 m}; real-valued log2 for non powers of two.
double c_plus(const SvParameter& params, double m);

/// Rounded run count m = round((n/2)^exponent).
std::int64_t runs_for_exponent(std::int64_t n_settings, double exponent);

}  // namespace svamp::source

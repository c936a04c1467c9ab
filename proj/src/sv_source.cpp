#include "svamp/sv_source.hpp"

#include <algorithm>
#include <cmath>

#include "svamp/error.hpp"
#include "svamp/logspace.hpp"

namespace svamp::source {

SvParameter::SvParameter(double epsilon) : epsilon_(epsilon) {
  require(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon < 0.5,
          "epsilon must lie in [0, 0.5)");
}

double SvParameter::log_p_minus() const { return std::log(p_minus()); }
double SvParameter::log_p_plus() const { return std::log(p_plus()); }

bool SvParameter::admits(double p, double tol) const {
  return p >= p_minus() - tol && p <= p_plus() + tol;
}

std::string_view to_string(BiasStrategy strategy) {
  switch (strategy) {
    case BiasStrategy::uniform: return "uniform";
    case BiasStrategy::extremal_bernoulli: return "extremal_bernoulli";
    case BiasStrategy::adversarial_table: return "adversarial_table";
  }
  return "uniform";
}

BiasStrategy parse_bias_strategy(std::string_view name) {
  if (name == "uniform") return BiasStrategy::uniform;
  if (name == "extremal_bernoulli") return BiasStrategy::extremal_bernoulli;
  if (name == "adversarial_table") return BiasStrategy::adversarial_table;
  throw precondition_error("unknown bias strategy '" + std::string(name) + "'");
}

void validate_table(const SvParameter& params, const ConditionalTable& table) {
  require(table.memory_bits >= 0 && table.memory_bits <= 20,
          "adversarial table memory must be in [0, 20] bits");
  require(table.p_one.size() == (std::size_t{1} << table.memory_bits),
          "adversarial table must have 2^memory_bits entries");
  for (double p : table.p_one) {
    require(params.admits(p), "adversarial table entry " + std::to_string(p) +
                                  " violates the SV bound [p_minus, p_plus]");
  }
}

SvGenerator::SvGenerator(SvParameter params, BiasStrategy strategy, std::uint64_t seed,
                         ConditionalTable table)
    : params_(params), strategy_(strategy), table_(std::move(table)), rng_(seed) {
  if (strategy_ == BiasStrategy::adversarial_table) validate_table(params_, table_);
}

double SvGenerator::next_probability() const {
  switch (strategy_) {
    case BiasStrategy::uniform: return 0.5;
    case BiasStrategy::extremal_bernoulli: return params_.p_plus();
    case BiasStrategy::adversarial_table: {
      const std::uint64_t mask = (std::uint64_t{1} << table_.memory_bits) - 1;
      return table_.p_one[history_ & mask];
    }
  }
  return 0.5;
}

int SvGenerator::emit(double p_one) {
  const int bit = rng_.bit(p_one);
  history_ = (history_ << 1) | static_cast<std::uint64_t>(bit);
  ++emitted_;
  return bit;
}

int SvGenerator::next() { return emit(next_probability()); }

SteeredBit SvGenerator::next_steered(double wanted_p_one) {
  const double used = std::clamp(wanted_p_one, params_.p_minus(), params_.p_plus());
  const bool clipped = used != wanted_p_one;
  return {emit(used), used, clipped};
}

SvBitString sample_sv_bits(const SvParameter& params, std::int64_t count, BiasStrategy strategy,
                           std::uint64_t seed, const ConditionalTable& table) {
  require(count >= 1, "count must be at least 1");
  SvGenerator gen(params, strategy, seed, table);
  SvBitString out{{}, {}, strategy, seed};
  out.bits.reserve(static_cast<std::size_t>(count));
  out.p_one.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    out.p_one.push_back(gen.next_probability());
    out.bits.push_back(gen.next());
  }
  return out;
}

double ConditionalBounds::p_min() const { return std::exp(log_p_min); }
double ConditionalBounds::p_max() const { return std::exp(log_p_max); }
double ConditionalBounds::zeta_min() const { return std::exp(log_zeta_min); }
double ConditionalBounds::zeta_max() const { return std::exp(log_zeta_max); }
double ConditionalBounds::c_plus() const { return std::exp(log_c_plus); }

ZetaPair derive_conditional_bounds_log(double log_p_min, double log_p_max, std::int64_t n_settings) {
  require(n_settings >= 2, "n_settings must be at least 2");
  require(log_p_min <= log_p_max + 1e-15 && log_p_max <= 0.0,
          "bounds must satisfy 0 < p_min <= p_max < 1");
  const double log_n = std::log(static_cast<double>(n_settings));
  const double log_zmin = 2.0 * log_p_min - log_n - 2.0 * log_p_max;
  // zeta_max = 1 - (n - 1) zeta_min
  const double log_rest = std::log(static_cast<double>(n_settings - 1)) + log_zmin;
  require(log_rest < 0.0, "inconsistent bound bundle: zeta_max would be <= 0");
  return {log_zmin, std::log1p(-std::exp(log_rest))};
}

ZetaPair derive_conditional_bounds(double p_min, double p_max, std::int64_t n_settings) {
  require(p_min > 0.0 && p_min <= p_max && p_max < 1.0,
          "bounds must satisfy 0 < p_min <= p_max < 1");
  const auto logs = derive_conditional_bounds_log(std::log(p_min), std::log(p_max), n_settings);
  return {std::exp(logs.zeta_min), std::exp(logs.zeta_max)};
}

std::int64_t runs_for_exponent(std::int64_t n_settings, double exponent) {
  require(n_settings >= 2, "n_settings must be at least 2");
  const double m = std::round(std::pow(n_settings / 2.0, exponent));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(m));
}

double c_plus(const SvParameter& params, double m) {
  require(m >= 1.0, "m must be at least 1");
  return std::pow(params.p_plus(), std::log2(m));
}

namespace {

void require_power_layout(int r_bits, std::int64_t n_settings) {
  require(r_bits >= 0 && r_bits <= 60, "r_bits must lie in [0, 60]");
  require(static_cast<double>(n_settings) == std::ldexp(1.0, r_bits + 1),
          "n_settings must equal 2^(r_bits+1)");
}

ConditionalBounds finish(const SvParameter& params, int r_bits, std::int64_t n_settings, double log_p_min,
                         double log_p_max, double m_exponent) {
  ConditionalBounds b;
  b.epsilon = params.epsilon();
  b.r_bits = r_bits;
  b.n_settings = n_settings;
  b.log_p_min = log_p_min;
  b.log_p_max = log_p_max;
  const auto z = derive_conditional_bounds_log(log_p_min, log_p_max, n_settings);
  b.log_zeta_min = z.zeta_min;
  b.log_zeta_max = z.zeta_max;
  // kept in floating point: for large r the run count exceeds 64-bit range
  b.m_runs = std::max(1.0, std::round(std::pow(static_cast<double>(n_settings) / 2.0, m_exponent)));
  b.log_c_plus = std::log2(b.m_runs) * params.log_p_plus();
  return b;
}

}  // namespace

ConditionalBounds setting_prob_bounds(const SvParameter& params, int r_bits, std::int64_t n_settings,
                                      double m_exponent) {
  require_power_layout(r_bits, n_settings);
  const double lm = params.log_p_minus();
  const double lp = params.log_p_plus();
  const double two_r = 2.0 * r_bits;
  const double log_n = std::log(static_cast<double>(n_settings));
  const double log_p_min = two_r * (lm - lp) - log_n;
  // at zero bias every setting has probability exactly 1/n
  const double log_p_max =
      lm == lp ? log_p_min
               : two_r * lp - logspace::add(two_r * lp, std::log(static_cast<double>(n_settings - 1)) + two_r * lm);
  return finish(params, r_bits, n_settings, log_p_min, log_p_max, m_exponent);
}

ConditionalBounds ky_fan_bounds(const SvParameter& params, int r_bits, double entropy_constant,
                                double m_exponent) {
  require(r_bits >= 1 && r_bits <= 60, "Ky Fan bounds need r_bits in [1, 60]");
  require(entropy_constant > 0.0 && entropy_constant < 1.0, "entropy constant must lie in (0, 1)");
  const double c = entropy_constant;
  const double r = r_bits;
  const double lm = params.log_p_minus();
  const double lp = params.log_p_plus();
  const double log_2r = r * std::log(2.0);
  const double log_p_min =
      2.0 * r * lm - logspace::add(2.0 * r * lm, log_2r + (2.0 - c) * r * lp + c * r * lm);
  const double log_p_max =
      2.0 * r * lp - logspace::add(2.0 * r * lp, log_2r + (2.0 - c) * r * lm + c * r * lp);
  const std::int64_t n = std::int64_t{1} << (r_bits + 1);
  return finish(params, r_bits, n, log_p_min, log_p_max, m_exponent);
}

}  // namespace svamp::source

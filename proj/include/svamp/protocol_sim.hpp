#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "svamp/sv_source.hpp"

namespace svamp::protocol {

enum class Supplier { honest_quantum, honest_ideal, attack, toy };
enum class BadBoxKind { local_deterministic, uniform_flipped };
enum class Result { fail_cardinality, fail_consistency, bit };

std::string_view to_string(Supplier supplier);
std::string_view to_string(BadBoxKind kind);
std::string_view to_string(Result result);
Supplier parse_supplier(std::string_view name);
BadBoxKind parse_bad_box_kind(std::string_view name);

struct ProtocolConfig {
  int n = 8;
  std::int64_t runs = 0;  // M; 0 selects round((n/2)^2.99)
  double epsilon = 0.0;
  source::BiasStrategy source_strategy = source::BiasStrategy::uniform;
  source::ConditionalTable source_table;
  Supplier supplier = Supplier::honest_quantum;
  std::vector<double> attack_type_probs;  // P_1..P_m of the attack ensemble
  BadBoxKind bad_box_kind = BadBoxKind::local_deterministic;
  std::uint64_t seed = 0;
  bool keep_transcript = false;
};

/// Default run count round((n/2)^2.99).
std::int64_t default_runs(int n);

/// Throws on odd n or n < 4, non-power-of-two n, M < 1, bad attack ensemble.
void validate(const ProtocolConfig& config);

struct RunRecord {
  std::int64_t run_index = 0;
  int alice_setting = 0;
  int bob_setting = 0;
  bool in_s = false;
  int edge = 0;  // measured chain edge, 0 when the pair is not in S
  int x = 0;
  int y = 0;
  bool consistent = true;
  bool bad = false;
  int contradiction_edge = 0;
};

struct ProtocolOutcome {
  Result result = Result::fail_cardinality;
  int bit = -1;
  std::int64_t s_size = 0;
  std::int64_t f_index = -1;     // run index of the output run
  int adversary_guess = 0;       // adversary's prediction of the output; 0 when it has no information
  bool f_on_bad = false;
  bool steering_clipped = false;
  int bad_boxes = 0;
  std::int64_t inconsistent_in_s = 0;
  std::vector<RunRecord> transcript;
};

/// One protocol execution with the seed of trial `trial`.
ProtocolOutcome run_trial(const ProtocolConfig& config, std::uint64_t trial);

/// Trial 0.
ProtocolOutcome run_protocol(const ProtocolConfig& config);

struct Interval {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Wilson score interval; z = 1.96 gives 95%.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

struct SimulationSummary {
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;
  std::uint64_t fail_cardinality = 0;
  std::uint64_t fail_consistency = 0;
  std::uint64_t ones = 0;          // accepted with output 1
  std::uint64_t guess_hits = 0;    // accepted with output equal to the adversary's guess
  std::uint64_t in_s_runs = 0;
  std::uint64_t inconsistent_in_s = 0;
  std::uint64_t f_on_bad = 0;      // accepted trials with f on a bad box
  std::uint64_t clipped = 0;       // trials whose steering hit the SV bound
  std::uint64_t s_size_total = 0;

  Interval acceptance() const;
  Interval acceptance_given_cardinality() const;
  Interval inconsistency_rate() const;
  /// |P(R = guess | accept) - 1/2| with interval.
  Interval bias() const;
  /// |P(R = 1 | accept) - 1/2| with interval.
  Interval marginal_bias() const;
  Interval f_on_bad_rate() const;
};

/// Runs trials 0..trials-1; threads > 1 splits trial ranges, the merge is
/// order independent so results do not depend on the thread count.
SimulationSummary simulate(const ProtocolConfig& config, std::uint64_t trials, int threads = 1);

Interval estimate_acceptance(const ProtocolConfig& config, std::uint64_t trials, int threads = 1);

Interval estimate_output_bias(const ProtocolConfig& config, std::uint64_t trials, int threads = 1);

}  // namespace svamp::protocol

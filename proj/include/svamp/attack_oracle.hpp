#pragma once

#include <cstdint>
#include <vector>

#include "svamp/attack_lp.hpp"

namespace svamp::attack {

struct CloudCheck {
  std::vector<int> pattern;          // detection pattern l
  int k = 0;                         // |l|
  double q_enumerated = 0.0;         // P(cloud) by enumeration
  double q_formula = 0.0;            // closed form Q_k
  double f_given_cloud = 0.0;        // P(f = i | cloud) for a detected position i
  double f_given_cloud_formula = 0.0;
  double residual_enumerated = 0.0;  // C(m,k) n^k (P(f=i, cloud) - c_plus Q_k)
  double residual_lp = 0.0;          // row k of the LP applied to (P_1..P_m)
  bool sv_bound_holds = false;       // P(f = i | cloud) <= c_plus
};

struct CloudOracleReport {
  int m = 0;
  std::int64_t n = 0;
  std::uint64_t sequences = 0;  // enumerated box sequences, all-ideal excluded
  std::vector<CloudCheck> clouds;
  double max_q_error = 0.0;
  double max_f_error = 0.0;
  double max_residual_error = 0.0;
};

/// Exhaustive enumeration of every box sequence (ideal, or bad with a
/// labelled contradiction edge) for a fixed choice of measured edges, every
/// detection pattern, and the uniform-over-bad-boxes choice of f. Limited to
/// m <= 6 and n <= 4.
CloudOracleReport brute_force_cloud_oracle(const AttackParams& params, const AttackEnsemble& ensemble);

// Ensemble over sequences of boxes given by contradiction-edge sets; an empty
// set is an ideal box.
struct RawSequence {
  std::vector<std::vector<int>> contradictions;  // one set per run
  double mass = 0.0;
};

struct RawEnsemble {
  int m = 0;
  std::int64_t n = 0;
  std::vector<RawSequence> sequences;
};

/// Throws on wrong lengths, repeated or out-of-range edges, masses not summing
/// to 1, or an all-ideal sequence with positive mass.
void validate_raw(const RawEnsemble& raw);

/// Replaces each box with j contradictions by one of its single-contradiction
/// versions with probability 1/j, then averages over all sequences of the same
/// type.
AttackEnsemble symmetrize_attack(const RawEnsemble& raw);

/// Acceptance with independent uniform inputs: every box with contradiction
/// set C passes with probability 1 - |C|/n.
double raw_acceptance_probability(const RawEnsemble& raw);

}  // namespace svamp::attack

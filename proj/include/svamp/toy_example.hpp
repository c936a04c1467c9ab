#pragma once

#include <array>
#include <vector>

#include "svamp/boxes.hpp"

namespace svamp::boxes {

// The CHSH scenario as the n = 4 chain: Alice's settings {1, 3}, Bob's {2, 4},
// source values label the four measured edges (1,2), (3,2), (3,4), (1,4).
struct ToyScenario {
  static constexpr int n = 4;
  std::vector<std::vector<int>> local_outputs;  // per local box, output of settings 1..4
  std::vector<ChainBox> local_boxes;
  std::vector<std::vector<double>> source_correlation;  // [s][j] = P(L_j | S = s)
  std::vector<std::vector<double>> input_correlation;   // [s][t] = P(I = edge t | S = s)
  std::vector<double> source_prior;                     // P(S = s)
  std::vector<double> tester_prior;                     // P(S' = s'), independent of S
};

/// Four deterministic boxes each adapted to one edge, Kronecker-delta
/// correlated with the source, uniform source and tester priors. The boxes are
/// chosen so that every edge outcome of a box is unique to it: a matched
/// PR-consistent observation pins the source value down.
ToyScenario canonical_toy_scenario();

/// Output the PR box would give on `edge` in this scenario: what L_edge shows there.
std::array<int, 2> pr_outcome(const ToyScenario& scenario, int edge);

struct ToyPosterior {
  double event_probability = 0.0;  // P(S' = s', O = o)
  std::vector<double> posterior;   // P(S = s | S' = s', O = o); zeros when undefined
  double mass_on_tester_input = 0.0;
  bool sv_condition_violated = false;  // event possible but posterior on S = s' is zero
};

/// Bayes over P(S) P(S') P(L | S) P(O | L, S').
ToyPosterior toy_attack(const ToyScenario& scenario, int tester_input, std::array<int, 2> observed);

/// L = sum_j P(L_j) L_j under the source prior.
ChainBox toy_mixture(const ToyScenario& scenario);

/// Bell value seen by the parties whose inputs follow the source.
double toy_observed_value(const ToyScenario& scenario);

}  // namespace svamp::boxes

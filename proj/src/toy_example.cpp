#include "svamp/toy_example.hpp"

#include "svamp/error.hpp"

namespace svamp::boxes {

ToyScenario canonical_toy_scenario() {
  ToyScenario sc;
  // outputs of settings (1, 2, 3, 4); the boxes contradict 1, 1, 3 and 3 edges
  sc.local_outputs = {{0, 0, 0, 0}, {1, 1, 1, 0}, {1, 0, 1, 1}, {0, 1, 0, 1}};
  for (const auto& o : sc.local_outputs) sc.local_boxes.push_back(deterministic_box(ToyScenario::n, o));
  const int k = ToyScenario::n;
  sc.source_correlation.assign(k, std::vector<double>(k, 0.0));
  sc.input_correlation.assign(k, std::vector<double>(k, 0.0));
  for (int s = 0; s < k; ++s) {
    sc.source_correlation[s][s] = 1.0;
    sc.input_correlation[s][s] = 1.0;
  }
  sc.source_prior.assign(k, 1.0 / k);
  sc.tester_prior.assign(k, 1.0 / k);
  return sc;
}

std::array<int, 2> pr_outcome(const ToyScenario& scenario, int edge) {
  require(edge >= 1 && edge <= ToyScenario::n, "toy edge out of range");
  return deterministic_outcome(ToyScenario::n, scenario.local_outputs[edge - 1], edge);
}

ToyPosterior toy_attack(const ToyScenario& scenario, int tester_input, std::array<int, 2> observed) {
  const int k = ToyScenario::n;
  require(tester_input >= 1 && tester_input <= k, "tester input must be an edge in [1, 4]");
  require((observed[0] == 0 || observed[0] == 1) && (observed[1] == 0 || observed[1] == 1),
          "observed outcome must be a pair of bits");
  ToyPosterior out;
  out.posterior.assign(k, 0.0);
  for (int s = 0; s < k; ++s) {
    double likelihood = 0.0;
    for (int j = 0; j < k; ++j) {
      likelihood += scenario.source_correlation[s][j] *
                    scenario.local_boxes[j].prob(tester_input, observed[0], observed[1]);
    }
    out.posterior[s] = scenario.source_prior[s] * scenario.tester_prior[tester_input - 1] * likelihood;
    out.event_probability += out.posterior[s];
  }
  if (out.event_probability > 0.0) {
    for (double& p : out.posterior) p /= out.event_probability;
  }
  out.mass_on_tester_input = out.posterior[tester_input - 1];
  out.sv_condition_violated = out.event_probability > 0.0 && out.mass_on_tester_input == 0.0;
  return out;
}

ChainBox toy_mixture(const ToyScenario& scenario) {
  const int k = ToyScenario::n;
  std::vector<double> weights(k, 0.0);
  for (int s = 0; s < k; ++s)
    for (int j = 0; j < k; ++j) weights[j] += scenario.source_prior[s] * scenario.source_correlation[s][j];
  return mix(scenario.local_boxes, weights);
}

double toy_observed_value(const ToyScenario& scenario) {
  const int k = ToyScenario::n;
  double v = 0.0;
  for (int s = 0; s < k; ++s)
    for (int t = 0; t < k; ++t)
      for (int j = 0; j < k; ++j)
        v += scenario.source_prior[s] * scenario.input_correlation[s][t] *
             scenario.source_correlation[s][j] * edge_error(scenario.local_boxes[j], t + 1);
  return v;
}

}  // namespace svamp::boxes

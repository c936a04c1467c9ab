#pragma once

#include <array>
#include <string>
#include <vector>

namespace svamp::boxes {

// Joint outcome distribution of one chain edge, indexed by 2*x + y where x is
// Alice's output and y is Bob's.
using EdgeTable = std::array<double, 4>;

// Chain layout on n settings (n even). Edge i < n measures settings {i, i+1},
// edge n measures {1, n}. Odd settings belong to Alice, even ones to Bob.
// Edges i < n ideally correlate the outputs, edge n anti-correlates them.
struct ChainBox {
  int n = 0;
  std::vector<EdgeTable> edges;  // edges[i - 1] is edge i

  double prob(int edge, int x, int y) const { return edges[edge - 1][2 * x + y]; }
};

/// Throws unless n is even and >= 2.
void require_chain_length(int n);

/// Alice's and Bob's setting on an edge (1-based).
int alice_setting(int edge, int n);
int bob_setting(int edge, int n);

/// Chain Bell indicator: 1 when the outcome contradicts the ideal correlation.
int bell_indicator(int edge, int n, int x, int y);

/// Probability mass on contradicting outcomes of one edge.
double edge_error(const ChainBox& box, int edge);

ChainBox ideal_box(int n);
ChainBox bad_box(int n, int contradiction_edge);
ChainBox quantum_box(int n);

/// Edge with error mass w split evenly over the two contradicting cells and
/// 1 - w over the two consistent ones. Building block of the cloud family.
EdgeTable family_edge(int edge, int n, double error_mass);

/// Local deterministic box; outputs[s - 1] is the output for setting s.
ChainBox deterministic_box(int n, const std::vector<int>& outputs);

/// Deterministic local box contradicting only `contradiction_edge`: outputs
/// equal `base_bit` up to setting e and flipped afterwards.
ChainBox local_bad_box(int n, int contradiction_edge, int base_bit = 0);

/// Outputs of a deterministic box on an edge.
std::array<int, 2> deterministic_outcome(int n, const std::vector<int>& outputs, int edge);

ChainBox mix(const std::vector<ChainBox>& boxes, const std::vector<double>& weights);

struct SignalingViolation {
  int setting;    // shared setting
  int edge_a;
  int edge_b;
  double magnitude;
  std::string party;  // "alice" or "bob"
};

struct NoSignalingReport {
  bool ok = true;
  std::vector<SignalingViolation> violations;
};

/// Also validates normalization and nonnegativity of every edge table.
NoSignalingReport check_no_signaling(const ChainBox& box, double tol = 1e-9);

/// (1/n) times the summed contradiction mass under independent uniform inputs.
double true_bell_value(const ChainBox& box);

/// Value when the source picks the measured edge: boxes_by_source[s - 1] is
/// the box supplied when the source equals s, and that box is measured on
/// edge s.
double observed_bell_value(const std::vector<ChainBox>& boxes_by_source,
                           const std::vector<double>& source_dist);

/// max over edges of (|p_i(0) - 1/2| + |p_i(1) - 1/2|) / 2 with p_i(x) = P(x, x)
/// on edges i < n and P(x, 1 - x) on edge n.
double randomness_distance(const ChainBox& box);

struct BoxDecomposition {
  double lambda = 0.0;
  std::vector<double> bad_weights;  // per contradiction edge
};

/// Decomposition (1 - lambda) ideal + sum_e w_e bad(e). Only boxes of this
/// family are accepted.
BoxDecomposition lambda_decompose(const ChainBox& box, double tol = 1e-9);

/// Rebuilds the family box from a decomposition.
ChainBox compose(int n, const BoxDecomposition& decomposition);

}  // namespace svamp::boxes

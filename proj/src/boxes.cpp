#include "svamp/boxes.hpp"

#include <cmath>
#include <numbers>

#include "svamp/error.hpp"

namespace svamp::boxes {

void require_chain_length(int n) {
  require(n >= 2 && n % 2 == 0, "chain length n must be even and >= 2, got " + std::to_string(n));
}

namespace {

void require_edge(int edge, int n) {
  require(edge >= 1 && edge <= n,
          "edge " + std::to_string(edge) + " out of range [1, " + std::to_string(n) + "]");
}

int ideal_parity(int edge, int n) { return edge == n ? 1 : 0; }

}  // namespace

int alice_setting(int edge, int n) {
  if (edge == n) return 1;
  return edge % 2 == 1 ? edge : edge + 1;
}

int bob_setting(int edge, int n) {
  if (edge == n) return n;
  return edge % 2 == 1 ? edge + 1 : edge;
}

int bell_indicator(int edge, int n, int x, int y) {
  return ((x ^ y) != ideal_parity(edge, n)) ? 1 : 0;
}

double edge_error(const ChainBox& box, int edge) {
  double s = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      if (bell_indicator(edge, box.n, x, y)) s += box.prob(edge, x, y);
  return s;
}

EdgeTable family_edge(int edge, int n, double error_mass) {
  EdgeTable t{};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      t[2 * x + y] = bell_indicator(edge, n, x, y) ? error_mass / 2.0 : (1.0 - error_mass) / 2.0;
  return t;
}

ChainBox ideal_box(int n) {
  require_chain_length(n);
  ChainBox box{n, {}};
  for (int e = 1; e <= n; ++e) box.edges.push_back(family_edge(e, n, 0.0));
  return box;
}

ChainBox bad_box(int n, int contradiction_edge) {
  require_chain_length(n);
  require_edge(contradiction_edge, n);
  ChainBox box = ideal_box(n);
  box.edges[contradiction_edge - 1] = family_edge(contradiction_edge, n, 1.0);
  return box;
}

ChainBox quantum_box(int n) {
  require_chain_length(n);
  const double s = std::sin(std::numbers::pi / (2.0 * n));
  ChainBox box{n, {}};
  for (int e = 1; e <= n; ++e) box.edges.push_back(family_edge(e, n, s * s));
  return box;
}

std::array<int, 2> deterministic_outcome(int n, const std::vector<int>& outputs, int edge) {
  return {outputs[alice_setting(edge, n) - 1], outputs[bob_setting(edge, n) - 1]};
}

ChainBox deterministic_box(int n, const std::vector<int>& outputs) {
  require_chain_length(n);
  require(outputs.size() == static_cast<std::size_t>(n), "need one output per setting");
  for (int o : outputs) require(o == 0 || o == 1, "outputs must be bits");
  ChainBox box{n, std::vector<EdgeTable>(n, EdgeTable{})};
  for (int e = 1; e <= n; ++e) {
    const auto [x, y] = deterministic_outcome(n, outputs, e);
    box.edges[e - 1][2 * x + y] = 1.0;
  }
  return box;
}

ChainBox local_bad_box(int n, int contradiction_edge, int base_bit) {
  require_chain_length(n);
  require_edge(contradiction_edge, n);
  require(base_bit == 0 || base_bit == 1, "base_bit must be 0 or 1");
  std::vector<int> outputs(n);
  for (int s = 1; s <= n; ++s) outputs[s - 1] = s <= contradiction_edge ? base_bit : 1 - base_bit;
  return deterministic_box(n, outputs);
}

ChainBox mix(const std::vector<ChainBox>& boxes, const std::vector<double>& weights) {
  require(!boxes.empty(), "mix needs at least one box");
  require(boxes.size() == weights.size(), "mix needs one weight per box");
  const int n = boxes.front().n;
  double total = 0.0;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    require(boxes[i].n == n, "mix: boxes have different chain lengths");
    require(weights[i] >= 0.0, "mix: weights must be nonnegative");
    total += weights[i];
  }
  require(std::abs(total - 1.0) <= 1e-12, "mix: weights must sum to 1");
  ChainBox out{n, std::vector<EdgeTable>(n, EdgeTable{})};
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (int e = 0; e < n; ++e)
      for (int c = 0; c < 4; ++c) out.edges[e][c] += weights[i] * boxes[i].edges[e][c];
  return out;
}

namespace {

// Marginal of `setting` as seen on `edge`.
std::array<double, 2> setting_marginal(const ChainBox& box, int edge, int setting) {
  std::array<double, 2> m{0.0, 0.0};
  const bool alice = setting % 2 == 1;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) m[alice ? x : y] += box.prob(edge, x, y);
  return m;
}

}  // namespace

NoSignalingReport check_no_signaling(const ChainBox& box, double tol) {
  require_chain_length(box.n);
  require(box.edges.size() == static_cast<std::size_t>(box.n), "box must have n edge tables");
  NoSignalingReport report;
  for (int e = 1; e <= box.n; ++e) {
    double sum = 0.0;
    for (double p : box.edges[e - 1]) {
      if (!(p >= -tol)) {
        report.ok = false;
        report.violations.push_back({0, e, e, -p, "negative"});
      }
      sum += p;
    }
    if (!(std::abs(sum - 1.0) <= tol)) {
      report.ok = false;
      report.violations.push_back({0, e, e, std::abs(sum - 1.0), "normalization"});
    }
  }
  // Setting s >= 2 sits on edges s-1 and s (edge n for s = n); setting 1 on edges n and 1.
  for (int s = 1; s <= box.n; ++s) {
    const int ea = s == 1 ? box.n : s - 1;
    const int eb = s == 1 ? 1 : (s == box.n ? box.n : s);
    if (ea == eb) continue;
    const auto ma = setting_marginal(box, ea, s);
    const auto mb = setting_marginal(box, eb, s);
    const double gap = std::abs(ma[0] - mb[0]);
    if (!(gap <= tol)) {
      report.ok = false;
      report.violations.push_back({s, ea, eb, gap, s % 2 == 1 ? "alice" : "bob"});
    }
  }
  return report;
}

double true_bell_value(const ChainBox& box) {
  double s = 0.0;
  for (int e = 1; e <= box.n; ++e) s += edge_error(box, e);
  return s / box.n;
}

double observed_bell_value(const std::vector<ChainBox>& boxes_by_source,
                           const std::vector<double>& source_dist) {
  require(!boxes_by_source.empty(), "observed value needs boxes");
  const int n = boxes_by_source.front().n;
  require(boxes_by_source.size() == static_cast<std::size_t>(n) &&
              source_dist.size() == static_cast<std::size_t>(n),
          "source values must index the n chain edges");
  double total = 0.0;
  double value = 0.0;
  for (int s = 1; s <= n; ++s) {
    require(boxes_by_source[s - 1].n == n, "boxes must share the chain length");
    require(source_dist[s - 1] >= 0.0, "source distribution must be nonnegative");
    total += source_dist[s - 1];
    value += source_dist[s - 1] * edge_error(boxes_by_source[s - 1], s);
  }
  require(std::abs(total - 1.0) <= 1e-12, "source distribution must sum to 1");
  return value;
}

double randomness_distance(const ChainBox& box) {
  double d = 0.0;
  for (int e = 1; e <= box.n; ++e) {
    const bool anti = e == box.n;
    const double p0 = box.prob(e, 0, anti ? 1 : 0);
    const double p1 = box.prob(e, 1, anti ? 0 : 1);
    d = std::max(d, 0.5 * (std::abs(p0 - 0.5) + std::abs(p1 - 0.5)));
  }
  return d;
}

BoxDecomposition lambda_decompose(const ChainBox& box, double tol) {
  const auto ns = check_no_signaling(box, tol);
  require(ns.ok, "lambda_decompose: box is not a normalized no-signaling chain box");
  BoxDecomposition out{0.0, std::vector<double>(box.n, 0.0)};
  for (int e = 1; e <= box.n; ++e) {
    double err[2]{};
    double ok[2]{};
    int ie = 0;
    int io = 0;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        if (bell_indicator(e, box.n, x, y))
          err[ie++] = box.prob(e, x, y);
        else
          ok[io++] = box.prob(e, x, y);
      }
    require(std::abs(err[0] - err[1]) <= tol && std::abs(ok[0] - ok[1]) <= tol,
            "lambda_decompose: edge " + std::to_string(e) +
                " is not uniform-marginal, box lies outside the ideal/bad family");
    out.bad_weights[e - 1] = err[0] + err[1];
    out.lambda += out.bad_weights[e - 1];
  }
  require(out.lambda <= 1.0 + tol,
          "lambda_decompose: contradiction masses sum above 1, box lies outside the family");
  return out;
}

ChainBox compose(int n, const BoxDecomposition& decomposition) {
  require_chain_length(n);
  require(decomposition.bad_weights.size() == static_cast<std::size_t>(n),
          "decomposition needs one weight per edge");
  std::vector<ChainBox> parts{ideal_box(n)};
  std::vector<double> weights{1.0 - decomposition.lambda};
  for (int e = 1; e <= n; ++e) {
    parts.push_back(bad_box(n, e));
    weights.push_back(decomposition.bad_weights[e - 1]);
  }
  return mix(parts, weights);
}

}  // namespace svamp::boxes

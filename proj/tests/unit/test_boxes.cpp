#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "svamp/boxes.hpp"
#include "svamp/error.hpp"
#include "svamp/toy_example.hpp"

using namespace svamp;
using namespace svamp::boxes;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Independent Bell value: average over edges of contradiction mass, with the
// chain rule written out directly.
double bell_oracle(const ChainBox& box) {
  double total = 0.0;
  for (int e = 1; e <= box.n; ++e) {
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        const bool contradicts = e < box.n ? x != y : x == y;
        if (contradicts) total += box.prob(e, x, y);
      }
    }
  }
  return total / box.n;
}

}  // namespace

TEST_CASE("chain layout") {
  CHECK(alice_setting(1, 6) == 1);
  CHECK(bob_setting(1, 6) == 2);
  CHECK(alice_setting(2, 6) == 3);
  CHECK(bob_setting(2, 6) == 2);
  CHECK(alice_setting(6, 6) == 1);
  CHECK(bob_setting(6, 6) == 6);
  CHECK_THROWS_AS(require_chain_length(3), precondition_error);
  CHECK_THROWS_AS(require_chain_length(0), precondition_error);
}

TEST_CASE("ideal, bad and quantum boxes are no-signaling with the expected values") {
  for (int n : {2, 4, 8, 16}) {
    const auto ideal = ideal_box(n);
    CHECK(check_no_signaling(ideal).ok);
    CHECK(true_bell_value(ideal) == 0.0);
    CHECK(randomness_distance(ideal) == 0.0);

    const auto q = quantum_box(n);
    CHECK(check_no_signaling(q).ok);
    const double expected = std::pow(std::sin(std::numbers::pi / (2 * n)), 2);
    CHECK_THAT(true_bell_value(q), WithinRel(expected, 1e-12));
    CHECK_THAT(bell_oracle(q), WithinRel(expected, 1e-12));

    for (int e = 1; e <= n; ++e) {
      const auto bad = bad_box(n, e);
      CHECK(check_no_signaling(bad).ok);
      CHECK_THAT(true_bell_value(bad), WithinRel(1.0 / n, 1e-12));
    }
  }
}

TEST_CASE("every local deterministic strategy has Bell value at least 1/n") {
  for (int n : {2, 4, 6, 8}) {
    double best = 1.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<int> out(n);
      for (int s = 0; s < n; ++s) out[s] = (mask >> s) & 1;
      const auto box = deterministic_box(n, out);
      REQUIRE(check_no_signaling(box).ok);
      const double v = true_bell_value(box);
      CHECK_THAT(v, WithinAbs(bell_oracle(box), 1e-15));
      best = std::min(best, v);
    }
    CHECK_THAT(best, WithinAbs(1.0 / n, 1e-15));
  }
}

TEST_CASE("local bad box contradicts exactly one edge") {
  const int n = 8;
  for (int e = 1; e <= n; ++e) {
    for (int base : {0, 1}) {
      const auto box = local_bad_box(n, e, base);
      for (int edge = 1; edge <= n; ++edge) CHECK(edge_error(box, edge) == (edge == e ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("no-signaling violations are reported") {
  auto box = ideal_box(4);
  box.edges[0] = {0.5, 0.0, 0.0, 0.5};
  box.edges[1] = {1.0, 0.0, 0.0, 0.0};  // Bob's setting 2 marginal differs from edge 1
  const auto report = check_no_signaling(box);
  CHECK_FALSE(report.ok);
  bool found_bob = false;
  for (const auto& v : report.violations) found_bob = found_bob || (v.party == "bob" && v.setting == 2);
  CHECK(found_bob);

  auto negative = ideal_box(4);
  negative.edges[2] = {0.6, -0.1, 0.0, 0.5};
  CHECK_FALSE(check_no_signaling(negative).ok);
}

TEST_CASE("lambda decomposition round trips") {
  const int n = 6;
  BoxDecomposition d;
  d.bad_weights = {0.05, 0.0, 0.1, 0.02, 0.0, 0.03};
  d.lambda = 0.2;
  const auto box = compose(n, d);
  CHECK(check_no_signaling(box).ok);
  const auto back = lambda_decompose(box);
  CHECK_THAT(back.lambda, WithinAbs(0.2, 1e-12));
  for (int e = 0; e < n; ++e) CHECK_THAT(back.bad_weights[e], WithinAbs(d.bad_weights[e], 1e-12));
  // each bad component contributes 1/n to the Bell value
  CHECK_THAT(true_bell_value(box), WithinAbs(0.2 / n, 1e-12));

  const auto q = quantum_box(n);
  const auto dq = lambda_decompose(q);
  CHECK_THAT(dq.lambda, WithinAbs(n * true_bell_value(q), 1e-12));
  CHECK_THROWS_AS(lambda_decompose(deterministic_box(4, {0, 1, 1, 0})), precondition_error);
}

TEST_CASE("mix validates weights and averages tables") {
  const auto m = mix({ideal_box(4), bad_box(4, 2)}, {0.75, 0.25});
  CHECK_THAT(true_bell_value(m), WithinAbs(0.25 / 4, 1e-15));
  CHECK_THROWS_AS(mix({ideal_box(4), bad_box(4, 2)}, {0.5, 0.4}), precondition_error);
  CHECK_THROWS_AS(mix({ideal_box(4), ideal_box(6)}, {0.5, 0.5}), precondition_error);
}

TEST_CASE("observed value follows the source-selected edge") {
  const int n = 4;
  std::vector<ChainBox> by_source;
  for (int s = 1; s <= n; ++s) by_source.push_back(bad_box(n, s % n + 1));
  const std::vector<double> uniform(n, 0.25);
  CHECK(observed_bell_value(by_source, uniform) == 0.0);
  std::vector<ChainBox> honest(n, bad_box(n, 1));
  CHECK_THAT(observed_bell_value(honest, uniform), WithinAbs(0.25, 1e-15));
}

TEST_CASE("toy scenario: boxes adapted to the source fake a perfect violation") {
  const auto sc = canonical_toy_scenario();
  REQUIRE(sc.local_boxes.size() == 4);
  for (const auto& b : sc.local_boxes) {
    CHECK(check_no_signaling(b).ok);
    CHECK(true_bell_value(b) >= 0.25);
  }
  CHECK(toy_observed_value(sc) == 0.0);
  const auto mixture = toy_mixture(sc);
  CHECK_THAT(true_bell_value(mixture), WithinAbs(0.5, 1e-15));
  CHECK(true_bell_value(mixture) >= 1.0 / sc.n);

  for (int s = 1; s <= 4; ++s) {
    const auto pr = pr_outcome(sc, s);
    const auto matched = toy_attack(sc, s, pr);
    CHECK(matched.event_probability > 0.0);
    CHECK(matched.mass_on_tester_input == 1.0);
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        if (x == pr[0] && y == pr[1]) continue;
        const auto other = toy_attack(sc, s, {x, y});
        if (other.event_probability == 0.0) continue;
        CHECK(other.mass_on_tester_input == 0.0);
        CHECK(other.sv_condition_violated);
      }
    }
  }
}

#include <catch2/catch_amalgamated.hpp>

#include <boost/math/special_functions/binomial.hpp>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "svamp/attack_lp.hpp"
#include "svamp/error.hpp"
#include "svamp/sv_source.hpp"

using namespace svamp;
using namespace svamp::attack;
using source::SvParameter;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double choose(int n, int k) { return boost::math::binomial_coefficient<double>(n, k); }

// Row k of the LP applied to P, written straight from the constraint sum and
// divided by max(1, magnitude before cancellation) so that rounding in large
// binomial weights is judged relatively.
double row_oracle(const AttackParams& p, const std::vector<double>& P, int k) {
  const double q = (p.n - 1.0) / p.n;
  double s = 0.0, scale = 0.0;
  for (int t = 0; t + k <= p.m; ++t) {
    const double weight = choose(k + t, k) * std::pow(q, t) * P[k + t - 1];
    s += (1.0 / (k + t) - p.c_plus) * weight;
    scale += (1.0 / (k + t) + p.c_plus) * weight;
  }
  return s / std::max(1.0, scale);
}

// Best objective over every one- and two-point support that satisfies all
// rows; independent of how the closed form picks u and v.
double two_point_oracle(const AttackParams& p) {
  double best = 0.0;
  auto feasible = [&](const std::vector<double>& P) {
    for (int k = 1; k <= p.m; ++k)
      if (row_oracle(p, P, k) > 1e-12) return false;
    return true;
  };
  auto value = [&](const std::vector<double>& P) {
    double v = 0;
    for (int j = 1; j <= p.m; ++j) v += P[j - 1] * std::pow(p.a, j);
    return v;
  };
  for (int u = 1; u <= p.m; ++u) {
    std::vector<double> P(p.m, 0.0);
    P[u - 1] = 1.0;
    if (feasible(P)) best = std::max(best, value(P));
    for (int v = u + 1; v <= p.m; ++v) {
      // the binding row is k = 1 for two-point supports: mass on u as large as allowed
      const double q = (p.n - 1.0) / p.n;
      const double gu = (1.0 / u - p.c_plus) * u * std::pow(q, u - 1);
      const double gv = (1.0 / v - p.c_plus) * v * std::pow(q, v - 1);
      if (gu <= 0 || gv >= 0) continue;
      std::vector<double> Q(p.m, 0.0);
      Q[u - 1] = -gv / (gu - gv);
      Q[v - 1] = gu / (gu - gv);
      if (feasible(Q)) best = std::max(best, value(Q));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("derived parameters") {
  const auto p = derive_attack_params(SvParameter(0.0), 2);
  CHECK(p.n == 8);
  CHECK(p.m == 16);
  CHECK_THAT(p.a, WithinAbs(1 - 1.0 / 8, 1e-15));
  CHECK(p.dual_precondition());

  const auto q = derive_attack_params(SvParameter(0.01), 5);
  CHECK(std::isfinite(q.a));
  CHECK(q.one_minus_a <= 1.0 / q.n);
  CHECK(q.dual_precondition());

  const auto r = derive_attack_params(SvParameter(0.3), 2);
  CHECK(std::isfinite(r.a));
  CHECK(r.dual_precondition() == (r.one_minus_a <= 1.0 / r.n));
}

TEST_CASE("cloud probability formula") {
  // weights normalized so that sum_j C(m, j) n^j r_j = 1
  auto e = ensemble_from_sequence_weights({0.1, 0.15}, 2);
  CHECK_THAT(cloud_probability(e, 1), WithinAbs(0.1 + 0.15, 1e-15));
  const double r1 = 0.01 / 3, r2 = 0.02 / 3, r3 = 0.01;
  auto f = ensemble_from_sequence_weights({r1, r2, r3}, 4);
  CHECK_THAT(cloud_probability(f, 2), WithinAbs(r2 + 3 * r3, 1e-15));
  CHECK_THROWS_AS(cloud_probability(f, 0), precondition_error);
  CHECK_THROWS_AS(cloud_probability(f, 4), precondition_error);
}

TEST_CASE("ensembles link type and sequence weights") {
  const std::vector<double> P{0.1, 0.3, 0.6};
  const auto e = ensemble_from_type_probs(P, 4);
  for (int j = 1; j <= 3; ++j) CHECK_THAT(e.sequence_weight(j) * choose(3, j) * std::pow(4.0, j), WithinRel(P[j - 1], 1e-12));
  CHECK_THROWS_AS(ensemble_from_type_probs({0.5, 0.4}, 2), precondition_error);
}

TEST_CASE("constraint rows") {
  const auto one = make_attack_params(1, 2, 0.5, 1.0);
  const auto lp1 = lp_constraints(one);
  REQUIRE(lp1.rows() == 3);
  CHECK(lp1.matrix[0][0] == 0.0);

  const auto two = make_attack_params(2, 2, 0.5, 0.6);
  const auto lp2 = lp_constraints(two);
  CHECK_THAT(lp2.matrix[0][0], WithinAbs(0.4, 1e-15));
  CHECK_THAT(lp2.matrix[0][1], WithinAbs(-0.1, 1e-15));

  const auto p = attack_params_for_runs(SvParameter(0.02), 3, 12);
  const auto lp = lp_constraints(p);
  for (int k = 1; k <= p.m; ++k) {
    int nonzero = 0;
    for (int j = 1; j <= p.m; ++j) {
      const double expected = j < k ? 0.0 : choose(j, k) * std::pow(p.q(), j - k) * (1.0 / j - p.c_plus);
      CHECK_THAT(lp.matrix[k - 1][j - 1], WithinAbs(expected, 1e-13));
      nonzero += lp.matrix[k - 1][j - 1] != 0.0;
    }
    CHECK(nonzero <= p.m - k + 1);
  }
}

TEST_CASE("two-variable problem solved by hand") {
  for (double a : {0.3, 0.75, 0.99}) {
    const auto p = make_attack_params(2, 2, a, 0.6);
    const auto s = solve_acceptance_lp(p);
    REQUIRE(s.solution.status == lp::LpStatus::optimal);
    CHECK_THAT(s.solution.primal[0], WithinAbs(0.2, 1e-12));
    CHECK_THAT(s.solution.primal[1], WithinAbs(0.8, 1e-12));
    CHECK_THAT(s.solution.value, WithinAbs(0.2 * a + 0.8 * a * a, 1e-12));
    const auto f = closed_form_optimum(p);
    CHECK(f.u == 1);
    CHECK(f.v == 2);
    CHECK_THAT(f.s, WithinAbs(4.0, 1e-12));
    CHECK_THAT(f.value, WithinAbs(0.2 * a + 0.8 * a * a, 1e-12));
  }
}

TEST_CASE("fair source forces all mass on the last type") {
  const auto p = attack_params_for_runs(SvParameter(0.0), 2, 8);
  CHECK(p.c_plus == 0.125);
  const auto f = closed_form_optimum(p);
  CHECK(f.integral);
  CHECK(f.u == 8);
  CHECK_THAT(f.value, WithinRel(std::pow(p.a, 8), 1e-14));
  const auto s = solve_acceptance_lp(p);
  CHECK_THAT(s.solution.value, WithinRel(std::pow(p.a, 8), 1e-12));
  CHECK_THAT(s.solution.primal[7], WithinAbs(1.0, 1e-12));
}

TEST_CASE("value tends to one as detection vanishes") {
  const auto p = make_attack_params(6, 4, 1 - 1e-9, 0.4);
  CHECK_THAT(solve_acceptance_lp(p).solution.value, WithinAbs(1.0, 1e-8));
}

TEST_CASE("simplex, closed form, dual certificate and enumeration agree") {
  for (double eps : {0.0, 0.01, 0.05, 0.1}) {
    for (int r = 2; r <= 5; ++r) {
      for (int m = 1; m <= 40; ++m) {
        const auto p = attack_params_for_runs(SvParameter(eps), r, m);
        if (!p.dual_precondition()) continue;
        const auto f = closed_form_optimum(p);
        const auto s = solve_acceptance_lp(p);
        REQUIRE(s.solution.status == lp::LpStatus::optimal);
        CHECK_THAT(s.solution.value, WithinAbs(f.value, 1e-9));
        CHECK(s.solution.residuals.gap < 1e-9);
        CHECK(f.value <= f.upper_bound + 1e-12);
        if (f.integral) CHECK_THAT(f.value, WithinRel(f.upper_bound, 1e-12));
        const auto cert = dual_certificate(p);
        CHECK(cert.feasible);
        CHECK(cert.min_slack >= -1e-9);
        CHECK_THAT(cert.objective, WithinAbs(f.value, 1e-9));
        if (m <= 20) CHECK_THAT(two_point_oracle(p), WithinAbs(f.value, 1e-9));
        const auto P = closed_form_primal(p, f);
        for (int k = 1; k <= m; ++k) CHECK(row_oracle(p, P, k) <= 1e-12);
        CHECK_THAT(acceptance_probability(ensemble_from_type_probs(P, p.n), p.a), WithinAbs(f.value, 1e-12));
      }
    }
  }
}

TEST_CASE("certificate variants differ off the integral case") {
  const auto p = derive_attack_params(SvParameter(0.01), 5);
  CHECK(dual_certificate(p, DualVariant::two_point).feasible);
  // fair source: 1/c_plus integral, the real-exponent vector coincides with the default
  const auto fair = attack_params_for_runs(SvParameter(0.0), 3, 16);
  const auto t = dual_certificate(fair, DualVariant::two_point);
  const auto r = dual_certificate(fair, DualVariant::real_exponent);
  CHECK(r.feasible);
  CHECK_THAT(r.y[0], WithinRel(t.y[0], 1e-12));
  CHECK_THAT(r.objective, WithinRel(t.objective, 1e-12));
  // the displayed shifted-exponent vector is not dual feasible
  CHECK_FALSE(dual_certificate(p, DualVariant::shifted_exponent).feasible);
}

TEST_CASE("certificate precondition") {
  const auto p = make_attack_params(4, 4, 0.5, 0.5);
  CHECK_FALSE(p.dual_precondition());
  CHECK_THROWS_AS(dual_certificate(p), precondition_error);
  CHECK_NOTHROW(dual_certificate(p, DualVariant::two_point, 1e-9, false));
  // boundary anchor at one detected contradiction
  for (double a : {0.1, 0.5, 0.9}) CHECK(1 - a * a - 2 * (1 - a) * a == Catch::Approx((1 - a) * (1 - a)));
}

TEST_CASE("acceptance probability of pure ensembles") {
  std::vector<double> first(5, 0.0), last(5, 0.0);
  first[0] = 1.0;
  last[4] = 1.0;
  CHECK_THAT(acceptance_probability(ensemble_from_type_probs(first, 4), 0.8), WithinAbs(0.8, 1e-15));
  CHECK_THAT(acceptance_probability(ensemble_from_type_probs(last, 4), 0.8), WithinRel(std::pow(0.8, 5), 1e-14));
}

TEST_CASE("second threshold") {
  const double e = threshold_epsilon2();
  CHECK(e > 0.0130);
  CHECK(e < 0.0134);
  CHECK(std::round(e * 1e4) / 1e4 == 0.0132);
  CHECK(std::abs(std::pow(0.5 - e, 12) - 2 * std::pow(0.5 + e, 13.99)) <= 1e-12);
  const double lhs = std::pow(0.5 - 0.0132, 12), rhs = 2 * std::pow(0.5 + 0.0132, 13.99);
  CHECK(std::abs(lhs - rhs) / lhs < 0.01);
}

TEST_CASE("optimal acceptance shrinks below the second threshold only") {
  double prev = 2.0;
  for (int r = 5; r <= 12; ++r) {
    const double v = closed_form_optimum(derive_attack_params(SvParameter(0.012), r)).value;
    CHECK(v < prev);
    prev = v;
  }
  const double start = closed_form_optimum(derive_attack_params(SvParameter(0.016), 5)).value;
  const double end = closed_form_optimum(derive_attack_params(SvParameter(0.016), 12)).value;
  CHECK(end >= start);
}

TEST_CASE("lower steering rows keep the problem feasible") {
  const auto p = attack_params_for_runs(SvParameter(0.05), 2, 10);
  const auto with = solve_acceptance_lp(p, true);
  REQUIRE(with.solution.status == lp::LpStatus::optimal);
  CHECK(with.solution.value <= solve_acceptance_lp(p).solution.value + 1e-12);
}

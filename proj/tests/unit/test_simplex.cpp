#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "svamp/error.hpp"
#include "svamp/simplex.hpp"

using namespace svamp;
using namespace svamp::lp;
using Catch::Matchers::WithinAbs;

namespace {

// Best feasible vertex over all ways of picking `cols` tight constraints from
// the rows of A and the sign constraints. Only valid for bounded problems.
double vertex_oracle(const LpStandardForm& lp) {
  const int m = static_cast<int>(lp.rows());
  const int n = static_cast<int>(lp.cols());
  const int total = m + n;
  double best = -std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << total); ++mask) {
    if (__builtin_popcount(mask) != n) continue;
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd b(n);
    int row = 0;
    for (int i = 0; i < total; ++i) {
      if (!((mask >> i) & 1)) continue;
      if (i < m) {
        for (int j = 0; j < n; ++j) a(row, j) = lp.matrix[i][j];
        b(row) = lp.rhs[i];
      } else {
        a.row(row).setZero();
        a(row, i - m) = 1.0;
        b(row) = 0.0;
      }
      ++row;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < n) continue;
    const Eigen::VectorXd x = lu.solve(b);
    bool feasible = (x.array() >= -1e-9).all();
    for (int i = 0; i < m && feasible; ++i) {
      double s = 0;
      for (int j = 0; j < n; ++j) s += lp.matrix[i][j] * x(j);
      feasible = s <= lp.rhs[i] + 1e-9;
    }
    if (!feasible) continue;
    double v = 0;
    for (int j = 0; j < n; ++j) v += lp.objective[j] * x(j);
    best = std::max(best, v);
  }
  return best;
}

}  // namespace

TEST_CASE("textbook problem with known duals") {
  LpStandardForm lp{{3, 5}, {{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}};
  const auto s = simplex_solve(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK_THAT(s.value, WithinAbs(36, 1e-12));
  CHECK_THAT(s.primal[0], WithinAbs(2, 1e-12));
  CHECK_THAT(s.primal[1], WithinAbs(6, 1e-12));
  CHECK_THAT(s.dual[0], WithinAbs(0, 1e-12));
  CHECK_THAT(s.dual[1], WithinAbs(1.5, 1e-12));
  CHECK_THAT(s.dual[2], WithinAbs(1, 1e-12));
  CHECK(s.residuals.gap < 1e-12);
  CHECK(s.residuals.complementarity < 1e-12);
}

TEST_CASE("infeasible and unbounded problems are classified") {
  CHECK(simplex_solve({{1}, {{1}}, {-1}}).status == LpStatus::infeasible);
  CHECK(simplex_solve({{1, 1}, {{1, -1}}, {1}}).status == LpStatus::unbounded);
}

TEST_CASE("equality through paired rows and negative right-hand sides") {
  // x + y = 1, x >= 0.3 (as -x <= -0.3), maximize 2x + 3y
  LpStandardForm lp{{2, 3}, {{1, 1}, {-1, -1}, {-1, 0}}, {1, -1, -0.3}};
  const auto s = simplex_solve(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK_THAT(s.value, WithinAbs(2 * 0.3 + 3 * 0.7, 1e-12));
  CHECK(s.residuals.primal < 1e-12);
  CHECK(s.residuals.dual < 1e-12);
}

TEST_CASE("degenerate cycling example terminates under Bland's rule") {
  LpStandardForm lp{{0.75, -20, 0.5, -6},
                    {{0.25, -8, -1, 9}, {0.5, -12, -0.5, 3}, {0, 0, 1, 0}},
                    {0, 0, 1}};
  const auto s = simplex_solve(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK_THAT(s.value, WithinAbs(1.25, 1e-12));
}

TEST_CASE("random bounded problems agree with vertex enumeration") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_real_distribution<double> pos(0.5, 5.0);
  int solved = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 3;
    const int m = 2 + trial % 4;
    LpStandardForm lp;
    for (int j = 0; j < n; ++j) lp.objective.push_back(coef(rng));
    for (int i = 0; i < m; ++i) {
      std::vector<double> row;
      for (int j = 0; j < n; ++j) row.push_back(coef(rng));
      lp.matrix.push_back(row);
      lp.rhs.push_back(trial % 5 == 0 ? coef(rng) : pos(rng));
    }
    for (int j = 0; j < n; ++j) {  // box keeps every instance bounded
      std::vector<double> row(n, 0.0);
      row[j] = 1.0;
      lp.matrix.push_back(row);
      lp.rhs.push_back(10.0);
    }
    const double oracle = vertex_oracle(lp);
    const auto s = simplex_solve(lp);
    if (!std::isfinite(oracle)) {
      CHECK(s.status == LpStatus::infeasible);
      continue;
    }
    REQUIRE(s.status == LpStatus::optimal);
    CHECK_THAT(s.value, WithinAbs(oracle, 1e-8));
    const auto r = check_solution(lp, s.primal, s.dual);
    CHECK(r.primal < 1e-9);
    CHECK(r.dual < 1e-9);
    CHECK(r.gap < 1e-8);
    ++solved;
  }
  CHECK(solved > 200);
}

TEST_CASE("shape validation") {
  CHECK_THROWS_AS(validate({{1, 2}, {{1}}, {1}}), precondition_error);
  CHECK_THROWS_AS(validate({{1}, {{1}}, {1, 2}}), precondition_error);
  CHECK_THROWS_AS(validate({{std::nan("")}, {{1}}, {1}}), precondition_error);
}

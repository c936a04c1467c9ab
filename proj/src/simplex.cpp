#include "svamp/simplex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "svamp/error.hpp"

namespace svamp::lp {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "infeasible";
}

void validate(const LpStandardForm& lp) {
  require(!lp.objective.empty(), "LP needs at least one variable");
  require(lp.matrix.size() == lp.rhs.size(), "LP matrix rows and rhs length differ");
  for (double v : lp.objective) require(std::isfinite(v), "LP objective has a non-finite entry");
  for (double v : lp.rhs) require(std::isfinite(v), "LP rhs has a non-finite entry");
  for (const auto& row : lp.matrix) {
    require(row.size() == lp.objective.size(), "LP matrix row length differs from variable count");
    for (double v : row) require(std::isfinite(v), "LP matrix has a non-finite entry");
  }
}

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : cols_(cols), t_(rows, std::vector<double>(cols + 1, 0.0)), obj_(cols + 1, 0.0), basis_(rows, 0) {}

  std::vector<double>& row(std::size_t i) { return t_[i]; }
  std::vector<double>& obj() { return obj_; }
  std::size_t& basic(std::size_t i) { return basis_[i]; }
  std::size_t rows() const { return t_.size(); }
  std::size_t cols() const { return cols_; }
  double rhs(std::size_t i) const { return t_[i][cols_]; }

  void pivot(std::size_t r, std::size_t c) {
    auto& pr = t_[r];
    const double inv = 1.0 / pr[c];
    for (double& v : pr) v *= inv;
    pr[c] = 1.0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == r) continue;
      eliminate(t_[i], pr, c);
    }
    eliminate(obj_, pr, c);
    basis_[r] = c;
  }

  void snapshot() { original_ = t_; }

  // Rebuilds every row as B^{-1} times the original rows for the current
  // basis B, discarding the rounding accumulated by successive pivots.
  bool reinvert() {
    const auto nr = static_cast<Eigen::Index>(t_.size());
    const auto width = static_cast<Eigen::Index>(cols_ + 1);
    Eigen::MatrixXd basis_matrix(nr, nr);
    Eigen::MatrixXd full(nr, width);
    for (Eigen::Index i = 0; i < nr; ++i) {
      for (Eigen::Index k = 0; k < nr; ++k) basis_matrix(i, k) = original_[i][basis_[k]];
      for (Eigen::Index j = 0; j < width; ++j) full(i, j) = original_[i][j];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_matrix);
    if (!lu.isInvertible()) return false;
    const Eigen::MatrixXd solved = lu.solve(full);
    for (Eigen::Index k = 0; k < nr; ++k) {
      for (Eigen::Index j = 0; j < width; ++j) t_[k][j] = solved(k, j);
      for (Eigen::Index i = 0; i < nr; ++i) t_[k][basis_[i]] = i == k ? 1.0 : 0.0;
    }
    return true;
  }

  // obj = cost - sum over basic rows of cost_basic * row.
  void load_objective(const std::vector<double>& cost) {
    std::fill(obj_.begin(), obj_.end(), 0.0);
    std::copy(cost.begin(), cost.end(), obj_.begin());
    for (std::size_t i = 0; i < t_.size(); ++i) eliminate(obj_, t_[i], basis_[i]);
  }

 private:
  static void eliminate(std::vector<double>& target, const std::vector<double>& pr, std::size_t c) {
    const double f = target[c];
    if (f == 0.0) return;
    for (std::size_t j = 0; j < target.size(); ++j) target[j] -= f * pr[j];
    target[c] = 0.0;
  }

  std::size_t cols_;
  std::vector<std::vector<double>> t_;
  std::vector<std::vector<double>> original_;
  std::vector<double> obj_;
  std::vector<std::size_t> basis_;
};

enum class PhaseResult { optimal, unbounded, iteration_limit };

PhaseResult run_phase(Tableau& tab, const std::vector<bool>& may_enter, const SimplexOptions& opt,
                      int& iterations) {
  while (true) {
    if (iterations >= opt.max_iterations) return PhaseResult::iteration_limit;
    std::size_t enter = tab.cols();
    for (std::size_t j = 0; j < tab.cols(); ++j) {
      if (may_enter[j] && tab.obj()[j] > opt.optimality_tolerance) {
        enter = j;
        break;
      }
    }
    if (enter == tab.cols()) return PhaseResult::optimal;

    std::size_t leave = tab.rows();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tab.rows(); ++i) {
      const double a = tab.row(i)[enter];
      if (a <= opt.pivot_tolerance) continue;
      const double ratio = std::max(tab.rhs(i), 0.0) / a;
      if (leave == tab.rows()) {
        best = ratio;
        leave = i;
        continue;
      }
      const double slack = 1e-13 * std::max(1.0, best);
      if (ratio < best - slack || (ratio <= best + slack && tab.basic(i) < tab.basic(leave))) {
        best = std::min(best, ratio);
        leave = i;
      }
    }
    if (leave == tab.rows()) return PhaseResult::unbounded;
    tab.pivot(leave, enter);
    ++iterations;
  }
}

}  // namespace

LpSolution simplex_solve(const LpStandardForm& lp, const SimplexOptions& opt) {
  validate(lp);
  const std::size_t nv = lp.cols();
  const std::size_t nr = lp.rows();

  std::vector<double> scale(nr, 1.0);
  std::vector<bool> flipped(nr, false);
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < nr; ++i) {
    double mx = std::abs(lp.rhs[i]);
    for (double v : lp.matrix[i]) mx = std::max(mx, std::abs(v));
    if (mx > 0.0) scale[i] = mx;
    if (lp.rhs[i] < 0.0) {
      flipped[i] = true;
      ++n_art;
    }
  }

  // columns: structural | slack per row | artificial per flipped row
  const std::size_t n_cols = nv + nr + n_art;
  Tableau tab(nr, n_cols);
  std::vector<bool> artificial(n_cols, false);
  std::size_t next_art = nv + nr;
  for (std::size_t i = 0; i < nr; ++i) {
    const double sgn = flipped[i] ? -1.0 : 1.0;
    auto& row = tab.row(i);
    for (std::size_t j = 0; j < nv; ++j) row[j] = sgn * lp.matrix[i][j] / scale[i];
    row[nv + i] = sgn;
    row[n_cols] = sgn * lp.rhs[i] / scale[i];
    if (flipped[i]) {
      row[next_art] = 1.0;
      artificial[next_art] = true;
      tab.basic(i) = next_art++;
    } else {
      tab.basic(i) = nv + i;
    }
  }

  tab.snapshot();
  LpSolution sol;
  int iterations = 0;
  std::vector<bool> may_enter(n_cols, true);

  if (n_art > 0) {
    std::vector<double> cost(n_cols, 0.0);
    for (std::size_t j = 0; j < n_cols; ++j)
      if (artificial[j]) cost[j] = -1.0;
    tab.load_objective(cost);
    const auto phase1 = run_phase(tab, may_enter, opt, iterations);
    sol.iterations = iterations;
    if (phase1 == PhaseResult::iteration_limit) {
      sol.status = LpStatus::iteration_limit;
      return sol;
    }
    double infeas = 0.0;
    for (std::size_t i = 0; i < nr; ++i)
      if (artificial[tab.basic(i)]) infeas += std::max(tab.rhs(i), 0.0);
    if (infeas > opt.feasibility_tolerance) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < nr; ++i) {
      if (!artificial[tab.basic(i)]) continue;
      for (std::size_t j = 0; j < nv + nr; ++j) {
        if (std::abs(tab.row(i)[j]) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = 0; j < n_cols; ++j)
      if (artificial[j]) may_enter[j] = false;
  }

  std::vector<double> cost(n_cols, 0.0);
  std::copy(lp.objective.begin(), lp.objective.end(), cost.begin());
  tab.load_objective(cost);
  auto phase2 = run_phase(tab, may_enter, opt, iterations);
  // Refactor the final basis and resume if the fresh reduced costs disagree.
  for (int round = 0; round < 4 && phase2 == PhaseResult::optimal; ++round) {
    const int before = iterations;
    if (!tab.reinvert()) break;
    tab.load_objective(cost);
    phase2 = run_phase(tab, may_enter, opt, iterations);
    if (iterations == before) break;
  }
  sol.iterations = iterations;
  if (phase2 == PhaseResult::iteration_limit) {
    sol.status = LpStatus::iteration_limit;
    return sol;
  }
  if (phase2 == PhaseResult::unbounded) {
    sol.status = LpStatus::unbounded;
    return sol;
  }

  sol.status = LpStatus::optimal;
  sol.primal.assign(nv, 0.0);
  for (std::size_t i = 0; i < nr; ++i)
    if (tab.basic(i) < nv) sol.primal[tab.basic(i)] = std::max(tab.rhs(i), 0.0);
  sol.dual.assign(nr, 0.0);
  for (std::size_t i = 0; i < nr; ++i) sol.dual[i] = -tab.obj()[nv + i] / scale[i];
  sol.value = 0.0;
  for (std::size_t j = 0; j < nv; ++j) sol.value += lp.objective[j] * sol.primal[j];
  sol.residuals = check_solution(lp, sol.primal, sol.dual);
  return sol;
}

LpResiduals check_solution(const LpStandardForm& lp, const std::vector<double>& primal,
                           const std::vector<double>& dual) {
  validate(lp);
  require(primal.size() == lp.cols(), "primal vector length differs from variable count");
  require(dual.size() == lp.rows(), "dual vector length differs from constraint count");
  LpResiduals res;
  double primal_value = 0.0;
  double dual_value = 0.0;
  for (std::size_t j = 0; j < lp.cols(); ++j) {
    res.primal = std::max(res.primal, -primal[j]);
    primal_value += lp.objective[j] * primal[j];
  }
  for (std::size_t i = 0; i < lp.rows(); ++i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < lp.cols(); ++j) ax += lp.matrix[i][j] * primal[j];
    const double row_slack = lp.rhs[i] - ax;
    res.primal = std::max(res.primal, -row_slack);
    res.dual = std::max(res.dual, -dual[i]);
    res.complementarity = std::max(res.complementarity, std::abs(dual[i] * row_slack));
    dual_value += lp.rhs[i] * dual[i];
  }
  for (std::size_t j = 0; j < lp.cols(); ++j) {
    double aty = 0.0;
    for (std::size_t i = 0; i < lp.rows(); ++i) aty += lp.matrix[i][j] * dual[i];
    const double reduced = aty - lp.objective[j];
    res.dual = std::max(res.dual, -reduced);
    res.complementarity = std::max(res.complementarity, std::abs(primal[j] * reduced));
  }
  res.gap = std::abs(primal_value - dual_value);
  return res;
}

}  // namespace svamp::lp

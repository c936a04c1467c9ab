#pragma once

#include <string_view>
#include <vector>

namespace svamp::lp {

// maximize c^T x  subject to  A x <= b, x >= 0.
struct LpStandardForm {
  std::vector<double> objective;              // c, one entry per variable
  std::vector<std::vector<double>> matrix;    // A, one row per constraint
  std::vector<double> rhs;                    // b

  std::size_t rows() const { return matrix.size(); }
  std::size_t cols() const { return objective.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string_view to_string(LpStatus status);

struct LpResiduals {
  double primal = 0.0;          // max violation of A x <= b and x >= 0
  double dual = 0.0;            // max violation of A^T y >= c and y >= 0
  double gap = 0.0;             // |c^T x - b^T y|
  double complementarity = 0.0; // max |y_i (b - A x)_i| and |x_j (A^T y - c)_j|
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> primal;
  std::vector<double> dual;
  double value = 0.0;
  int iterations = 0;
  LpResiduals residuals;
};

struct SimplexOptions {
  double pivot_tolerance = 1e-12;
  double optimality_tolerance = 1e-11;
  double feasibility_tolerance = 1e-10;
  int max_iterations = 1000000;
};

/// Throws if the shapes of c, A and b disagree or any entry is not finite.
void validate(const LpStandardForm& lp);

/// Two-phase dense tableau simplex with Bland's rule. Rows are scaled by
/// their largest coefficient before pivoting; duals are reported for the
/// unscaled problem.
LpSolution simplex_solve(const LpStandardForm& lp, const SimplexOptions& options = {});

/// Residuals of an arbitrary primal/dual pair against the problem.
LpResiduals check_solution(const LpStandardForm& lp, const std::vector<double>& primal,
                           const std::vector<double>& dual);

}  // namespace svamp::lp

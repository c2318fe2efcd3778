#pragma once

#include "parot/common.hpp"

#include <Eigen/SparseCore>

#include <vector>

namespace parot {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

/// min <x, cost> subject to constraint_matrix * x = rhs, x >= 0.
template <class MatrixT>
struct BasicLP {
  Vector cost;
  MatrixT constraint_matrix;
  Vector rhs;
};

using DenseLP = BasicLP<Matrix>;
using SparseLP = BasicLP<SparseMatrix>;

enum class LPStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LPStatus s);

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  Vector primal;  // length n, empty unless Optimal
  Vector dual;    // length m, y = c_B B^{-1}
  double objective = 0.0;
  long iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-11;
  double pivot_tol = 1e-9;
  // <= 0 selects max(50, m).
  int refactor_period = 0;
  // Iterations after which pricing switches from Dantzig to Bland; <= 0 selects 5 (m + n).
  long bland_after = 0;
  // <= 0 selects 50 (m + n) + 1000.
  long max_iterations = 0;
  // Optional starting basis (m column indices). Used when it is nonsingular
  // and primal feasible; Phase I is then skipped. Otherwise ignored.
  std::vector<Index> initial_basis;
};

/// Two-phase revised simplex with an explicit basis inverse.
///
/// Phase I starts from an all-artificial basis. Rows that turn out to be
/// linearly dependent keep their artificial at zero and receive a zero dual.
/// Throws Error(NumericalBreakdown) when a refactorized basis is singular or
/// the iteration budget is exhausted.
LPSolution solve(const DenseLP& lp, const SimplexOptions& opts = {});
LPSolution solve(const SparseLP& lp, const SimplexOptions& opts = {});

}  // namespace parot

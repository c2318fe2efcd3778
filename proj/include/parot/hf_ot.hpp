#pragma once

#include "parot/common.hpp"
#include "parot/lp.hpp"
#include "parot/param_family.hpp"

#include <iosfwd>

namespace parot {

/// Nonnegative, finite N_x x N_y cost matrix.
class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(Matrix entries);

  const Matrix& entries() const { return entries_; }
  Index rows() const { return entries_.rows(); }
  Index cols() const { return entries_.cols(); }
  double operator()(Index i, Index j) const { return entries_(i, j); }
  double sup_norm() const { return sup_norm_; }

 private:
  Matrix entries_;
  double sup_norm_ = 0.0;
};

/// N_x x N_y matrix of transported mass; rows follow the source support.
using TransportPlan = Matrix;

struct DualPair {
  Vector phi;  // length N_x
  Vector psi;  // length N_y

  double objective(const GridMeasure& mu, const GridMeasure& nu) const {
    return phi.dot(mu.weights()) + psi.dot(nu.weights());
  }
};

/// C_ij = |y_j - x_i|^2 for row-wise point sets.
CostMatrix quadratic_cost(const Matrix& support_x, const Matrix& support_y);

/// Column-stacking of a plan: entry (i, j) lands at i + j * N_x.
Vector vectorize(const TransportPlan& plan);
TransportPlan unvectorize(const Vector& v, Index nx, Index ny);

/// (N_x + N_y) x (N_x N_y) matrix mapping vec(plan) to (row sums; column sums).
SparseMatrix constraint_matrix(Index nx, Index ny);

double plan_cost(const TransportPlan& plan, const CostMatrix& cost);

struct OTSolution {
  TransportPlan plan;
  DualPair duals;
  double cost = 0.0;
};

/// Exact discrete OT through the simplex engine. The redundant last column-sum
/// row is dropped and its dual fixed to zero (psi[N_y - 1] = 0).
OTSolution solve_lp(const CostMatrix& cost, const GridMeasure& mu, const GridMeasure& nu,
                    const SimplexOptions& opts = {});

struct SinkhornOptions {
  double epsilon = 1e-2;
  int max_iters = 10000;
  double tol = 1e-7;
  /// Skip plain scaling and iterate on log-potentials from the start.
  bool force_log = false;
};

struct SinkhornSolution {
  TransportPlan plan;
  double cost = 0.0;         // <plan, C>, linear part only
  int iters = 0;
  bool converged = false;    // false means iters == max_iters
  double marginal_error = 0.0;  // l1 violation of both marginals
  bool log_domain = false;
};

/// Entropic OT by matrix scaling. Uses log-domain updates when
/// epsilon < 1e-2 ||C||_inf or when plain scaling under/overflows.
SinkhornSolution solve_sinkhorn(const CostMatrix& cost, const GridMeasure& mu, const GridMeasure& nu,
                                const SinkhornOptions& opts = {});

/// Sinkhorn on a regular grid {0..bins-1}^dims with cost sum_a (i_a - j_a)^2,
/// using the separable kernel so the N^dims x N^dims plan is never formed.
/// Flat index order is row-major over the axes (axis 0 most significant).
struct GridSinkhornSolution {
  Vector log_u;  // plan = diag(u) K diag(v)
  Vector log_v;
  double cost = 0.0;
  int iters = 0;
  bool converged = false;
  double marginal_error = 0.0;
  bool log_domain = false;
  /// Per source cell: sum_j plan_ij * (j_a + 1) for each axis a, then sum_j plan_ij.
  Matrix row_aggregates;
};

GridSinkhornSolution solve_sinkhorn_grid(int bins, int dims, const GridMeasure& mu,
                                         const GridMeasure& nu, const SinkhornOptions& opts);

/// Largest grid cost sum_a (bins - 1)^2.
double grid_cost_sup(int bins, int dims);

/// Row-major CSV `i,j,mass` (1-based indices), zero entries skipped.
void write_plan_csv(std::ostream& out, const TransportPlan& plan);

}  // namespace parot

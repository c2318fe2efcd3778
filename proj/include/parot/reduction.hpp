#pragma once

#include "parot/common.hpp"
#include "parot/hf_ot.hpp"
#include "parot/lp.hpp"
#include "parot/param_family.hpp"

#include <functional>
#include <vector>

namespace parot {

enum class BasisMode { GramSchmidt, OnesAugmented };

/// What the offline phase keeps from one high-fidelity solve.
struct Snapshot {
  double cost = 0.0;
  /// N_x x (D + 1): per source row, sum_j plan_ij * t_a(j) for each target
  /// axis a (1-based coordinates), then the row mass. Empty when not tracked.
  Matrix aggregates;
};

using SnapshotSolver = std::function<Snapshot(const GridMeasure&, const GridMeasure&)>;

/// Exact LP snapshots on a 1D target index (D = 1).
SnapshotSolver lp_snapshot_solver(const CostMatrix& cost, const SimplexOptions& opts = {});
/// Entropic snapshots; stores the linear cost <plan, C>.
SnapshotSolver sinkhorn_snapshot_solver(const CostMatrix& cost, const SinkhornOptions& opts);

/// Mass-weighted sums of 1-based target indices for a dense plan.
Matrix plan_aggregates(const TransportPlan& plan);

struct ReducedModel {
  Index kx = 0, ky = 0, nx = 0, ny = 0;
  std::vector<Alpha> snapshot_alphas;
  Vector reduced_cost;      // R
  Matrix stacked_marginals; // (N_x + N_y) x R
  Matrix U_hat;             // N_x x N
  Matrix V_hat;             // N_y x M
  Matrix A_hat;             // (N + M) x R
  // U_hat^T [mu_1 .. mu_Kx] and V_hat^T [nu_1 .. nu_Ky]: the online rhs is
  // proj_mu * alpha_x, proj_nu * alpha_y, with no N_x- or N_y-sized work.
  Matrix proj_mu;
  Matrix proj_nu;
  /// Target index grid used by the map aggregates (bins per axis, axes).
  Index target_bins = 0;
  int target_dims = 1;
  std::vector<Matrix> map_aggregates;  // one per snapshot, or empty

  Index R() const { return reduced_cost.size(); }
  Index N() const { return U_hat.cols(); }
  Index M() const { return V_hat.cols(); }
  bool has_aggregates() const { return !map_aggregates.empty(); }
};

/// Classical Gram-Schmidt on the given order. Throws LinearDependence when a
/// residual falls below 1e-10 times the norm of its input vector.
std::vector<Vector> gram_schmidt(const std::vector<Vector>& vectors);

/// (U_hat, V_hat) from Gram-Schmidt on the family members. OnesAugmented
/// appends the all-ones vector as an extra column on each side.
std::pair<Matrix, Matrix> dual_bases(const MeasureFamily& family,
                                     BasisMode mode = BasisMode::GramSchmidt);

/// Solves every training snapshot and assembles the model. Throws
/// MissingExtremePoints when a corner (e_k, f_l) is absent from `training`.
ReducedModel build_offline(const MeasureFamily& family, const std::vector<Alpha>& training,
                           const SnapshotSolver& solver, BasisMode mode = BasisMode::GramSchmidt);

/// Recomputes A_hat = diag(U_hat, V_hat)^T * stacked_marginals and the member
/// projections from the stored bases.
void assemble_reduced(ReducedModel& model, const MeasureFamily& family);

struct ReducedSolution {
  LPStatus status = LPStatus::Infeasible;
  Vector p;  // R
  Vector a;  // N
  Vector b;  // M
  double I_R = 0.0;
};

/// Reduced right-hand side (U_hat^T mu(alpha); V_hat^T nu(alpha)).
Vector reduced_rhs(const ReducedModel& model, const Alpha& alpha, OpCounter* ops = nullptr);

ReducedSolution solve_reduced(const ReducedModel& model, const Alpha& alpha,
                              OpCounter* ops = nullptr, const SimplexOptions& opts = {});

struct SemiReducedSolution {
  LPStatus status = LPStatus::Infeasible;
  Vector p;
  double I_RP = 0.0;
};

/// Reduced cone, full-dimensional marginal constraints.
SemiReducedSolution solve_semi_reduced(const ReducedModel& model, const MeasureFamily& family,
                                       const Alpha& alpha, const SimplexOptions& opts = {});

/// (U_hat a, V_hat b).
DualPair lift_potentials(const ReducedModel& model, const Vector& a, const Vector& b);

}  // namespace parot

#pragma once

#include "parot/common.hpp"
#include "parot/hf_ot.hpp"
#include "parot/reduction.hpp"

#include <utility>
#include <vector>

namespace parot {

/// phi^c_j = min_i C_ij - phi_i
Vector c_transform(const Vector& phi, const CostMatrix& cost, OpCounter* ops = nullptr);
/// psi^cbar_i = min_j C_ij - psi_j
Vector cbar_transform(const Vector& psi, const CostMatrix& cost, OpCounter* ops = nullptr);

/// Largest violation max_ij (phi_i + psi_j - C_ij), clipped at zero.
double dual_violation(const DualPair& pair, const CostMatrix& cost);

/// Replaces a feasible pair by (psi^cbar, psi^cbar^c) shifted so that
/// min phi = 0. Throws InvalidArgument when the input violates the dual
/// constraints by more than 1e-8 (1 + ||C||).
DualPair normalize_potentials(const DualPair& pair, const CostMatrix& cost);

/// Upper bound on I_R - I from the HF-feasible pairs built by c-transforms:
/// I_R - max(<phi, mu> + <phi^c, nu>, <psi^cbar, mu> + <psi, nu>).
/// phi is shifted so that min phi = 0 first; the bound itself is shift-free.
double exact_gap_bound(const DualPair& pair_hat, const CostMatrix& cost, const GridMeasure& mu,
                       const GridMeasure& nu, double I_R);

/// Interpolation basis for one side of the c-transform.
struct EIMBasis {
  Matrix Q;                    // length-of-side x M_eim
  std::vector<Index> J;        // magic points, in selection order
  std::vector<Index> I;        // candidate minimizer rows, sorted
  Matrix interp;               // Q[J, :], unit lower-triangular
  std::vector<Index> greedy;   // snapshot index chosen at each step
  /// <q^l, member_k>, M_eim x K, for the mass side this basis lives on.
  Matrix member_products;

  Index size() const { return Q.cols(); }
};

struct EIMOptions {
  Index m_eim = 10;
  Index m_prime = 3;
  /// Use every row for I instead of the argmin construction.
  bool full_rows = false;
};

/// Greedy EIM in the sup norm over the transformed snapshots `g` (each of
/// length cost.cols()). `potentials` are the matching untransformed vectors
/// (length cost.rows()), used to pick I. `members` are the measures on the
/// transformed side, columns of length cost.cols().
EIMBasis eim_offline(const std::vector<Vector>& potentials, const std::vector<Vector>& g,
                     const CostMatrix& cost, const Matrix& members, const EIMOptions& opts);

/// Solves interp * beta = values by forward substitution.
Vector eim_coefficients(const EIMBasis& basis, const Vector& values, OpCounter* ops = nullptr);

/// Both sides of the fast estimator: `c_side` interpolates phi^c on the
/// target support, `cbar_side` interpolates psi^cbar on the source support.
struct EIMEstimator {
  EIMBasis c_side;
  EIMBasis cbar_side;
  // Potentials are only ever needed at the rows in I.
  Matrix U_rows;  // U_hat rows listed in c_side.I
  Matrix V_rows;  // V_hat rows listed in cbar_side.I
  // Cost restricted to (I, J), indexed (row in I, magic point). On the cbar
  // side the roles of source and target swap: entry (r, m) is C(J[m], I[r]).
  Matrix cost_c;
  Matrix cost_cbar;
};

/// Collects reduced dual potentials over `training` and builds both sides.
EIMEstimator build_eim_estimator(const ReducedModel& model, const CostMatrix& cost,
                                 const MeasureFamily& family, const std::vector<Alpha>& training,
                                 const EIMOptions& opts);

/// Fills the row blocks and restricted costs from the two bases.
void finalize_eim_estimator(EIMEstimator& est, const ReducedModel& model, const CostMatrix& cost);

/// Fast version of exact_gap_bound: the c-transforms are evaluated only at
/// the magic points, with minima taken over I, and integrated against the
/// precomputed member products. Cost is independent of N_x N_y.
double eim_fast_gap(const EIMEstimator& est, const ReducedModel& model, const ReducedSolution& sol,
                    const Alpha& alpha, OpCounter* ops = nullptr);

enum class ContinuityStrategy { MinimizeBound, NearestNeighbor };

struct TrainingCost {
  Alpha alpha;
  double I_hf;
};

/// Lipschitz constant ||C|| (2 max(K_x, K_y) + 3 min(K_x, K_y)).
double continuity_constant(double C_inf, Index kx, Index ky);

double continuity_bound(const std::vector<TrainingCost>& train, const Alpha& alpha, double I_R,
                        double C_inf, Index kx, Index ky,
                        ContinuityStrategy strategy = ContinuityStrategy::MinimizeBound);

struct CorrectionConstants {
  double c_max = 0.0;
  double c_min = 0.0;
  double c_mean = 0.0;
};

/// Ratios true / estimated over pairs with estimated > 1e-15.
CorrectionConstants calibrate_correction(const std::vector<double>& estimated,
                                         const std::vector<double>& true_errors);

}  // namespace parot

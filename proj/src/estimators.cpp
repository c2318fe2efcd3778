#include "parot/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace parot {

Vector c_transform(const Vector& phi, const CostMatrix& cost, OpCounter* ops) {
  require(phi.size() == cost.rows(), ErrorCode::DimensionMismatch, "c_transform: length mismatch");
  Vector out(cost.cols());
  for (Index j = 0; j < cost.cols(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < cost.rows(); ++i) best = std::min(best, cost(i, j) - phi[i]);
    out[j] = best;
  }
  count(ops, static_cast<std::uint64_t>(cost.rows() * cost.cols()));
  return out;
}

Vector cbar_transform(const Vector& psi, const CostMatrix& cost, OpCounter* ops) {
  require(psi.size() == cost.cols(), ErrorCode::DimensionMismatch,
          "cbar_transform: length mismatch");
  Vector out = Vector::Constant(cost.rows(), std::numeric_limits<double>::infinity());
  for (Index j = 0; j < cost.cols(); ++j)
    for (Index i = 0; i < cost.rows(); ++i) out[i] = std::min(out[i], cost(i, j) - psi[j]);
  count(ops, static_cast<std::uint64_t>(cost.rows() * cost.cols()));
  return out;
}

double dual_violation(const DualPair& pair, const CostMatrix& cost) {
  double worst = 0.0;
  for (Index j = 0; j < cost.cols(); ++j)
    for (Index i = 0; i < cost.rows(); ++i)
      worst = std::max(worst, pair.phi[i] + pair.psi[j] - cost(i, j));
  return worst;
}

DualPair normalize_potentials(const DualPair& pair, const CostMatrix& cost) {
  require(pair.phi.size() == cost.rows() && pair.psi.size() == cost.cols(),
          ErrorCode::DimensionMismatch, "normalize_potentials: length mismatch");
  require(dual_violation(pair, cost) <= 1e-8 * (1.0 + cost.sup_norm()), ErrorCode::InvalidArgument,
          "normalize_potentials: input pair is not dual feasible");
  DualPair out;
  out.phi = cbar_transform(pair.psi, cost);
  out.psi = c_transform(out.phi, cost);
  const double lambda = out.phi.minCoeff();
  out.phi.array() -= lambda;
  out.psi.array() += lambda;
  return out;
}

double exact_gap_bound(const DualPair& pair_hat, const CostMatrix& cost, const GridMeasure& mu,
                       const GridMeasure& nu, double I_R) {
  require(pair_hat.phi.size() == cost.rows() && pair_hat.psi.size() == cost.cols() &&
              mu.size() == cost.rows() && nu.size() == cost.cols(),
          ErrorCode::DimensionMismatch, "exact_gap_bound: size mismatch");
  const Vector phi = pair_hat.phi.array() - pair_hat.phi.minCoeff();
  const Vector phi_c = c_transform(phi, cost);
  const Vector psi_cbar = cbar_transform(pair_hat.psi, cost);
  const double j1 = phi.dot(mu.weights()) + phi_c.dot(nu.weights());
  const double j2 = psi_cbar.dot(mu.weights()) + pair_hat.psi.dot(nu.weights());
  return I_R - std::max(j1, j2);
}

double continuity_constant(double C_inf, Index kx, Index ky) {
  return C_inf * static_cast<double>(2 * std::max(kx, ky) + 3 * std::min(kx, ky));
}

double continuity_bound(const std::vector<TrainingCost>& train, const Alpha& alpha, double I_R,
                        double C_inf, Index kx, Index ky, ContinuityStrategy strategy) {
  require(!train.empty(), ErrorCode::InvalidArgument, "continuity_bound: empty training set");
  const double lip = continuity_constant(C_inf, kx, ky);
  double best = std::numeric_limits<double>::infinity();
  double best_dist = std::numeric_limits<double>::infinity();
  for (const TrainingCost& t : train) {
    const double d = alpha_distance(t.alpha, alpha);
    const double bound = std::abs(t.I_hf - I_R) + lip * d;
    if (strategy == ContinuityStrategy::MinimizeBound) {
      best = std::min(best, bound);
    } else if (d < best_dist) {
      best_dist = d;
      best = bound;
    }
  }
  return best;
}

CorrectionConstants calibrate_correction(const std::vector<double>& estimated,
                                         const std::vector<double>& true_errors) {
  require(estimated.size() == true_errors.size(), ErrorCode::DimensionMismatch,
          "calibrate_correction: length mismatch");
  CorrectionConstants c;
  c.c_max = -std::numeric_limits<double>::infinity();
  c.c_min = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < estimated.size(); ++k) {
    if (estimated[k] <= 1e-15) continue;
    const double ratio = true_errors[k] / estimated[k];
    c.c_max = std::max(c.c_max, ratio);
    c.c_min = std::min(c.c_min, ratio);
    sum += ratio;
    ++used;
  }
  require(used > 0, ErrorCode::InvalidArgument,
          "calibrate_correction: every estimate is zero, no ratio available");
  c.c_mean = sum / static_cast<double>(used);
  return c;
}

}  // namespace parot

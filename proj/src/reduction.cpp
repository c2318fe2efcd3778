#include "parot/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace parot {

namespace {

std::string describe(const Alpha& a) {
  std::ostringstream os;
  os << "alpha_x=(";
  for (Index k = 0; k < a.kx(); ++k) os << (k ? "," : "") << a.x()[k];
  os << ") alpha_y=(";
  for (Index l = 0; l < a.ky(); ++l) os << (l ? "," : "") << a.y()[l];
  os << ")";
  return os.str();
}

}  // namespace

Matrix plan_aggregates(const TransportPlan& plan) {
  Matrix agg = Matrix::Zero(plan.rows(), 2);
  for (Index i = 0; i < plan.rows(); ++i) {
    double s1 = 0.0;
    double s0 = 0.0;
    for (Index j = 0; j < plan.cols(); ++j) {
      s1 += plan(i, j) * static_cast<double>(j + 1);
      s0 += plan(i, j);
    }
    agg(i, 0) = s1;
    agg(i, 1) = s0;
  }
  return agg;
}

SnapshotSolver lp_snapshot_solver(const CostMatrix& cost, const SimplexOptions& opts) {
  return [cost, opts](const GridMeasure& mu, const GridMeasure& nu) {
    const OTSolution s = solve_lp(cost, mu, nu, opts);
    return Snapshot{s.cost, plan_aggregates(s.plan)};
  };
}

SnapshotSolver sinkhorn_snapshot_solver(const CostMatrix& cost, const SinkhornOptions& opts) {
  return [cost, opts](const GridMeasure& mu, const GridMeasure& nu) {
    const SinkhornSolution s = solve_sinkhorn(cost, mu, nu, opts);
    return Snapshot{s.cost, plan_aggregates(s.plan)};
  };
}

std::vector<Vector> gram_schmidt(const std::vector<Vector>& vectors) {
  std::vector<Vector> out;
  out.reserve(vectors.size());
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    const Vector& v = vectors[k];
    require(out.empty() || v.size() == out.front().size(), ErrorCode::DimensionMismatch,
            "gram_schmidt: vectors have different lengths");
    Vector u = v;
    for (const Vector& z : out) u -= (z.dot(v) / z.squaredNorm()) * z;
    const double norm_v = v.norm();
    require(norm_v > 0.0 && u.norm() >= 1e-10 * norm_v, ErrorCode::LinearDependence,
            "gram_schmidt: vector " + std::to_string(k + 1) +
                " is linearly dependent on the previous ones");
    out.push_back(std::move(u));
  }
  return out;
}

std::pair<Matrix, Matrix> dual_bases(const MeasureFamily& family, BasisMode mode) {
  auto side = [mode](const std::vector<GridMeasure>& members, Index n) {
    std::vector<Vector> vs;
    for (const auto& m : members) vs.push_back(m.weights());
    const auto us = gram_schmidt(vs);
    const Index extra = mode == BasisMode::OnesAugmented ? 1 : 0;
    Matrix basis(n, static_cast<Index>(us.size()) + extra);
    for (std::size_t k = 0; k < us.size(); ++k) basis.col(static_cast<Index>(k)) = us[k];
    if (extra) basis.col(basis.cols() - 1).setOnes();
    return basis;
  };
  return {side(family.mus, family.nx()), side(family.nus, family.ny())};
}

void assemble_reduced(ReducedModel& model, const MeasureFamily& family) {
  require(model.U_hat.rows() == model.nx && model.V_hat.rows() == model.ny &&
              model.stacked_marginals.rows() == model.nx + model.ny,
          ErrorCode::DimensionMismatch, "assemble_reduced: bases do not match the model");
  const Index r = model.stacked_marginals.cols();
  model.A_hat.resize(model.N() + model.M(), r);
  model.A_hat.topRows(model.N()).noalias() =
      model.U_hat.transpose() * model.stacked_marginals.topRows(model.nx);
  model.A_hat.bottomRows(model.M()).noalias() =
      model.V_hat.transpose() * model.stacked_marginals.bottomRows(model.ny);
  model.proj_mu = model.U_hat.transpose() * family.mu_matrix();
  model.proj_nu = model.V_hat.transpose() * family.nu_matrix();
}

ReducedModel build_offline(const MeasureFamily& family, const std::vector<Alpha>& training,
                           const SnapshotSolver& solver, BasisMode mode) {
  family.validate();
  for (const Alpha& corner : extreme_points(static_cast<int>(family.kx()), static_cast<int>(family.ky())))
    require(contains_alpha(training, corner), ErrorCode::MissingExtremePoints,
            "build_offline: training set lacks extreme point " + describe(corner));

  ReducedModel model;
  model.kx = family.kx();
  model.ky = family.ky();
  model.nx = family.nx();
  model.ny = family.ny();
  model.target_bins = model.ny;
  model.target_dims = 1;
  const Index r = static_cast<Index>(training.size());
  model.snapshot_alphas = training;
  model.reduced_cost.resize(r);
  model.stacked_marginals.resize(model.nx + model.ny, r);

  bool aggregates = true;
  std::vector<Matrix> aggs;
  aggs.reserve(training.size());
  for (Index k = 0; k < r; ++k) {
    const Alpha& alpha = training[static_cast<std::size_t>(k)];
    const auto [mu, nu] = blend(family, alpha);
    model.stacked_marginals.col(k).head(model.nx) = mu.weights();
    model.stacked_marginals.col(k).tail(model.ny) = nu.weights();
    Snapshot snap;
    try {
      snap = solver(mu, nu);
    } catch (const Error& e) {
      throw Error(e.code(), "build_offline: snapshot at " + describe(alpha) + " failed: " + e.what());
    }
    require(std::isfinite(snap.cost), ErrorCode::SolverFailure,
            "build_offline: non-finite snapshot cost at " + describe(alpha));
    // Costs are nonnegative; clip round-off from the solver.
    model.reduced_cost[k] = std::max(0.0, snap.cost);
    if (snap.aggregates.size() == 0) aggregates = false;
    if (aggregates) aggs.push_back(std::move(snap.aggregates));
  }
  if (aggregates) {
    model.map_aggregates = std::move(aggs);
    model.target_dims = static_cast<int>(model.map_aggregates.front().cols()) - 1;
  }

  std::tie(model.U_hat, model.V_hat) = dual_bases(family, mode);
  assemble_reduced(model, family);
  return model;
}

Vector reduced_rhs(const ReducedModel& model, const Alpha& alpha, OpCounter* ops) {
  require(alpha.kx() == model.kx && alpha.ky() == model.ky, ErrorCode::DimensionMismatch,
          "reduced_rhs: alpha dimensions do not match the model");
  Vector rhs(model.N() + model.M());
  rhs.head(model.N()) = model.proj_mu * alpha.x();
  rhs.tail(model.M()) = model.proj_nu * alpha.y();
  count(ops, static_cast<std::uint64_t>(model.N() * model.kx + model.M() * model.ky));
  return rhs;
}

ReducedSolution solve_reduced(const ReducedModel& model, const Alpha& alpha, OpCounter* ops,
                              const SimplexOptions& opts) {
  const Vector rhs = reduced_rhs(model, alpha, ops);
  const Index m = model.A_hat.rows();
  const Index r = model.A_hat.cols();

  // Row equilibration; duals are scaled back afterwards.
  Vector scale(m);
  for (Index i = 0; i < m; ++i) {
    const double mx = model.A_hat.row(i).cwiseAbs().maxCoeff();
    scale[i] = mx > 0.0 ? 1.0 / mx : 1.0;
  }
  DenseLP lp;
  lp.cost = model.reduced_cost;
  lp.constraint_matrix = scale.asDiagonal() * model.A_hat;
  lp.rhs = scale.cwiseProduct(rhs);
  count(ops, static_cast<std::uint64_t>(2 * m * r));

  const LPSolution sol = solve(lp, opts);
  // Each simplex iteration prices R columns of length m and updates an m x m inverse.
  count(ops, static_cast<std::uint64_t>((sol.iterations + 2) * m * (m + r)));

  ReducedSolution out;
  out.status = sol.status;
  if (sol.status != LPStatus::Optimal) return out;
  out.p = sol.primal;
  const Vector y = scale.cwiseProduct(sol.dual);
  out.a = y.head(model.N());
  out.b = y.tail(model.M());
  out.I_R = model.reduced_cost.dot(out.p);
  return out;
}

SemiReducedSolution solve_semi_reduced(const ReducedModel& model, const MeasureFamily& family,
                                       const Alpha& alpha, const SimplexOptions& opts) {
  const auto [mu, nu] = blend(family, alpha);
  require(mu.size() == model.nx && nu.size() == model.ny, ErrorCode::DimensionMismatch,
          "solve_semi_reduced: family does not match the model");
  DenseLP lp;
  lp.cost = model.reduced_cost;
  lp.constraint_matrix = model.stacked_marginals;
  lp.rhs.resize(model.nx + model.ny);
  lp.rhs.head(model.nx) = mu.weights();
  lp.rhs.tail(model.ny) = nu.weights();
  const LPSolution sol = solve(lp, opts);

  SemiReducedSolution out;
  out.status = sol.status;
  if (sol.status != LPStatus::Optimal) return out;
  out.p = sol.primal;
  out.I_RP = model.reduced_cost.dot(out.p);
  return out;
}

DualPair lift_potentials(const ReducedModel& model, const Vector& a, const Vector& b) {
  require(a.size() == model.N() && b.size() == model.M(), ErrorCode::DimensionMismatch,
          "lift_potentials: coefficient lengths do not match the bases");
  return DualPair{model.U_hat * a, model.V_hat * b};
}

}  // namespace parot

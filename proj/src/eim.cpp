#include "parot/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace parot {

namespace {

Index argmax_abs(const Vector& v) {
  Index best = 0;
  for (Index j = 1; j < v.size(); ++j)
    if (std::abs(v[j]) > std::abs(v[best])) best = j;
  return best;
}

Vector gather(const Vector& v, const std::vector<Index>& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out[static_cast<Index>(k)] = v[idx[k]];
  return out;
}

}  // namespace

Vector eim_coefficients(const EIMBasis& basis, const Vector& values, OpCounter* ops) {
  const Index m = basis.size();
  require(values.size() == m, ErrorCode::DimensionMismatch, "eim_coefficients: length mismatch");
  Vector beta(m);
  for (Index l = 0; l < m; ++l) {
    double s = values[l];
    for (Index z = 0; z < l; ++z) s -= basis.interp(l, z) * beta[z];
    const double d = basis.interp(l, l);
    require(d != 0.0 && std::isfinite(d), ErrorCode::NumericalBreakdown,
            "eim_coefficients: singular interpolation matrix");
    beta[l] = s / d;
  }
  count(ops, static_cast<std::uint64_t>(m * (m + 1) / 2));
  return beta;
}

EIMBasis eim_offline(const std::vector<Vector>& potentials, const std::vector<Vector>& g,
                     const CostMatrix& cost, const Matrix& members, const EIMOptions& opts) {
  require(!g.empty(), ErrorCode::InvalidArgument, "eim_offline: no snapshots");
  require(potentials.size() == g.size(), ErrorCode::DimensionMismatch,
          "eim_offline: potentials and transforms differ in count");
  require(opts.m_eim >= 1 && opts.m_prime >= 1, ErrorCode::InvalidArgument,
          "eim_offline: M_eim and M' must be >= 1");
  require(opts.m_eim <= static_cast<Index>(g.size()), ErrorCode::InvalidArgument,
          "eim_offline: M_eim exceeds the number of snapshots");
  const Index n = cost.cols();
  for (std::size_t s = 0; s < g.size(); ++s)
    require(g[s].size() == n && potentials[s].size() == cost.rows(), ErrorCode::DimensionMismatch,
            "eim_offline: snapshot length does not match the cost matrix");
  require(members.rows() == n, ErrorCode::DimensionMismatch,
          "eim_offline: member measures live on the wrong support");

  double scale = 1.0;
  for (const Vector& v : g) scale = std::max(scale, v.lpNorm<Eigen::Infinity>());
  const double stop = 1e-12 * scale;

  EIMBasis basis;
  std::vector<Vector> qs;
  Vector beta;
  Vector residual(n);
  while (static_cast<Index>(qs.size()) < opts.m_eim) {
    const Index m = static_cast<Index>(qs.size());
    Index best_s = -1;
    double best_err = -1.0;
    Vector best_res;
    for (std::size_t s = 0; s < g.size(); ++s) {
      residual = g[s];
      if (m > 0) {
        beta = eim_coefficients(basis, gather(g[s], basis.J));
        for (Index l = 0; l < m; ++l) residual -= beta[l] * qs[static_cast<std::size_t>(l)];
      }
      const double err = residual.lpNorm<Eigen::Infinity>();
      if (err > best_err) {
        best_err = err;
        best_s = static_cast<Index>(s);
        best_res = residual;
      }
    }
    if (best_err <= stop) break;
    const Index j = argmax_abs(best_res);
    if (std::find(basis.J.begin(), basis.J.end(), j) != basis.J.end()) break;
    qs.push_back(best_res / best_res[j]);
    basis.J.push_back(j);
    basis.greedy.push_back(best_s);

    const Index mm = m + 1;
    basis.Q.resize(n, mm);
    for (Index l = 0; l < mm; ++l) basis.Q.col(l) = qs[static_cast<std::size_t>(l)];
    basis.interp.resize(mm, mm);
    for (Index r = 0; r < mm; ++r)
      for (Index c = 0; c < mm; ++c) basis.interp(r, c) = basis.Q(basis.J[static_cast<std::size_t>(r)], c);
  }
  require(!qs.empty(), ErrorCode::InvalidArgument, "eim_offline: all snapshots are zero");

  std::set<Index> rows;
  if (opts.full_rows) {
    for (Index i = 0; i < cost.rows(); ++i) rows.insert(i);
  } else {
    // Representative potentials: greedy picks first, then the rest by index.
    std::vector<Index> order = basis.greedy;
    for (Index s = 0; s < static_cast<Index>(g.size()); ++s)
      if (std::find(order.begin(), order.end(), s) == order.end()) order.push_back(s);
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(opts.m_prime), order.size());
    for (std::size_t t = 0; t < take; ++t) {
      const Vector& phi = potentials[static_cast<std::size_t>(order[t])];
      for (Index j : basis.J) {
        Index arg = 0;
        double best = cost(0, j) - phi[0];
        for (Index i = 1; i < cost.rows(); ++i) {
          const double v = cost(i, j) - phi[i];
          if (v < best) {
            best = v;
            arg = i;
          }
        }
        rows.insert(arg);
      }
    }
  }
  basis.I.assign(rows.begin(), rows.end());
  basis.member_products = basis.Q.transpose() * members;
  return basis;
}

EIMEstimator build_eim_estimator(const ReducedModel& model, const CostMatrix& cost,
                                 const MeasureFamily& family, const std::vector<Alpha>& training,
                                 const EIMOptions& opts) {
  std::vector<Vector> phis, psis, phi_c, psi_cbar;
  for (const Alpha& alpha : training) {
    const ReducedSolution sol = solve_reduced(model, alpha);
    require(sol.status == LPStatus::Optimal, ErrorCode::SolverFailure,
            "build_eim_estimator: reduced solve failed on a training parameter");
    const DualPair lifted = lift_potentials(model, sol.a, sol.b);
    phi_c.push_back(c_transform(lifted.phi, cost));
    psi_cbar.push_back(cbar_transform(lifted.psi, cost));
    phis.push_back(lifted.phi);
    psis.push_back(lifted.psi);
  }
  EIMOptions side_opts = opts;
  side_opts.m_eim = std::min<Index>(opts.m_eim, static_cast<Index>(training.size()));

  EIMEstimator est;
  est.c_side = eim_offline(phis, phi_c, cost, family.nu_matrix(), side_opts);
  const CostMatrix cost_t(cost.entries().transpose());
  est.cbar_side = eim_offline(psis, psi_cbar, cost_t, family.mu_matrix(), side_opts);
  finalize_eim_estimator(est, model, cost);
  return est;
}

void finalize_eim_estimator(EIMEstimator& est, const ReducedModel& model, const CostMatrix& cost) {
  const auto& ic = est.c_side.I;
  const auto& jc = est.c_side.J;
  est.U_rows.resize(static_cast<Index>(ic.size()), model.N());
  est.cost_c.resize(static_cast<Index>(ic.size()), static_cast<Index>(jc.size()));
  for (std::size_t r = 0; r < ic.size(); ++r) {
    est.U_rows.row(static_cast<Index>(r)) = model.U_hat.row(ic[r]);
    for (std::size_t m = 0; m < jc.size(); ++m)
      est.cost_c(static_cast<Index>(r), static_cast<Index>(m)) = cost(ic[r], jc[m]);
  }
  const auto& ib = est.cbar_side.I;
  const auto& jb = est.cbar_side.J;
  est.V_rows.resize(static_cast<Index>(ib.size()), model.M());
  est.cost_cbar.resize(static_cast<Index>(ib.size()), static_cast<Index>(jb.size()));
  for (std::size_t r = 0; r < ib.size(); ++r) {
    est.V_rows.row(static_cast<Index>(r)) = model.V_hat.row(ib[r]);
    for (std::size_t m = 0; m < jb.size(); ++m)
      est.cost_cbar(static_cast<Index>(r), static_cast<Index>(m)) = cost(jb[m], ib[r]);
  }
}

double eim_fast_gap(const EIMEstimator& est, const ReducedModel& model, const ReducedSolution& sol,
                    const Alpha& alpha, OpCounter* ops) {
  require(sol.status == LPStatus::Optimal, ErrorCode::InvalidArgument,
          "eim_fast_gap: reduced solution is not optimal");
  require(alpha.kx() == model.kx && alpha.ky() == model.ky, ErrorCode::DimensionMismatch,
          "eim_fast_gap: alpha dimensions do not match the model");

  // One side: potential values at I, minima at the magic points, interpolation
  // coefficients, then integration against the blended member products.
  auto side = [ops](const EIMBasis& basis, const Matrix& rows, const Matrix& cost_im,
                    const Vector& coeffs, const Vector& weights) {
    const Vector pot = rows * coeffs;
    count(ops, static_cast<std::uint64_t>(rows.rows() * rows.cols()));
    const Index m = basis.size();
    Vector vals(m);
    for (Index l = 0; l < m; ++l) {
      double best = std::numeric_limits<double>::infinity();
      for (Index r = 0; r < pot.size(); ++r) best = std::min(best, cost_im(r, l) - pot[r]);
      vals[l] = best;
    }
    count(ops, static_cast<std::uint64_t>(pot.size() * m));
    const Vector beta = eim_coefficients(basis, vals, ops);
    count(ops, static_cast<std::uint64_t>(m * weights.size() + m));
    return beta.dot(basis.member_products * weights);
  };

  const double phi_mu = sol.a.dot(model.proj_mu * alpha.x());
  const double psi_nu = sol.b.dot(model.proj_nu * alpha.y());
  count(ops, static_cast<std::uint64_t>(model.N() * (model.kx + 1) + model.M() * (model.ky + 1)));

  const double phic_nu = side(est.c_side, est.U_rows, est.cost_c, sol.a, alpha.y());
  const double psicbar_mu = side(est.cbar_side, est.V_rows, est.cost_cbar, sol.b, alpha.x());
  return sol.I_R - std::max(phi_mu + phic_nu, psicbar_mu + psi_nu);
}

}  // namespace parot

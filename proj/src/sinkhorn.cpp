#include "parot/hf_ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace parot {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

// log(sum exp(v)) over a strided range; -inf when every term is -inf.
template <class F>
double log_sum_exp(Index n, F&& term) {
  double mx = kNegInf;
  for (Index k = 0; k < n; ++k) mx = std::max(mx, term(k));
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (Index k = 0; k < n; ++k) s += std::exp(term(k) - mx);
  return mx + std::log(s);
}

bool all_finite(const Vector& v) { return v.allFinite(); }

SinkhornSolution sinkhorn_scaling(const CostMatrix& cost, const Vector& mu, const Vector& nu,
                                  const SinkhornOptions& opts, bool& ok) {
  const Matrix k = (-cost.entries() / opts.epsilon).array().exp().matrix();
  Vector u = Vector::Ones(mu.size());
  Vector v = Vector::Ones(nu.size());
  SinkhornSolution out;
  ok = true;
  for (int it = 1; it <= opts.max_iters; ++it) {
    const Vector kv = k * v;
    u = mu.cwiseQuotient(kv);
    for (Index i = 0; i < u.size(); ++i)
      if (mu[i] == 0.0) u[i] = 0.0;
    const Vector ktu = k.transpose() * u;
    v = nu.cwiseQuotient(ktu);
    for (Index j = 0; j < v.size(); ++j)
      if (nu[j] == 0.0) v[j] = 0.0;
    if (!all_finite(u) || !all_finite(v)) {
      ok = false;
      return out;
    }
    out.iters = it;
    if (it == 1 || it % 10 == 0 || it == opts.max_iters) {
      const Vector rows = u.cwiseProduct(k * v);
      const Vector cols = v.cwiseProduct(k.transpose() * u);
      out.marginal_error = (rows - mu).lpNorm<1>() + (cols - nu).lpNorm<1>();
      if (out.marginal_error <= opts.tol) {
        out.converged = true;
        break;
      }
    }
  }
  out.plan = u.asDiagonal() * k * v.asDiagonal();
  if (!out.plan.allFinite()) ok = false;
  return out;
}

SinkhornSolution sinkhorn_log(const CostMatrix& cost, const Vector& mu, const Vector& nu,
                              const SinkhornOptions& opts) {
  const Index nx = mu.size();
  const Index ny = nu.size();
  const double eps = opts.epsilon;
  const Matrix& c = cost.entries();
  Vector log_mu(nx), log_nu(ny);
  for (Index i = 0; i < nx; ++i) log_mu[i] = safe_log(mu[i]);
  for (Index j = 0; j < ny; ++j) log_nu[j] = safe_log(nu[j]);

  // Scaled potentials f = phi / eps, g = psi / eps.
  Vector f = Vector::Zero(nx);
  Vector g = Vector::Zero(ny);
  Matrix log_plan(nx, ny);
  auto form_plan = [&] {
    for (Index j = 0; j < ny; ++j)
      for (Index i = 0; i < nx; ++i) log_plan(i, j) = f[i] + g[j] - c(i, j) / eps;
  };

  SinkhornSolution out;
  out.log_domain = true;
  for (int it = 1; it <= opts.max_iters; ++it) {
    for (Index i = 0; i < nx; ++i)
      f[i] = log_mu[i] - log_sum_exp(ny, [&](Index j) { return g[j] - c(i, j) / eps; });
    for (Index j = 0; j < ny; ++j)
      g[j] = log_nu[j] - log_sum_exp(nx, [&](Index i) { return f[i] - c(i, j) / eps; });
    out.iters = it;
    if (it == 1 || it % 10 == 0 || it == opts.max_iters) {
      form_plan();
      const Matrix p = log_plan.array().exp().matrix();
      out.marginal_error =
          (p.rowwise().sum() - mu).lpNorm<1>() + (p.colwise().sum().transpose() - nu).lpNorm<1>();
      if (out.marginal_error <= opts.tol) {
        out.converged = true;
        break;
      }
    }
  }
  form_plan();
  out.plan = log_plan.array().exp().matrix();
  return out;
}

}  // namespace

SinkhornSolution solve_sinkhorn(const CostMatrix& cost, const GridMeasure& mu, const GridMeasure& nu,
                                const SinkhornOptions& opts) {
  require(opts.epsilon > 0.0 && std::isfinite(opts.epsilon), ErrorCode::InvalidArgument,
          "solve_sinkhorn: epsilon must be positive");
  require(opts.max_iters >= 1, ErrorCode::InvalidArgument, "solve_sinkhorn: max_iters >= 1");
  require(mu.size() == cost.rows() && nu.size() == cost.cols(), ErrorCode::DimensionMismatch,
          "solve_sinkhorn: marginal sizes do not match the cost matrix");

  SinkhornSolution out;
  bool ok = false;
  if (!opts.force_log && opts.epsilon >= 1e-2 * cost.sup_norm()) {
    out = sinkhorn_scaling(cost, mu.weights(), nu.weights(), opts, ok);
  }
  if (!ok) out = sinkhorn_log(cost, mu.weights(), nu.weights(), opts);
  out.cost = plan_cost(out.plan, cost);
  return out;
}

// ---------------------------------------------------------------------------
// Separable grid solver.

double grid_cost_sup(int bins, int dims) {
  const double d = bins - 1;
  return dims * d * d;
}

namespace {

// Applies an operator of the form (K_0 x K_1 x ... x K_{D-1}) to a tensor
// stored row-major over D axes of length n. Each K_a is n x n and indexed
// (output, input). In log mode every quantity is a logarithm and products
// become log-sum-exp reductions.
class SeparableOperator {
 public:
  SeparableOperator(Index n, int dims) : n_(n), dims_(dims) {
    total_ = 1;
    for (int a = 0; a < dims; ++a) total_ *= n;
    buf_.resize(total_);
  }

  Index total() const { return total_; }

  void apply(const std::vector<const Matrix*>& axis, const Vector& in, Vector& out) {
    out = in;
    for (int a = 0; a < dims_; ++a) {
      Index inner = 1;
      for (int b = a + 1; b < dims_; ++b) inner *= n_;
      const Index outer = total_ / (inner * n_);
      const Matrix& k = *axis[a];
      for (Index o = 0; o < outer; ++o) {
        for (Index i = 0; i < n_; ++i) {
          for (Index in_idx = 0; in_idx < inner; ++in_idx) {
            double s = 0.0;
            for (Index j = 0; j < n_; ++j) s += k(i, j) * out[(o * n_ + j) * inner + in_idx];
            buf_[(o * n_ + i) * inner + in_idx] = s;
          }
        }
      }
      out.swap(buf_);
      buf_.resize(total_);
    }
  }

  void apply_log(const std::vector<const Matrix*>& axis, const Vector& in, Vector& out) {
    out = in;
    std::vector<double> terms(n_);
    for (int a = 0; a < dims_; ++a) {
      Index inner = 1;
      for (int b = a + 1; b < dims_; ++b) inner *= n_;
      const Index outer = total_ / (inner * n_);
      const Matrix& k = *axis[a];
      for (Index o = 0; o < outer; ++o) {
        for (Index i = 0; i < n_; ++i) {
          for (Index in_idx = 0; in_idx < inner; ++in_idx) {
            for (Index j = 0; j < n_; ++j) terms[j] = k(i, j) + out[(o * n_ + j) * inner + in_idx];
            buf_[(o * n_ + i) * inner + in_idx] =
                log_sum_exp(n_, [&](Index j) { return terms[j]; });
          }
        }
      }
      out.swap(buf_);
      buf_.resize(total_);
    }
  }

 private:
  Index n_;
  int dims_;
  Index total_ = 1;
  Vector buf_;
};

struct GridKernels {
  Matrix base;      // exp(-(i-j)^2 / eps) or its log
  Matrix weighted;  // base * (j + 1), acting on the input index
  Matrix costed;    // base * (i - j)^2
};

GridKernels make_kernels(Index n, double eps, bool log_domain) {
  GridKernels k{Matrix(n, n), Matrix(n, n), Matrix(n, n)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double d2 = static_cast<double>((i - j) * (i - j));
      if (log_domain) {
        k.base(i, j) = -d2 / eps;
        k.weighted(i, j) = -d2 / eps + std::log(static_cast<double>(j + 1));
        k.costed(i, j) = d2 > 0.0 ? -d2 / eps + std::log(d2) : kNegInf;
      } else {
        k.base(i, j) = std::exp(-d2 / eps);
        k.weighted(i, j) = k.base(i, j) * static_cast<double>(j + 1);
        k.costed(i, j) = k.base(i, j) * d2;
      }
    }
  }
  return k;
}

}  // namespace

GridSinkhornSolution solve_sinkhorn_grid(int bins, int dims, const GridMeasure& mu,
                                         const GridMeasure& nu, const SinkhornOptions& opts) {
  require(bins >= 1 && dims >= 1, ErrorCode::InvalidArgument, "solve_sinkhorn_grid: bad grid");
  require(opts.epsilon > 0.0 && std::isfinite(opts.epsilon), ErrorCode::InvalidArgument,
          "solve_sinkhorn_grid: epsilon must be positive");
  const Index n = bins;
  SeparableOperator op(n, dims);
  const Index total = op.total();
  require(mu.size() == total && nu.size() == total, ErrorCode::DimensionMismatch,
          "solve_sinkhorn_grid: histograms do not match bins^dims");

  const Vector& a = mu.weights();
  const Vector& b = nu.weights();
  const bool log_first = opts.force_log || opts.epsilon < 1e-2 * grid_cost_sup(bins, dims);

  GridSinkhornSolution out;
  // Kernel is symmetric, so the transpose apply reuses the same axis factors.
  auto run = [&](bool log_domain) -> bool {
    const GridKernels kern = make_kernels(n, opts.epsilon, log_domain);
    const std::vector<const Matrix*> base(dims, &kern.base);
    Vector lu = Vector::Zero(total);  // log u, or u itself in scaling mode
    Vector lv = Vector::Zero(total);
    if (!log_domain) {
      lu.setOnes();
      lv.setOnes();
    }
    Vector tmp(total), tmp2(total);
    Vector log_a(total), log_b(total);
    for (Index i = 0; i < total; ++i) {
      log_a[i] = safe_log(a[i]);
      log_b[i] = safe_log(b[i]);
    }
    out = GridSinkhornSolution{};
    out.log_domain = log_domain;

    auto marginal_error = [&]() {
      double err = 0.0;
      if (log_domain) {
        op.apply_log(base, lv, tmp);
        for (Index i = 0; i < total; ++i)
          err += std::abs((lu[i] == kNegInf ? 0.0 : std::exp(lu[i] + tmp[i])) - a[i]);
        op.apply_log(base, lu, tmp);
        for (Index j = 0; j < total; ++j)
          err += std::abs((lv[j] == kNegInf ? 0.0 : std::exp(lv[j] + tmp[j])) - b[j]);
      } else {
        op.apply(base, lv, tmp);
        for (Index i = 0; i < total; ++i) err += std::abs(lu[i] * tmp[i] - a[i]);
        op.apply(base, lu, tmp);
        for (Index j = 0; j < total; ++j) err += std::abs(lv[j] * tmp[j] - b[j]);
      }
      return err;
    };

    for (int it = 1; it <= opts.max_iters; ++it) {
      if (log_domain) {
        op.apply_log(base, lv, tmp);
        for (Index i = 0; i < total; ++i) lu[i] = a[i] > 0.0 ? log_a[i] - tmp[i] : kNegInf;
        op.apply_log(base, lu, tmp);
        for (Index j = 0; j < total; ++j) lv[j] = b[j] > 0.0 ? log_b[j] - tmp[j] : kNegInf;
        for (Index i = 0; i < total; ++i)
          if (std::isnan(lu[i]) || lu[i] == std::numeric_limits<double>::infinity() ||
              std::isnan(lv[i]) || lv[i] == std::numeric_limits<double>::infinity())
            return false;
      } else {
        op.apply(base, lv, tmp);
        for (Index i = 0; i < total; ++i) lu[i] = a[i] > 0.0 ? a[i] / tmp[i] : 0.0;
        op.apply(base, lu, tmp);
        for (Index j = 0; j < total; ++j) lv[j] = b[j] > 0.0 ? b[j] / tmp[j] : 0.0;
        if (!lu.allFinite() || !lv.allFinite()) return false;
      }
      out.iters = it;
      if (it == 1 || it % 10 == 0 || it == opts.max_iters) {
        out.marginal_error = marginal_error();
        if (out.marginal_error <= opts.tol) {
          out.converged = true;
          break;
        }
      }
    }

    // Stream aggregates: row i of the plan is u_i K_ij v_j, so each aggregate
    // is u_i times a separable apply with one axis factor swapped.
    out.row_aggregates.resize(total, dims + 1);
    std::vector<const Matrix*> axis(dims, &kern.base);
    auto finish = [&](const Vector& t, Index col) {
      for (Index i = 0; i < total; ++i) {
        if (log_domain)
          out.row_aggregates(i, col) = lu[i] == kNegInf ? 0.0 : std::exp(lu[i] + t[i]);
        else
          out.row_aggregates(i, col) = lu[i] * t[i];
      }
    };
    for (int d = 0; d < dims; ++d) {
      axis.assign(dims, &kern.base);
      axis[d] = &kern.weighted;
      if (log_domain) op.apply_log(axis, lv, tmp); else op.apply(axis, lv, tmp);
      finish(tmp, d);
    }
    axis.assign(dims, &kern.base);
    if (log_domain) op.apply_log(axis, lv, tmp); else op.apply(axis, lv, tmp);
    finish(tmp, dims);

    // <plan, C> = sum_a sum_ij u_i [K with axis a costed]_ij v_j.
    double cost = 0.0;
    for (int d = 0; d < dims; ++d) {
      axis.assign(dims, &kern.base);
      axis[d] = &kern.costed;
      if (log_domain) {
        op.apply_log(axis, lv, tmp2);
        for (Index i = 0; i < total; ++i)
          if (lu[i] != kNegInf && tmp2[i] != kNegInf) cost += std::exp(lu[i] + tmp2[i]);
      } else {
        op.apply(axis, lv, tmp2);
        cost += lu.dot(tmp2);
      }
    }
    out.cost = cost;
    out.log_u = log_domain ? lu : lu.unaryExpr([](double x) { return safe_log(x); });
    out.log_v = log_domain ? lv : lv.unaryExpr([](double x) { return safe_log(x); });
    return std::isfinite(cost) && out.row_aggregates.allFinite();
  };

  if (log_first || !run(false)) {
    require(run(true), ErrorCode::NumericalBreakdown,
            "solve_sinkhorn_grid: log-domain iteration produced non-finite values");
  }
  return out;
}

}  // namespace parot

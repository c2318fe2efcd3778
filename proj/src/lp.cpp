#include "parot/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace parot {

const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// Column access for the two storage types.

double col_dot(const Matrix& a, Index j, const Vector& y) { return a.col(j).dot(y); }

double col_dot(const SparseMatrix& a, Index j, const Vector& y) {
  double s = 0.0;
  for (SparseMatrix::InnerIterator it(a, j); it; ++it) s += it.value() * y[it.index()];
  return s;
}

void col_times(const Matrix& binv, const Matrix& a, Index j, Vector& out) {
  out.noalias() = binv * a.col(j);
}

void col_times(const Matrix& binv, const SparseMatrix& a, Index j, Vector& out) {
  out.setZero();
  for (SparseMatrix::InnerIterator it(a, j); it; ++it) out += it.value() * binv.col(it.index());
}

void col_scatter(const Matrix& a, Index j, Eigen::Ref<Vector> dst) { dst = a.col(j); }

void col_scatter(const SparseMatrix& a, Index j, Eigen::Ref<Vector> dst) {
  dst.setZero();
  for (SparseMatrix::InnerIterator it(a, j); it; ++it) dst[it.index()] = it.value();
}

template <class MatrixT>
class RevisedSimplex {
 public:
  RevisedSimplex(const BasicLP<MatrixT>& lp, const SimplexOptions& opts)
      : m_(lp.constraint_matrix.rows()), n_(lp.constraint_matrix.cols()), opts_(opts) {
    require(lp.cost.size() == n_ && lp.rhs.size() == m_, ErrorCode::DimensionMismatch,
            "lp: cost/rhs sizes do not match the constraint matrix");
    sign_ = Vector::Ones(m_);
    for (Index i = 0; i < m_; ++i)
      if (lp.rhs[i] < 0.0) sign_[i] = -1.0;
    a_ = sign_.asDiagonal() * lp.constraint_matrix;
    b_ = sign_.cwiseProduct(lp.rhs);
    c_ = lp.cost;
    refactor_period_ = opts.refactor_period > 0 ? opts.refactor_period
                                                : static_cast<int>(std::max<Index>(50, m_));
    bland_after_ = opts.bland_after > 0 ? opts.bland_after : 5 * (m_ + n_);
    max_iter_ = opts.max_iterations > 0 ? opts.max_iterations : 50 * (m_ + n_) + 1000;
  }

  LPSolution run() {
    LPSolution sol;
    if (m_ == 0) return solve_unconstrained();

    if (try_initial_basis()) return phase_two(sol);

    basis_.resize(m_);
    is_basic_.assign(n_ + m_, 0);
    for (Index i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      is_basic_[n_ + i] = 1;
    }
    binv_ = Matrix::Identity(m_, m_);
    xb_ = b_;

    // Phase I: minimize the sum of artificials.
    phase_cost_ = Vector::Zero(n_ + m_);
    phase_cost_.tail(m_).setOnes();
    const LPStatus p1 = iterate();
    (void)p1;  // bounded below by zero
    double infeas = 0.0;
    for (Index i = 0; i < m_; ++i)
      if (basis_[i] >= n_) infeas += std::max(0.0, xb_[i]);
    const double scale = 1.0 + b_.lpNorm<1>();
    if (infeas > opts_.feasibility_tol * scale) {
      sol.status = LPStatus::Infeasible;
      sol.iterations = iterations_;
      return sol;
    }
    drive_out_artificials();

    phase_cost_.head(n_) = c_;
    phase_cost_.tail(m_).setZero();
    refactor();
    return phase_two(sol);
  }

 private:
  // Phase II on the original cost; artificials never re-enter.
  LPSolution phase_two(LPSolution& sol) {
    const LPStatus p2 = iterate();
    sol.iterations = iterations_;
    if (p2 == LPStatus::Unbounded) {
      sol.status = LPStatus::Unbounded;
      return sol;
    }

    sol.status = LPStatus::Optimal;
    sol.primal = Vector::Zero(n_);
    for (Index i = 0; i < m_; ++i)
      if (basis_[i] < n_) sol.primal[basis_[i]] = std::max(0.0, xb_[i]);
    sol.dual = sign_.cwiseProduct(duals());
    sol.objective = c_.dot(sol.primal);
    return sol;
  }

  bool try_initial_basis() {
    const auto& init = opts_.initial_basis;
    if (static_cast<Index>(init.size()) != m_) return false;
    basis_.assign(init.begin(), init.end());
    is_basic_.assign(n_ + m_, 0);
    for (Index j : basis_) {
      if (j < 0 || j >= n_ || is_basic_[j]) return false;
      is_basic_[j] = 1;
    }
    phase_cost_ = Vector::Zero(n_ + m_);
    phase_cost_.head(n_) = c_;
    try {
      refactor();
    } catch (const Error&) {
      return false;
    }
    return xb_.minCoeff() >= -opts_.feasibility_tol;
  }

  LPSolution solve_unconstrained() {
    LPSolution sol;
    if ((c_.array() < -opts_.optimality_tol).any()) {
      sol.status = LPStatus::Unbounded;
      return sol;
    }
    sol.status = LPStatus::Optimal;
    sol.primal = Vector::Zero(n_);
    sol.dual = Vector::Zero(0);
    return sol;
  }

  Vector basic_costs() const {
    Vector cb(m_);
    for (Index i = 0; i < m_; ++i) cb[i] = phase_cost_[basis_[i]];
    return cb;
  }

  Vector duals() const { return binv_.transpose() * basic_costs(); }

  double reduced_cost(Index j) const {
    if (j >= n_) return phase_cost_[j] - y_[j - n_];
    return phase_cost_[j] - col_dot(a_, j, y_);
  }

  void entering_column(Index j, Vector& out) const {
    if (j >= n_) {
      out = binv_.col(j - n_);
    } else {
      col_times(binv_, a_, j, out);
    }
  }

  void refactor() {
    Matrix bmat(m_, m_);
    for (Index i = 0; i < m_; ++i) {
      const Index j = basis_[i];
      if (j >= n_) {
        bmat.col(i) = Vector::Unit(m_, j - n_);
      } else {
        col_scatter(a_, j, bmat.col(i));
      }
    }
    Eigen::PartialPivLU<Matrix> lu(bmat);
    const auto diag = lu.matrixLU().diagonal().cwiseAbs();
    require(diag.minCoeff() > 1e-13 * std::max(1.0, diag.maxCoeff()), ErrorCode::NumericalBreakdown,
            "lp: basis matrix became singular during refactorization");
    binv_ = lu.inverse();
    xb_ = binv_ * b_;
    for (Index i = 0; i < m_; ++i)
      if (xb_[i] < 0.0 && xb_[i] > -opts_.feasibility_tol) xb_[i] = 0.0;
    y_ = duals();
    since_refactor_ = 0;
  }

  void pivot(Index r, Index q, const Vector& alpha, double theta, double dq) {
    const double ar = alpha[r];
    // y <- y + (d_q / alpha_r) * (row r of the old inverse)
    y_ += (dq / ar) * binv_.row(r).transpose();
    for (Index i = 0; i < m_; ++i) xb_[i] -= theta * alpha[i];
    xb_[r] = theta;
    for (Index i = 0; i < m_; ++i)
      if (xb_[i] < 0.0 && xb_[i] > -opts_.feasibility_tol) xb_[i] = 0.0;

    Eigen::RowVectorXd row = binv_.row(r) / ar;
    Vector w = alpha;
    w[r] = 0.0;
    binv_.noalias() -= w * row;
    binv_.row(r) = row;

    is_basic_[basis_[r]] = 0;
    basis_[r] = q;
    is_basic_[q] = 1;
    ++since_refactor_;
  }

  LPStatus iterate() {
    y_ = duals();
    since_refactor_ = 0;
    Vector alpha(m_);
    for (;;) {
      if (since_refactor_ >= refactor_period_) refactor();
      const bool bland = iterations_ >= bland_after_;

      Index q = -1;
      double dq = -opts_.optimality_tol;
      for (Index j = 0; j < n_; ++j) {  // artificials never enter
        if (is_basic_[j]) continue;
        const double d = reduced_cost(j);
        if (d < dq) {
          dq = d;
          q = j;
          if (bland) break;
        }
      }
      if (q < 0) {
        // Confirm optimality on a fresh factorization before stopping.
        if (since_refactor_ > 0) {
          refactor();
          continue;
        }
        return LPStatus::Optimal;
      }

      entering_column(q, alpha);
      Index r = -1;
      double theta = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < m_; ++i) {
        if (alpha[i] <= opts_.pivot_tol) continue;
        const double t = std::max(0.0, xb_[i]) / alpha[i];
        if (r < 0 || t < theta - 1e-12) {
          theta = t;
          r = i;
        } else if (t <= theta + 1e-12) {
          const bool better = bland ? basis_[i] < basis_[r] : alpha[i] > alpha[r];
          if (better) {
            theta = std::min(theta, t);
            r = i;
          }
        }
      }
      if (r < 0) return LPStatus::Unbounded;

      pivot(r, q, alpha, theta, dq);
      ++iterations_;
      require(iterations_ <= max_iter_, ErrorCode::NumericalBreakdown,
              "lp: iteration limit reached (" + std::to_string(max_iter_) + ")");
    }
  }

  void drive_out_artificials() {
    Vector alpha(m_);
    for (Index r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      const Vector row = binv_.row(r).transpose();
      Index best = -1;
      double best_val = opts_.pivot_tol;
      for (Index j = 0; j < n_; ++j) {
        if (is_basic_[j]) continue;
        const double v = std::abs(col_dot(a_, j, row));
        if (v > best_val) {
          best_val = v;
          best = j;
        }
      }
      if (best < 0) continue;  // redundant row: artificial stays basic at zero
      xb_[r] = 0.0;
      entering_column(best, alpha);
      pivot(r, best, alpha, 0.0, 0.0);
    }
    refactor();
  }

  Index m_;
  Index n_;
  SimplexOptions opts_;
  MatrixT a_;
  Vector b_;
  Vector c_;
  Vector sign_;

  Vector phase_cost_;
  std::vector<Index> basis_;
  std::vector<char> is_basic_;
  Matrix binv_;
  Vector xb_;
  Vector y_;

  int refactor_period_ = 50;
  int since_refactor_ = 0;
  long bland_after_ = 0;
  long max_iter_ = 0;
  long iterations_ = 0;
};

}  // namespace

LPSolution solve(const DenseLP& lp, const SimplexOptions& opts) {
  return RevisedSimplex<Matrix>(lp, opts).run();
}

LPSolution solve(const SparseLP& lp, const SimplexOptions& opts) {
  SparseLP compressed = lp;
  compressed.constraint_matrix.makeCompressed();
  return RevisedSimplex<SparseMatrix>(compressed, opts).run();
}

}  // namespace parot

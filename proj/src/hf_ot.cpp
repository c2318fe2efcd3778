#include "parot/hf_ot.hpp"

#include "parot/csv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

namespace parot {

CostMatrix::CostMatrix(Matrix entries) : entries_(std::move(entries)) {
  for (Index j = 0; j < entries_.cols(); ++j)
    for (Index i = 0; i < entries_.rows(); ++i)
      require(std::isfinite(entries_(i, j)) && entries_(i, j) >= 0.0, ErrorCode::InvalidArgument,
              "CostMatrix: entries must be finite and nonnegative");
  sup_norm_ = entries_.size() ? entries_.maxCoeff() : 0.0;
}

CostMatrix quadratic_cost(const Matrix& support_x, const Matrix& support_y) {
  require(support_x.cols() == support_y.cols(), ErrorCode::DimensionMismatch,
          "quadratic_cost: supports have different coordinate dimensions");
  Matrix c(support_x.rows(), support_y.rows());
  for (Index j = 0; j < support_y.rows(); ++j)
    for (Index i = 0; i < support_x.rows(); ++i)
      c(i, j) = (support_y.row(j) - support_x.row(i)).squaredNorm();
  return CostMatrix(std::move(c));
}

Vector vectorize(const TransportPlan& plan) {
  return Eigen::Map<const Vector>(plan.data(), plan.size());
}

TransportPlan unvectorize(const Vector& v, Index nx, Index ny) {
  require(v.size() == nx * ny, ErrorCode::DimensionMismatch, "unvectorize: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), nx, ny);
}

SparseMatrix constraint_matrix(Index nx, Index ny) {
  require(nx >= 1 && ny >= 1, ErrorCode::InvalidArgument, "constraint_matrix: sizes >= 1");
  SparseMatrix a(nx + ny, nx * ny);
  a.reserve(Eigen::VectorXi::Constant(nx * ny, 2));
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const Index k = i + j * nx;
      a.insert(i, k) = 1.0;
      a.insert(nx + j, k) = 1.0;
    }
  }
  a.makeCompressed();
  return a;
}

double plan_cost(const TransportPlan& plan, const CostMatrix& cost) {
  require(plan.rows() == cost.rows() && plan.cols() == cost.cols(), ErrorCode::DimensionMismatch,
          "plan_cost: shapes differ");
  double s = 0.0;
  for (Index j = 0; j < plan.cols(); ++j)
    for (Index i = 0; i < plan.rows(); ++i) s += plan(i, j) * cost(i, j);
  return s;
}

namespace {

// Northwest-corner spanning tree: N_x + N_y - 1 cells, feasible for any
// balanced marginals. Degenerate steps keep a zero cell so the tree stays a basis.
std::vector<Index> northwest_corner_basis(const Vector& mu, const Vector& nu) {
  const Index nx = mu.size();
  const Index ny = nu.size();
  std::vector<Index> cells;
  cells.reserve(static_cast<std::size_t>(nx + ny - 1));
  double row = mu[0];
  double col = nu[0];
  Index i = 0;
  Index j = 0;
  while (true) {
    cells.push_back(i + j * nx);
    if (i == nx - 1 && j == ny - 1) break;
    const double x = std::min(row, col);
    row -= x;
    col -= x;
    if ((row <= col && i < nx - 1) || j == ny - 1) {
      ++i;
      row = mu[i];
    } else {
      ++j;
      col = nu[j];
    }
  }
  return cells;
}

}  // namespace

OTSolution solve_lp(const CostMatrix& cost, const GridMeasure& mu, const GridMeasure& nu,
                    const SimplexOptions& opts) {
  const Index nx = cost.rows();
  const Index ny = cost.cols();
  require(mu.size() == nx && nu.size() == ny, ErrorCode::DimensionMismatch,
          "solve_lp: marginal sizes do not match the cost matrix");
  require(std::abs(mu.weights().sum() - nu.weights().sum()) <= 1e-10, ErrorCode::InvalidArgument,
          "solve_lp: marginals carry different mass");

  // Drop the last column-sum row; it is implied by the others.
  const Index m = nx + ny - 1;
  SparseMatrix a(m, nx * ny);
  a.reserve(Eigen::VectorXi::Constant(nx * ny, 2));
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const Index k = i + j * nx;
      a.insert(i, k) = 1.0;
      if (j < ny - 1) a.insert(nx + j, k) = 1.0;
    }
  }
  a.makeCompressed();

  SparseLP lp;
  lp.cost = vectorize(cost.entries());
  lp.constraint_matrix = std::move(a);
  lp.rhs.resize(m);
  lp.rhs.head(nx) = mu.weights();
  lp.rhs.tail(ny - 1) = nu.weights().head(ny - 1);

  SimplexOptions run_opts = opts;
  if (run_opts.initial_basis.empty())
    run_opts.initial_basis = northwest_corner_basis(mu.weights(), nu.weights());
  const LPSolution sol = solve(lp, run_opts);
  require(sol.status == LPStatus::Optimal, ErrorCode::SolverFailure,
          std::string("solve_lp: simplex returned ") + to_string(sol.status));

  OTSolution out;
  out.plan = unvectorize(sol.primal, nx, ny);
  out.duals.phi = sol.dual.head(nx);
  out.duals.psi = Vector::Zero(ny);
  out.duals.psi.head(ny - 1) = sol.dual.tail(ny - 1);
  out.cost = plan_cost(out.plan, cost);
  return out;
}

void write_plan_csv(std::ostream& out, const TransportPlan& plan) {
  CsvWriter w(out, {"i", "j", "mass"});
  for (Index i = 0; i < plan.rows(); ++i) {
    for (Index j = 0; j < plan.cols(); ++j) {
      if (plan(i, j) == 0.0) continue;
      w.cell(static_cast<long long>(i + 1)).cell(static_cast<long long>(j + 1)).cell(plan(i, j));
      w.end_row();
    }
  }
}

}  // namespace parot

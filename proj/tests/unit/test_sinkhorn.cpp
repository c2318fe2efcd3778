#include "oracles.hpp"
#include "parot/hf_ot.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace parot;

namespace {

// Grid cost built directly from coordinates, row-major flat indices.
Matrix dense_grid_cost(int bins, int dims) {
  Index n = 1;
  for (int a = 0; a < dims; ++a) n *= bins;
  Matrix c(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      double s = 0;
      Index ii = i, jj = j;
      for (int a = 0; a < dims; ++a) {
        const double d = static_cast<double>(ii % bins) - static_cast<double>(jj % bins);
        s += d * d;
        ii /= bins;
        jj /= bins;
      }
      c(i, j) = s;
    }
  return c;
}

}  // namespace

TEST_SUITE("sinkhorn") {

TEST_CASE("marginals converge in both regimes and costs approach the LP") {
  const MeasureFamily f = builtin_gaussian_family(40, 40);
  const CostMatrix c = quadratic_cost(f.support_x, f.support_y);
  const auto [mu, nu] = blend(f, Alpha((Vector(2) << 0.4, 0.6).finished(), (Vector(2) << 0.9, 0.1).finished()));
  const double exact = solve_lp(c, mu, nu).cost;
  double prev_gap = INFINITY;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    SinkhornOptions o;
    o.epsilon = eps;
    o.max_iters = 100000;
    o.tol = 1e-9;
    const SinkhornSolution s = solve_sinkhorn(c, mu, nu, o);
    CHECK(s.converged);
    CHECK((s.plan.rowwise().sum() - mu.weights()).lpNorm<1>() +
              (s.plan.colwise().sum().transpose() - nu.weights()).lpNorm<1>() <= 1e-8);
    CHECK(s.log_domain == (eps < 1e-2 * c.sup_norm()));
    const double gap = std::abs(s.cost - exact);
    CHECK(gap <= prev_gap + 1e-12);
    prev_gap = gap;
  }
  CHECK(prev_gap <= 1e-2);
}

TEST_CASE("scaling and log-domain agree") {
  const MeasureFamily f = builtin_gaussian_family(20, 15);
  const CostMatrix c = quadratic_cost(f.support_x, f.support_y);
  const auto [mu, nu] = blend(f, Alpha((Vector(2) << 0.5, 0.5).finished(), (Vector(2) << 0.2, 0.8).finished()));
  SinkhornOptions o;
  o.epsilon = 0.5;
  o.tol = 1e-12;
  const SinkhornSolution a = solve_sinkhorn(c, mu, nu, o);
  o.force_log = true;
  const SinkhornSolution b = solve_sinkhorn(c, mu, nu, o);
  CHECK_FALSE(a.log_domain);
  CHECK(b.log_domain);
  CHECK((a.plan - b.plan).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("budget exhaustion is reported, not thrown") {
  const MeasureFamily f = builtin_gaussian_family(30, 30);
  const CostMatrix c = quadratic_cost(f.support_x, f.support_y);
  const auto [mu, nu] = blend(f, Alpha((Vector(2) << 1, 0).finished(), (Vector(2) << 0, 1).finished()));
  SinkhornOptions o;
  o.epsilon = 1e-3;
  o.max_iters = 3;
  const SinkhornSolution s = solve_sinkhorn(c, mu, nu, o);
  CHECK_FALSE(s.converged);
  CHECK(s.iters == 3);
  CHECK(s.marginal_error > 0.0);
}

TEST_CASE("bad epsilon is rejected") {
  const CostMatrix c(Matrix::Ones(2, 2));
  SinkhornOptions o;
  o.epsilon = 0;
  CHECK_THROWS_AS(solve_sinkhorn(c, GridMeasure(Vector::Ones(2)), GridMeasure(Vector::Ones(2)), o), Error);
}

TEST_CASE("separable grid solver matches the dense solver") {
  std::mt19937_64 rng(4);
  for (int dims : {1, 2, 3}) {
    const int bins = dims == 3 ? 3 : 5;
    const Matrix cm = dense_grid_cost(bins, dims);
    const Index n = cm.rows();
    const GridMeasure mu(oracle::random_simplex(static_cast<int>(n), rng));
    const GridMeasure nu(oracle::random_simplex(static_cast<int>(n), rng));
    SinkhornOptions o;
    o.epsilon = 0.7;
    o.tol = 1e-12;
    o.force_log = true;
    const SinkhornSolution dense = solve_sinkhorn(CostMatrix(cm), mu, nu, o);
    const GridSinkhornSolution grid = solve_sinkhorn_grid(bins, dims, mu, nu, o);
    REQUIRE(grid.converged);
    const Matrix plan = oracle::dense_grid_plan(bins, dims, o.epsilon, grid.log_u, grid.log_v);
    CHECK((plan - dense.plan).lpNorm<Eigen::Infinity>() <= 1e-9);
    CHECK(std::abs(grid.cost - (plan.array() * cm.array()).sum()) <= 1e-10);
    const Matrix agg = oracle::dense_grid_aggregates(plan, bins, dims);
    CHECK((agg - grid.row_aggregates).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK(grid_cost_sup(bins, dims) == cm.maxCoeff());
  }
}

TEST_CASE("grid solver stays finite at small epsilon") {
  std::mt19937_64 rng(8);
  const int bins = 6;
  const GridMeasure mu(oracle::random_simplex(bins * bins * bins, rng));
  const GridMeasure nu(oracle::random_simplex(bins * bins * bins, rng));
  SinkhornOptions o;
  o.epsilon = 1e-2 * grid_cost_sup(bins, 3);
  const GridSinkhornSolution s = solve_sinkhorn_grid(bins, 3, mu, nu, o);
  CHECK(s.converged);
  CHECK(std::isfinite(s.cost));
  CHECK(s.row_aggregates.allFinite());
  CHECK((s.row_aggregates.col(3) - mu.weights()).lpNorm<1>() <= 1e-6);
}

}

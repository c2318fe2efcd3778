#include "oracles.hpp"
#include "parot/hf_ot.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace parot;

namespace {

Matrix random_cost(Index nx, Index ny, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  return Matrix::NullaryExpr(nx, ny, [&] { return u(rng); });
}

}  // namespace

TEST_SUITE("hf_ot") {

TEST_CASE("two-point example") {
  const CostMatrix c((Matrix(2, 2) << 0, 1, 1, 0).finished());
  const GridMeasure mu((Vector(2) << 0.5, 0.5).finished());
  const GridMeasure nu((Vector(2) << 1, 0).finished());
  const OTSolution s = solve_lp(c, mu, nu);
  CHECK(s.cost == doctest::Approx(0.5));
  CHECK(s.plan(0, 0) == doctest::Approx(0.5));
  CHECK(s.plan(1, 0) == doctest::Approx(0.5));
  CHECK(s.duals.objective(mu, nu) == doctest::Approx(0.5));
  CHECK(s.duals.psi[1] == 0.0);
}

TEST_CASE("vectorization is column stacking") {
  const Matrix p = (Matrix(2, 3) << 1, 2, 3, 4, 5, 6).finished();
  const Vector v = vectorize(p);
  CHECK(v[1] == 4);
  CHECK(v[2] == 2);
  CHECK(unvectorize(v, 2, 3) == p);
  const SparseMatrix a = constraint_matrix(2, 3);
  const Vector m = a * v;
  CHECK(m[0] == 6);    // row sums
  CHECK(m[1] == 15);
  CHECK(m[2] == 5);    // column sums
  CHECK(m[4] == 9);
}

TEST_CASE("cost matrix validation and quadratic cost") {
  CHECK_THROWS_AS(CostMatrix((Matrix(1, 2) << 1, -1).finished()), Error);
  CHECK_THROWS_AS(CostMatrix((Matrix(1, 1) << std::nan("")).finished()), Error);
  const CostMatrix q = quadratic_cost(uniform_line_support(4), uniform_line_support(4));
  CHECK(q(0, 3) == doctest::Approx(9.0 / 4));
  CHECK(q.sup_norm() == doctest::Approx(9.0 / 4));
}

TEST_CASE("plan is feasible and duals certify optimality") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 30; ++t) {
    const Index nx = 3 + t % 6, ny = 2 + t % 5;
    const CostMatrix c(random_cost(nx, ny, rng));
    const GridMeasure mu(oracle::random_simplex(static_cast<int>(nx), rng));
    const GridMeasure nu(oracle::random_simplex(static_cast<int>(ny), rng));
    const OTSolution s = solve_lp(c, mu, nu);
    CHECK(s.plan.minCoeff() >= -1e-12);
    CHECK((s.plan.rowwise().sum() - mu.weights()).lpNorm<Eigen::Infinity>() <= 1e-10);
    CHECK((s.plan.colwise().sum().transpose() - nu.weights()).lpNorm<Eigen::Infinity>() <= 1e-10);
    const Matrix slack = c.entries() - s.duals.phi.replicate(1, ny) - s.duals.psi.transpose().replicate(nx, 1);
    CHECK(slack.minCoeff() >= -1e-10);
    CHECK(std::abs(s.duals.objective(mu, nu) - s.cost) <= 1e-10);
    CHECK(s.cost == doctest::Approx(plan_cost(s.plan, c)));
  }
}

TEST_CASE("integral margins match the integer table minimum") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 30; ++t) {
    const int nx = 2 + t % 3, ny = 2 + (t / 3) % 3;
    const Matrix cm = random_cost(nx, ny, rng);
    std::vector<int> r(nx, 0), c(ny, 0);
    for (int q = 0; q < 4; ++q) {
      ++r[rng() % nx];
      ++c[rng() % ny];
    }
    Vector mu(nx), nu(ny);
    for (int i = 0; i < nx; ++i) mu[i] = r[i];
    for (int j = 0; j < ny; ++j) nu[j] = c[j];
    const OTSolution s = solve_lp(CostMatrix(cm), GridMeasure(mu), GridMeasure(nu));
    CHECK(std::abs(s.cost - oracle::integer_plan_minimum(cm, r, c)) <= 1e-9);
  }
}

TEST_CASE("1D quadratic cost equals the monotone coupling") {
  const MeasureFamily f = builtin_gaussian_family(30, 25);
  const CostMatrix c = quadratic_cost(f.support_x, f.support_y);
  const auto [mu, nu] = blend(f, Alpha((Vector(2) << 0.2, 0.8).finished(), (Vector(2) << 0.7, 0.3).finished()));
  const OTSolution s = solve_lp(c, mu, nu);
  const double want = oracle::monotone_coupling_cost(f.support_x.col(0), mu.weights(), f.support_y.col(0), nu.weights());
  CHECK(std::abs(s.cost - want) <= 1e-10);
}

TEST_CASE("mismatched sizes are rejected") {
  const CostMatrix c(Matrix::Ones(2, 3));
  CHECK_THROWS_AS(solve_lp(c, GridMeasure(Vector::Ones(3)), GridMeasure(Vector::Ones(3))), Error);
}

TEST_CASE("plan csv is row-major and 1-based") {
  std::ostringstream out;
  write_plan_csv(out, (Matrix(2, 2) << 0, 0.25, 0.75, 0).finished());
  CHECK(out.str() == "i,j,mass\n1,2,0.25\n2,1,0.75\n");
}


TEST_CASE("anti-diagonal 2x2 moves all mass at unit cost") {
  // Feasible plans here form a single point, so brute force is that plan.
  const CostMatrix c((Matrix(2, 2) << 0, 1, 1, 0).finished());
  const OTSolution s = solve_lp(c, GridMeasure((Vector(2) << 1, 0).finished()), GridMeasure((Vector(2) << 0, 1).finished()));
  CHECK(s.cost == doctest::Approx(1.0));
  CHECK(s.plan(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("quadratic cost spot check on the uniform grid") {
  const Matrix x = uniform_line_support(100);
  const CostMatrix c = quadratic_cost(x, x);
  const double x1 = -1.0 + 2.0 / 100, y100 = 1.0;
  CHECK(c(0, 99) == doctest::Approx((y100 - x1) * (y100 - x1)).epsilon(1e-15));
}

TEST_CASE("constraint matrix on a random 3x4 plan") {
  std::mt19937_64 rng(31);
  const Matrix p = random_cost(3, 4, rng);
  const Vector m = constraint_matrix(3, 4) * vectorize(p);
  for (Index i = 0; i < 3; ++i) {
    double s = 0;
    for (Index j = 0; j < 4; ++j) s += p(i, j);
    CHECK(m[i] == doctest::Approx(s).epsilon(1e-15));
  }
  for (Index j = 0; j < 4; ++j) {
    double s = 0;
    for (Index i = 0; i < 3; ++i) s += p(i, j);
    CHECK(m[3 + j] == doctest::Approx(s).epsilon(1e-15));
  }
}

TEST_CASE("plan cost matches a reordered summation") {
  std::mt19937_64 rng(32);
  const Matrix p = random_cost(3, 3, rng);
  const CostMatrix c(random_cost(3, 3, rng));
  double s = 0;
  for (Index i = 2; i >= 0; --i)
    for (Index j = 2; j >= 0; --j) s += c(i, j) * p(i, j);
  CHECK(plan_cost(p, c) == doctest::Approx(s).epsilon(1e-15));
}

TEST_CASE("entropic cost on a 2x2 instance is close to the LP") {
  const CostMatrix c((Matrix(2, 2) << 0, 1, 1, 0).finished());
  const GridMeasure mu((Vector(2) << 0.7, 0.3).finished());
  const GridMeasure nu((Vector(2) << 0.4, 0.6).finished());
  SinkhornOptions o;
  o.epsilon = 0.01;
  const double lp = solve_lp(c, mu, nu).cost;
  CHECK(std::abs(solve_sinkhorn(c, mu, nu, o).cost - lp) <= 0.05 * lp);
}

}

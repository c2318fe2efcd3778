#include "oracles.hpp"
#include "parot/reduction.hpp"

#include <doctest.h>

#include <Eigen/QR>
#include <Eigen/SVD>

#include <random>

using namespace parot;

namespace {

struct Setup {
  MeasureFamily family = builtin_gaussian_family(30, 30);
  CostMatrix cost = quadratic_cost(family.support_x, family.support_y);
};

}  // namespace

TEST_SUITE("reduction") {

TEST_CASE("gram-schmidt is orthogonal, keeps the first vector and detects dependence") {
  std::mt19937_64 rng(1);
  std::vector<Vector> v;
  for (int k = 0; k < 4; ++k) v.push_back(oracle::random_simplex(10, rng));
  const auto q = gram_schmidt(v);
  CHECK(q[0] == v[0]);
  for (std::size_t a = 0; a < q.size(); ++a)
    for (std::size_t b = a + 1; b < q.size(); ++b)
      CHECK(std::abs(q[a].dot(q[b])) <= 1e-14 * q[a].norm() * q[b].norm());
  v.push_back(v[0] + v[1]);
  try {
    gram_schmidt(v);
    FAIL("expected LinearDependence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LinearDependence);
  }
}

TEST_CASE("dual bases span the members, ones mode adds a column") {
  const Setup s;
  const auto [u, v] = dual_bases(s.family);
  CHECK(u.cols() == 2);
  const Matrix m = s.family.mu_matrix();
  // Upper triangular with nonzero diagonal, and the members lie in the span.
  const Matrix t = u.transpose() * m;
  CHECK(std::abs(t(1, 0)) <= 1e-14 * m.norm() * u.norm());
  CHECK(t(0, 0) != 0.0);
  CHECK(t(1, 1) != 0.0);
  const Matrix coef = u.colPivHouseholderQr().solve(m);
  CHECK((u * coef - m).norm() <= 1e-12);
  const auto [u1, v1] = dual_bases(s.family, BasisMode::OnesAugmented);
  CHECK(u1.cols() == 3);
  CHECK(v1.cols() == 3);
  CHECK(u1.col(2) == Vector::Ones(s.family.nx()));
}

TEST_CASE("offline build requires every extreme point") {
  const Setup s;
  std::vector<Alpha> train = training_grid(2, 2, 3);
  train.erase(train.begin());
  try {
    build_offline(s.family, train, lp_snapshot_solver(s.cost));
    FAIL("expected MissingExtremePoints");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingExtremePoints);
  }
}

TEST_CASE("reduced solve at a snapshot parameter reproduces the snapshot") {
  const Setup s;
  const ReducedModel m = build_offline(s.family, training_grid(2, 2, 3), lp_snapshot_solver(s.cost));
  CHECK(m.R() == 9);
  CHECK(m.A_hat.rows() == m.N() + m.M());
  for (Index r = 0; r < m.R(); ++r) {
    const ReducedSolution sol = solve_reduced(m, m.snapshot_alphas[r]);
    REQUIRE(sol.status == LPStatus::Optimal);
    CHECK(sol.I_R <= m.reduced_cost[r] + 1e-10);
    const auto [mu, nu] = blend(s.family, m.snapshot_alphas[r]);
    CHECK(std::abs(sol.I_R - solve_lp(s.cost, mu, nu).cost) <= 1e-9);
  }
}

TEST_CASE("reduced solution is primal and dual consistent") {
  const Setup s;
  const ReducedModel m = build_offline(s.family, training_grid(2, 2, 4), lp_snapshot_solver(s.cost));
  std::mt19937_64 rng(6);
  for (int t = 0; t < 25; ++t) {
    const Alpha a = random_alpha(2, 2, rng);
    const ReducedSolution sol = solve_reduced(m, a);
    REQUIRE(sol.status == LPStatus::Optimal);
    CHECK(sol.p.minCoeff() >= -1e-12);
    CHECK(std::abs(sol.p.sum() - 1.0) <= 1e-9);
    CHECK((m.A_hat * sol.p - reduced_rhs(m, a)).lpNorm<Eigen::Infinity>() <= 1e-9);
    const Vector dual = (Vector(m.N() + m.M()) << sol.a, sol.b).finished();
    CHECK(std::abs(dual.dot(reduced_rhs(m, a)) - sol.I_R) <= 1e-9);
    CHECK((m.reduced_cost - m.A_hat.transpose() * dual).minCoeff() >= -1e-9);
    const auto [mu, nu] = blend(s.family, a);
    CHECK(sol.I_R >= solve_lp(s.cost, mu, nu).cost - 1e-9);
  }
}

TEST_CASE("reduced rhs equals the projected blended marginals") {
  const Setup s;
  const ReducedModel m = build_offline(s.family, training_grid(2, 2, 2), lp_snapshot_solver(s.cost));
  const Alpha a((Vector(2) << 0.3, 0.7).finished(), (Vector(2) << 0.6, 0.4).finished());
  const auto [mu, nu] = blend(s.family, a);
  const Vector want = (Vector(m.N() + m.M()) << m.U_hat.transpose() * mu.weights(),
                       m.V_hat.transpose() * nu.weights()).finished();
  CHECK((reduced_rhs(m, a) - want).lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("online operation count does not scale with the grid size") {
  std::vector<std::uint64_t> counts;
  for (Index n : {20, 80}) {
    const MeasureFamily f = builtin_gaussian_family(n, n);
    const CostMatrix c = quadratic_cost(f.support_x, f.support_y);
    const ReducedModel m = build_offline(f, training_grid(2, 2, 2), lp_snapshot_solver(c));
    OpCounter ops;
    solve_reduced(m, Alpha((Vector(2) << 0.5, 0.5).finished(), (Vector(2) << 0.5, 0.5).finished()), &ops);
    counts.push_back(ops.ops);
  }
  // Only the pivot sequence may differ; a 4x larger plan must not show up.
  CHECK(counts[1] <= 2 * counts[0]);
}

TEST_CASE("semi-reduced and reduced values coincide with spanning bases") {
  const Setup s;
  const ReducedModel m = build_offline(s.family, training_grid(2, 2, 3), lp_snapshot_solver(s.cost));
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    const Alpha a = random_alpha(2, 2, rng);
    const SemiReducedSolution semi = solve_semi_reduced(m, s.family, a);
    const ReducedSolution red = solve_reduced(m, a);
    REQUIRE(semi.status == LPStatus::Optimal);
    const auto [mu, nu] = blend(s.family, a);
    CHECK(std::abs(semi.I_RP - red.I_R) <= 1e-8 * (1 + std::abs(semi.I_RP)));
    CHECK(semi.I_RP >= solve_lp(s.cost, mu, nu).cost - 1e-9);
  }
}

TEST_CASE("plan aggregates use 1-based targets") {
  const Matrix p = (Matrix(2, 3) << 0.1, 0, 0.2, 0, 0.7, 0).finished();
  const Matrix a = plan_aggregates(p);
  CHECK(a(0, 0) == doctest::Approx(0.7));
  CHECK(a(0, 1) == doctest::Approx(0.3));
  CHECK(a(1, 0) == doctest::Approx(1.4));
}


TEST_CASE("corner snapshots carry the full-problem costs") {
  const Setup s;
  const ReducedModel m = build_offline(s.family, extreme_points(2, 2), lp_snapshot_solver(s.cost));
  REQUIRE(m.R() == 4);
  for (Index r = 0; r < 4; ++r) {
    const auto [mu, nu] = blend(s.family, m.snapshot_alphas[r]);
    CHECK(m.reduced_cost[r] == doctest::Approx(solve_lp(s.cost, mu, nu).cost).epsilon(1e-12));
  }
  // Hand-assembled block product.
  REQUIRE(m.A_hat.rows() == 4);
  REQUIRE(m.A_hat.cols() == 4);
  for (Index r = 0; r < 4; ++r) {
    const auto [mu, nu] = blend(s.family, m.snapshot_alphas[r]);
    for (Index q = 0; q < 2; ++q) {
      double a = 0, b = 0;
      for (Index i = 0; i < s.family.nx(); ++i) a += m.U_hat(i, q) * mu[i];
      for (Index j = 0; j < s.family.ny(); ++j) b += m.V_hat(j, q) * nu[j];
      CHECK(m.A_hat(q, r) == doctest::Approx(a).epsilon(1e-12));
      CHECK(m.A_hat(2 + q, r) == doctest::Approx(b).epsilon(1e-12));
    }
  }
}

TEST_CASE("projection keeps the rank of the snapshot marginals") {
  const Setup s;
  const ReducedModel m = build_offline(s.family, training_grid(2, 2, 4), lp_snapshot_solver(s.cost));
  auto rank = [](const Matrix& a) {
    const Vector sv = Eigen::JacobiSVD<Matrix>(a).singularValues();
    Index r = 0;
    for (Index k = 0; k < sv.size(); ++k)
      if (sv[k] > 1e-9 * sv[0]) ++r;
    return r;
  };
  const Matrix ax = m.stacked_marginals.topRows(m.nx);
  CHECK(rank(ax) == 2);
  CHECK(rank(m.U_hat.transpose() * ax) == 2);
}

TEST_CASE("ones-augmented bases keep the coefficients bounded") {
  const Setup s;
  const ReducedModel m =
      build_offline(s.family, training_grid(2, 2, 3), lp_snapshot_solver(s.cost), BasisMode::OnesAugmented);
  CHECK(m.N() == 3);
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const ReducedSolution sol = solve_reduced(m, random_alpha(2, 2, rng));
    REQUIRE(sol.status == LPStatus::Optimal);
    CHECK(std::abs(sol.p.sum() - 1.0) <= 1e-9);
    CHECK(sol.p.lpNorm<1>() <= 1.0 + 1e-9);
  }
}

TEST_CASE("finer training sets lower the mean error") {
  const Setup s;
  const ReducedModel coarse = build_offline(s.family, training_grid(2, 2, 2), lp_snapshot_solver(s.cost));
  const ReducedModel fine = build_offline(s.family, training_grid(2, 2, 20), lp_snapshot_solver(s.cost));
  CHECK(fine.R() == 400);
  std::mt19937_64 rng(0);
  double e_coarse = 0, e_fine = 0;
  for (int t = 0; t < 20; ++t) {
    const Alpha a = random_alpha(2, 2, rng);
    const auto [mu, nu] = blend(s.family, a);
    const double hf = solve_lp(s.cost, mu, nu).cost;
    e_coarse += solve_reduced(coarse, a).I_R - hf;
    e_fine += solve_reduced(fine, a).I_R - hf;
  }
  CHECK(e_fine < e_coarse);
}

}

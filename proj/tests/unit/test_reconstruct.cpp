#include "oracles.hpp"
#include "parot/reconstruct.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace parot;

TEST_SUITE("reconstruct") {

TEST_CASE("snapped floor") {
  CHECK(snapped_floor(2.0) == 2);
  CHECK(snapped_floor(2.7) == 2);
  CHECK(snapped_floor(3.0 - 1e-12) == 3);
  CHECK(snapped_floor(3.0 - 1e-6) == 2);
  CHECK(snapped_floor(-0.5) == -1);
}

TEST_CASE("identity plan maps to identity") {
  const IndexMap m = map_from_plan(Matrix::Identity(5, 5) / 5.0);
  for (Index i = 0; i < 5; ++i) CHECK(m[i] == i + 1);
}

TEST_CASE("split mass floors the barycenter") {
  // Row 0 sends equal mass to targets 1 and 2: mean 1.5 -> 1.
  const Matrix p = (Matrix(2, 3) << 0.25, 0.25, 0, 0, 0, 0.5).finished();
  const IndexMap m = map_from_plan(p);
  CHECK(m[0] == 1);
  CHECK(m[1] == 3);
}

TEST_CASE("empty rows fall back to the clamped identity") {
  const Matrix p = (Matrix(4, 2) << 0.5, 0, 0, 0, 0, 0.5, 0, 0).finished();
  const IndexMap m = map_from_plan(p);
  CHECK(m[1] == 2);
  CHECK(m[3] == 2);
}

TEST_CASE("map from random plans agrees with the mean-index oracle") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 50; ++t) {
    const Index nx = 1 + rng() % 12, ny = 1 + rng() % 12;
    Matrix p = Matrix::NullaryExpr(nx, ny, [&] { return u(rng) < 0.6 ? 0.0 : u(rng); });
    const IndexMap m = map_from_plan(p);
    for (Index i = 0; i < nx; ++i) {
      double w = 0, mass = 0;
      for (Index j = 0; j < ny; ++j) {
        w += p(i, j) * static_cast<double>(j + 1);
        mass += p(i, j);
      }
      const Index want = mass > 0 ? std::clamp<Index>(oracle::mean_index(w, mass), 1, ny) : std::min(i + 1, ny);
      CHECK(m[i] == want);
      CHECK(m[i] >= 1);
      CHECK(m[i] <= ny);
    }
  }
}

TEST_CASE("3D aggregates floor per axis and flatten row-major") {
  // One source row, mean target coordinates (2.5, 1, 3) on a 3-bin grid.
  Matrix agg(1, 4);
  agg << 2.5, 1.0, 3.0, 1.0;
  const IndexMap m = map_from_aggregates(agg, 3, 3);
  CHECK(m[0] == ((2 - 1) * 3 + (1 - 1)) * 3 + (3 - 1) + 1);
  CHECK_THROWS_AS(map_from_aggregates(agg, 3, 2), Error);
}

TEST_CASE("reduced map at a unit vector equals the snapshot map") {
  const MeasureFamily f = builtin_gaussian_family(20, 20);
  const CostMatrix c = quadratic_cost(f.support_x, f.support_y);
  ReducedModel model = build_offline(f, training_grid(2, 2, 3), lp_snapshot_solver(c));
  REQUIRE(model.has_aggregates());
  for (Index r = 0; r < model.R(); ++r) {
    const auto [mu, nu] = blend(f, model.snapshot_alphas[r]);
    const IndexMap want = map_from_plan(solve_lp(c, mu, nu).plan);
    const IndexMap got = map_from_reduced(model, Vector::Unit(model.R(), r));
    CHECK(got.targets == want.targets);
  }
}

TEST_CASE("map csv") {
  std::ostringstream out;
  write_map_csv(out, IndexMap{{2, 1}});
  CHECK(out.str() == "source_index,target_index\n1,2\n2,1\n");
}


TEST_CASE("reduced map of a mixture equals the map of the dense mixed plan") {
  const MeasureFamily f = builtin_gaussian_family(15, 15);
  const CostMatrix c = quadratic_cost(f.support_x, f.support_y);
  const ReducedModel model = build_offline(f, training_grid(2, 2, 3), lp_snapshot_solver(c));
  std::vector<Matrix> plans;
  for (const Alpha& a : model.snapshot_alphas) {
    const auto [mu, nu] = blend(f, a);
    plans.push_back(solve_lp(c, mu, nu).plan);
  }
  std::mt19937_64 rng(19);
  for (int t = 0; t < 10; ++t) {
    const Alpha a = random_alpha(2, 2, rng);
    const ReducedSolution sol = solve_reduced(model, a);
    Matrix dense = Matrix::Zero(15, 15);
    for (Index r = 0; r < model.R(); ++r) dense += sol.p[r] * plans[static_cast<std::size_t>(r)];
    CHECK(map_from_reduced(model, sol.p).targets == map_from_plan(dense).targets);
  }
}

}

#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the simplex engine or the reduced model.

#include "parot/common.hpp"

#include <functional>
#include <random>
#include <vector>

namespace oracle {

using parot::Index;
using parot::Matrix;
using parot::Vector;

/// Minimum of sum C_ij x_ij / total over nonnegative integer tables x with the
/// given row and column sums (both summing to `total`). For integral margins
/// every vertex of the transportation polytope is integral, so this equals
/// the LP optimum.
double integer_plan_minimum(const Matrix& cost, const std::vector<int>& rows,
                            const std::vector<int>& cols);

/// All compositions of `total` into `parts` nonnegative integers.
std::vector<std::vector<int>> compositions(int total, int parts);

/// Minimum of <c, x> over basic feasible solutions of A x = b, x >= 0, found by
/// trying every column subset of size rank(A). Returns +inf when infeasible.
double vertex_enumeration(const Matrix& a, const Vector& b, const Vector& c);

/// Cost of the monotone (quantile) coupling of two 1D measures on sorted
/// supports, for the cost (y - x)^2.
double monotone_coupling_cost(const Vector& x, const Vector& mu, const Vector& y, const Vector& nu);

/// Dense plan of the separable grid Sinkhorn solution, built entry by entry.
Matrix dense_grid_plan(int bins, int dims, double eps, const Vector& log_u, const Vector& log_v);

/// Row aggregates (per-axis coordinate sums, then mass) of a dense grid plan.
Matrix dense_grid_aggregates(const Matrix& plan, int bins, int dims);

/// floor(mean) with the same 1e-9 snap used by the map extraction, written out
/// independently.
Index mean_index(double weighted, double mass);

Vector random_simplex(int k, std::mt19937_64& rng);

}  // namespace oracle

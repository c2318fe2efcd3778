#pragma once

#include "parot/common.hpp"

#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace parot {

/// Probability vector over a fixed finite support.
///
/// Construction rejects negative or all-zero input and divides by the sum once,
/// so the stored weights sum to one up to round-off.
class GridMeasure {
 public:
  GridMeasure() = default;
  explicit GridMeasure(Vector weights);

  /// Stores already-normalized weights bit for bit (used when reloading).
  /// Requires |sum - 1| <= 1e-12.
  static GridMeasure from_normalized(Vector weights);

  const Vector& weights() const { return weights_; }
  Index size() const { return weights_.size(); }
  double operator[](Index i) const { return weights_[i]; }

 private:
  Vector weights_;
};

/// A point (alpha_x, alpha_y) of the product of two probability simplices.
class Alpha {
 public:
  Alpha() = default;
  Alpha(Vector x, Vector y);

  const Vector& x() const { return x_; }
  const Vector& y() const { return y_; }
  Index kx() const { return x_.size(); }
  Index ky() const { return y_.size(); }

  /// Concatenation (alpha_x; alpha_y).
  Vector stacked() const;

 private:
  Vector x_;
  Vector y_;
};

/// Sup-norm distance between two parameters over the concatenated blocks.
double alpha_distance(const Alpha& a, const Alpha& b);

struct MeasureFamily {
  std::vector<GridMeasure> mus;
  std::vector<GridMeasure> nus;
  Matrix support_x;  // N_x rows, one point per row
  Matrix support_y;  // N_y rows

  Index kx() const { return static_cast<Index>(mus.size()); }
  Index ky() const { return static_cast<Index>(nus.size()); }
  Index nx() const { return support_x.rows(); }
  Index ny() const { return support_y.rows(); }

  /// Throws DimensionMismatch / InvalidArgument when the members disagree.
  void validate() const;

  /// Columns are the members, in order.
  Matrix mu_matrix() const;
  Matrix nu_matrix() const;
};

/// mu(alpha) = sum_k alpha_x[k] mu_k and nu(alpha) = sum_l alpha_y[l] nu_l.
std::pair<GridMeasure, GridMeasure> blend(const MeasureFamily& family, const Alpha& alpha);

/// The K_x * K_y corners (e_k, f_l), k-major.
std::vector<Alpha> extreme_points(int kx, int ky);

/// Regular lattice {m / (resolution - 1)} on each simplex block, product over
/// blocks. Always contains the extreme points.
std::vector<Alpha> training_grid(int kx, int ky, int resolution);

/// K iid uniforms normalized to sum one, independently per block.
Alpha random_alpha(int kx, int ky, std::mt19937_64& rng);

bool contains_alpha(const std::vector<Alpha>& set, const Alpha& a, double tol = 1e-12);

/// Nodes -1 + 2 i / n for i = 1..n, as an n x 1 support.
Matrix uniform_line_support(Index n);

struct GaussianSpec {
  double mean;
  double sigma;
};

/// Normalized discrete Gaussian weights over a 1D support.
GridMeasure discrete_gaussian(const Matrix& support, GaussianSpec g);

/// Two-member Gaussian families on uniform grids: means -1/2 and +1/2, sigma 1/2.
MeasureFamily builtin_gaussian_family(Index nx = 100, Index ny = 100);

/// Reads one side of a family from CSV. Columns named `mu_*` or `nu_*` are
/// members; columns named `x`, `x1`, `x2`... are support coordinates. Without
/// coordinate columns the support defaults to uniform_line_support.
struct FamilySide {
  std::vector<GridMeasure> members;
  Matrix support;
};
FamilySide read_family_csv(std::istream& in);
FamilySide read_family_csv_file(const std::string& path);

}  // namespace parot

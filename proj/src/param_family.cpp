#include "parot/param_family.hpp"

#include "parot/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace parot {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::MissingExtremePoints: return "missing extreme points";
    case ErrorCode::LinearDependence: return "linear dependence";
    case ErrorCode::NumericalBreakdown: return "numerical breakdown";
    case ErrorCode::SolverFailure: return "solver failure";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::Format: return "format error";
  }
  return "unknown";
}

GridMeasure::GridMeasure(Vector weights) : weights_(std::move(weights)) {
  require(weights_.size() > 0, ErrorCode::InvalidArgument, "GridMeasure: empty weight vector");
  for (Index i = 0; i < weights_.size(); ++i) {
    require(std::isfinite(weights_[i]) && weights_[i] >= 0.0, ErrorCode::InvalidArgument,
            "GridMeasure: weights must be finite and nonnegative");
  }
  const double total = weights_.sum();
  require(total > 0.0, ErrorCode::InvalidArgument, "GridMeasure: weights sum to zero");
  weights_ /= total;
}

GridMeasure GridMeasure::from_normalized(Vector weights) {
  GridMeasure m;
  for (Index i = 0; i < weights.size(); ++i)
    require(std::isfinite(weights[i]) && weights[i] >= 0.0, ErrorCode::InvalidArgument,
            "GridMeasure: weights must be finite and nonnegative");
  require(weights.size() > 0 && std::abs(weights.sum() - 1.0) <= 1e-12, ErrorCode::InvalidArgument,
          "GridMeasure: weights are not normalized");
  m.weights_ = std::move(weights);
  return m;
}

namespace {

void check_simplex(const Vector& v, const char* block) {
  require(v.size() >= 1, ErrorCode::InvalidArgument, std::string("Alpha: empty block ") + block);
  for (Index i = 0; i < v.size(); ++i) {
    require(std::isfinite(v[i]) && v[i] >= 0.0, ErrorCode::InvalidArgument,
            std::string("Alpha: negative entry in block ") + block);
  }
  require(std::abs(v.sum() - 1.0) <= 1e-12, ErrorCode::InvalidArgument,
          std::string("Alpha: block ") + block + " does not sum to one");
}

}  // namespace

Alpha::Alpha(Vector x, Vector y) : x_(std::move(x)), y_(std::move(y)) {
  check_simplex(x_, "x");
  check_simplex(y_, "y");
}

Vector Alpha::stacked() const {
  Vector out(x_.size() + y_.size());
  out << x_, y_;
  return out;
}

double alpha_distance(const Alpha& a, const Alpha& b) {
  require(a.kx() == b.kx() && a.ky() == b.ky(), ErrorCode::DimensionMismatch,
          "alpha_distance: block sizes differ");
  return std::max((a.x() - b.x()).lpNorm<Eigen::Infinity>(),
                  (a.y() - b.y()).lpNorm<Eigen::Infinity>());
}

void MeasureFamily::validate() const {
  require(!mus.empty() && !nus.empty(), ErrorCode::InvalidArgument,
          "MeasureFamily: need at least one member per side");
  for (const auto& m : mus)
    require(m.size() == nx(), ErrorCode::DimensionMismatch,
            "MeasureFamily: mu member size differs from support_x");
  for (const auto& n : nus)
    require(n.size() == ny(), ErrorCode::DimensionMismatch,
            "MeasureFamily: nu member size differs from support_y");
}

Matrix MeasureFamily::mu_matrix() const {
  Matrix out(nx(), kx());
  for (Index k = 0; k < kx(); ++k) out.col(k) = mus[k].weights();
  return out;
}

Matrix MeasureFamily::nu_matrix() const {
  Matrix out(ny(), ky());
  for (Index l = 0; l < ky(); ++l) out.col(l) = nus[l].weights();
  return out;
}

std::pair<GridMeasure, GridMeasure> blend(const MeasureFamily& family, const Alpha& alpha) {
  require(alpha.kx() == family.kx() && alpha.ky() == family.ky(), ErrorCode::DimensionMismatch,
          "blend: alpha has " + std::to_string(alpha.kx()) + "+" + std::to_string(alpha.ky()) +
              " weights, family has " + std::to_string(family.kx()) + "+" +
              std::to_string(family.ky()) + " members");
  Vector mu = Vector::Zero(family.nx());
  for (Index k = 0; k < family.kx(); ++k) mu += alpha.x()[k] * family.mus[k].weights();
  Vector nu = Vector::Zero(family.ny());
  for (Index l = 0; l < family.ky(); ++l) nu += alpha.y()[l] * family.nus[l].weights();
  return {GridMeasure(std::move(mu)), GridMeasure(std::move(nu))};
}

std::vector<Alpha> extreme_points(int kx, int ky) {
  require(kx >= 1 && ky >= 1, ErrorCode::InvalidArgument, "extreme_points: K_x, K_y >= 1");
  std::vector<Alpha> out;
  out.reserve(static_cast<std::size_t>(kx) * ky);
  for (int k = 0; k < kx; ++k) {
    for (int l = 0; l < ky; ++l) {
      out.emplace_back(Vector::Unit(kx, k), Vector::Unit(ky, l));
    }
  }
  return out;
}

namespace {

// Nonnegative integer compositions of `total` into `parts` parts, ordered so
// that for two parts the second entry increases.
void compositions(int parts, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int first = total; first >= 0; --first) {
    cur.push_back(first);
    compositions(parts - 1, total - first, cur, out);
    cur.pop_back();
  }
}

std::vector<Vector> simplex_lattice(int k, int resolution) {
  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  compositions(k, resolution - 1, cur, comps);
  std::vector<Vector> out;
  out.reserve(comps.size());
  const double denom = resolution - 1;
  for (const auto& c : comps) {
    Vector v(k);
    // Last entry is one minus the rest so every block sums to one.
    double rest = 0.0;
    for (int i = 0; i + 1 < k; ++i) {
      v[i] = c[i] / denom;
      rest += v[i];
    }
    v[k - 1] = std::max(0.0, 1.0 - rest);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::vector<Alpha> training_grid(int kx, int ky, int resolution) {
  require(kx >= 1 && ky >= 1, ErrorCode::InvalidArgument, "training_grid: K_x, K_y >= 1");
  require(resolution >= 2, ErrorCode::InvalidArgument, "training_grid: resolution >= 2");
  const auto xs = simplex_lattice(kx, resolution);
  const auto ys = simplex_lattice(ky, resolution);
  std::vector<Alpha> out;
  out.reserve(xs.size() * ys.size());
  for (const auto& x : xs)
    for (const auto& y : ys) out.emplace_back(x, y);
  return out;
}

namespace {

Vector random_simplex_point(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector v(k);
  for (int i = 0; i < k; ++i) v[i] = unif(rng);
  double s = v.sum();
  if (s <= 0.0) {
    v.setConstant(1.0);
    s = k;
  }
  v /= s;
  // Absorb the rounding residue in the largest entry.
  Index imax = 0;
  v.maxCoeff(&imax);
  v[imax] += 1.0 - v.sum();
  return v;
}

}  // namespace

Alpha random_alpha(int kx, int ky, std::mt19937_64& rng) {
  Vector x = random_simplex_point(kx, rng);
  Vector y = random_simplex_point(ky, rng);
  return Alpha(std::move(x), std::move(y));
}

bool contains_alpha(const std::vector<Alpha>& set, const Alpha& a, double tol) {
  for (const auto& s : set) {
    if (s.kx() == a.kx() && s.ky() == a.ky() && alpha_distance(s, a) <= tol) return true;
  }
  return false;
}

Matrix uniform_line_support(Index n) {
  Matrix pts(n, 1);
  for (Index i = 1; i <= n; ++i) pts(i - 1, 0) = -1.0 + 2.0 * static_cast<double>(i) / n;
  return pts;
}

GridMeasure discrete_gaussian(const Matrix& support, GaussianSpec g) {
  require(support.cols() == 1, ErrorCode::DimensionMismatch, "discrete_gaussian: 1D support");
  Vector w(support.rows());
  for (Index i = 0; i < support.rows(); ++i) {
    const double d = support(i, 0) - g.mean;
    w[i] = std::exp(-d * d / (2.0 * g.sigma * g.sigma));
  }
  return GridMeasure(std::move(w));
}

MeasureFamily builtin_gaussian_family(Index nx, Index ny) {
  MeasureFamily f;
  f.support_x = uniform_line_support(nx);
  f.support_y = uniform_line_support(ny);
  f.mus = {discrete_gaussian(f.support_x, {-0.5, 0.5}), discrete_gaussian(f.support_x, {0.5, 0.5})};
  f.nus = {discrete_gaussian(f.support_y, {-0.5, 0.5}), discrete_gaussian(f.support_y, {0.5, 0.5})};
  return f;
}

FamilySide read_family_csv(std::istream& in) {
  const CsvTable table = read_csv(in);
  std::vector<Index> member_cols;
  std::vector<Index> coord_cols;
  for (Index c = 0; c < static_cast<Index>(table.header.size()); ++c) {
    const std::string& h = table.header[c];
    if (h.rfind("mu_", 0) == 0 || h.rfind("nu_", 0) == 0) {
      member_cols.push_back(c);
    } else if (h == "x" || (h.size() > 1 && h[0] == 'x' &&
                            h.find_first_not_of("0123456789", 1) == std::string::npos)) {
      coord_cols.push_back(c);
    } else {
      throw Error(ErrorCode::Format, "family csv: unexpected column '" + h + "'");
    }
  }
  require(!member_cols.empty(), ErrorCode::Format, "family csv: no mu_*/nu_* columns");
  const Index n = static_cast<Index>(table.rows.size());
  require(n > 0, ErrorCode::Format, "family csv: no data rows");

  FamilySide side;
  for (Index c : member_cols) {
    Vector w(n);
    for (Index r = 0; r < n; ++r) w[r] = table.rows[r][c];
    side.members.emplace_back(std::move(w));
  }
  if (coord_cols.empty()) {
    side.support = uniform_line_support(n);
  } else {
    side.support.resize(n, static_cast<Index>(coord_cols.size()));
    for (Index r = 0; r < n; ++r)
      for (Index d = 0; d < static_cast<Index>(coord_cols.size()); ++d)
        side.support(r, d) = table.rows[r][coord_cols[d]];
  }
  return side;
}

FamilySide read_family_csv_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open family csv '" + path + "'");
  return read_family_csv(in);
}

}  // namespace parot

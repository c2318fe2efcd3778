#include "parot/colorxfer.hpp"

#include "parot/csv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace parot {

ImageRGB::ImageRGB(int w, int h) : width(w), height(h) {
  require(w >= 0 && h >= 0, ErrorCode::InvalidArgument, "ImageRGB: negative size");
  pixels.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, 0);
}

void ImageRGB::check() const {
  require(pixels.size() == static_cast<std::size_t>(pixel_count()) * 3, ErrorCode::DimensionMismatch,
          "ImageRGB: pixel buffer does not match width * height");
}

int channel_bin(std::uint8_t c, int bins) { return static_cast<int>(c) * bins / 256; }

Index color_bin(const std::uint8_t* rgb, int bins) {
  return (static_cast<Index>(channel_bin(rgb[0], bins)) * bins + channel_bin(rgb[1], bins)) * bins +
         channel_bin(rgb[2], bins);
}

Histogram3D histogram_from_image(const ImageRGB& image, int bins) {
  require(bins >= 2 && bins <= 256, ErrorCode::InvalidArgument, "histogram_from_image: bins in [2, 256]");
  image.check();
  require(image.pixel_count() > 0, ErrorCode::InvalidArgument, "histogram_from_image: empty image");
  Histogram3D h;
  h.bins = bins;
  h.weights = Vector::Zero(static_cast<Index>(bins) * bins * bins);
  for (Index p = 0; p < image.pixel_count(); ++p) h.weights[color_bin(&image.pixels[3 * p], bins)] += 1.0;
  h.weights /= static_cast<double>(image.pixel_count());
  return h;
}

std::uint8_t bin_center(Index k, int bins) {
  const double v = (static_cast<double>(k) + 0.5) * 256.0 / bins;
  return static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
}

ImageRGB recolor(const ImageRGB& image, const IndexMap& map, int bins) {
  image.check();
  const Index total = static_cast<Index>(bins) * bins * bins;
  require(map.size() == total, ErrorCode::DimensionMismatch, "recolor: map does not cover bins^3");
  ImageRGB out = image;
  for (Index p = 0; p < image.pixel_count(); ++p) {
    const Index t = map[color_bin(&image.pixels[3 * p], bins)] - 1;
    out.pixels[3 * p] = bin_center(t / (static_cast<Index>(bins) * bins), bins);
    out.pixels[3 * p + 1] = bin_center((t / bins) % bins, bins);
    out.pixels[3 * p + 2] = bin_center(t % bins, bins);
  }
  return out;
}

GridCost3D::GridCost3D(int bins) : bins_(bins) {
  require(bins >= 1, ErrorCode::InvalidArgument, "GridCost3D: bins >= 1");
}

double GridCost3D::operator()(Index i, Index j) const {
  const Index n = bins_;
  double s = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double d = static_cast<double>(i % n - j % n);
    s += d * d;
    i /= n;
    j /= n;
  }
  return s;
}

CostMatrix cost_3d(int bins) {
  require(bins >= 1 && bins <= 16, ErrorCode::InvalidArgument,
          "cost_3d: dense cost limited to bins <= 16; use GridCost3D");
  const GridCost3D c(bins);
  Matrix m(c.size(), c.size());
  for (Index j = 0; j < c.size(); ++j)
    for (Index i = 0; i < c.size(); ++i) m(i, j) = c(i, j);
  return CostMatrix(std::move(m));
}

Matrix grid_support_3d(int bins) {
  const Index n = bins;
  Matrix s(n * n * n, 3);
  for (Index i = 0; i < s.rows(); ++i) {
    s(i, 0) = static_cast<double>(i / (n * n));
    s(i, 1) = static_cast<double>((i / n) % n);
    s(i, 2) = static_cast<double>(i % n);
  }
  return s;
}

MeasureFamily color_family(const ImageRGB& source, const std::vector<ImageRGB>& palettes, int bins) {
  require(!palettes.empty(), ErrorCode::InvalidArgument, "color_family: no palette images");
  MeasureFamily f;
  f.mus.emplace_back(histogram_from_image(source, bins).weights);
  for (const ImageRGB& p : palettes) f.nus.emplace_back(histogram_from_image(p, bins).weights);
  f.support_x = grid_support_3d(bins);
  f.support_y = f.support_x;
  return f;
}

SnapshotSolver grid_sinkhorn_snapshot_solver(int bins, const SinkhornOptions& opts) {
  return [bins, opts](const GridMeasure& mu, const GridMeasure& nu) {
    const GridSinkhornSolution s = solve_sinkhorn_grid(bins, 3, mu, nu, opts);
    return Snapshot{s.cost, s.row_aggregates};
  };
}

ReducedModel build_color_model(const MeasureFamily& family, const ColorTransferOptions& opts) {
  require(family.kx() == 1, ErrorCode::InvalidArgument, "build_color_model: expects one source");
  SinkhornOptions so;
  so.epsilon = opts.eps_scale * grid_cost_sup(opts.bins, 3);
  so.max_iters = opts.max_iters;
  so.tol = opts.tol;
  so.force_log = true;
  const auto training = training_grid(1, static_cast<int>(family.ky()), opts.resolution);
  ReducedModel model =
      build_offline(family, training, grid_sinkhorn_snapshot_solver(opts.bins, so));
  model.target_bins = opts.bins;
  model.target_dims = 3;
  return model;
}

ImageRGB transfer_pipeline(const ImageRGB& image, const Vector& alpha_y, int bins,
                           const ReducedModel& rom, OpCounter* ops) {
  const Index total = static_cast<Index>(bins) * bins * bins;
  require(rom.kx == 1 && rom.nx == total && rom.ny == total && rom.target_dims == 3 &&
              rom.target_bins == bins,
          ErrorCode::DimensionMismatch, "transfer_pipeline: model was not built for this bin grid");
  require(alpha_y.size() == rom.ky, ErrorCode::DimensionMismatch,
          "transfer_pipeline: alpha_y length differs from the palette count");
  const Histogram3D h = histogram_from_image(image, bins);
  require((h.weights - rom.stacked_marginals.col(0).head(total)).lpNorm<Eigen::Infinity>() <= 1e-12,
          ErrorCode::DimensionMismatch, "transfer_pipeline: model was built for another source image");

  const Alpha alpha(Vector::Ones(1), alpha_y);
  const ReducedSolution sol = solve_reduced(rom, alpha, ops);
  require(sol.status == LPStatus::Optimal, ErrorCode::SolverFailure,
          std::string("transfer_pipeline: reduced solve returned ") + to_string(sol.status));
  const IndexMap map = map_from_reduced(rom, sol.p, ops);
  return recolor(image, map, bins);
}

void write_histogram_csv(std::ostream& out, const Histogram3D& h) {
  CsvWriter w(out, {"i1", "i2", "i3", "mass"});
  const Index n = h.bins;
  for (Index i = 0; i < h.weights.size(); ++i) {
    if (h.weights[i] == 0.0) continue;
    w.cell(static_cast<long long>(i / (n * n) + 1))
        .cell(static_cast<long long>((i / n) % n + 1))
        .cell(static_cast<long long>(i % n + 1))
        .cell(h.weights[i]);
    w.end_row();
  }
}

}  // namespace parot

#pragma once

#include "parot/common.hpp"
#include "parot/hf_ot.hpp"
#include "parot/reconstruct.hpp"
#include "parot/reduction.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace parot {

struct ImageRGB {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 3 bytes per pixel

  ImageRGB() = default;
  ImageRGB(int w, int h);

  Index pixel_count() const { return static_cast<Index>(width) * height; }
  void check() const;
};

ImageRGB read_png(const std::string& path);
void write_png(const std::string& path, const ImageRGB& image);

struct Histogram3D {
  int bins = 0;
  Vector weights;  // bins^3, flat index (r * bins + g) * bins + b
};

/// Channel bin floor(c * bins / 256).
int channel_bin(std::uint8_t c, int bins);
Index color_bin(const std::uint8_t* rgb, int bins);

Histogram3D histogram_from_image(const ImageRGB& image, int bins);

/// Per-axis bin centre (k + 0.5) * 256 / bins, rounded and clamped.
std::uint8_t bin_center(Index k, int bins);

/// Relabels every pixel through `map` (1-based flat bins on both sides).
ImageRGB recolor(const ImageRGB& image, const IndexMap& map, int bins);

/// Cost sum_a (i_a - j_a)^2 between flat grid bins, evaluated on demand.
class GridCost3D {
 public:
  explicit GridCost3D(int bins);
  int bins() const { return bins_; }
  Index size() const { return static_cast<Index>(bins_) * bins_ * bins_; }
  double operator()(Index i, Index j) const;
  double sup_norm() const { return grid_cost_sup(bins_, 3); }

 private:
  int bins_;
};

/// Dense N^3 x N^3 cost; refuses bins > 16.
CostMatrix cost_3d(int bins);

/// Bin coordinates (0-based) as an N^3 x 3 support.
Matrix grid_support_3d(int bins);

struct ColorTransferOptions {
  int bins = 16;
  int resolution = 3;           // training lattice per palette simplex
  double eps_scale = 1e-2;      // epsilon = eps_scale * ||C||
  int max_iters = 10000;
  double tol = 1e-7;
};

/// K_x = 1 family: the source histogram against the palette histograms.
MeasureFamily color_family(const ImageRGB& source, const std::vector<ImageRGB>& palettes, int bins);

/// Snapshots via the separable log-domain grid Sinkhorn; aggregates are 3D.
SnapshotSolver grid_sinkhorn_snapshot_solver(int bins, const SinkhornOptions& opts);

ReducedModel build_color_model(const MeasureFamily& family, const ColorTransferOptions& opts);

/// Online phase: reduced solve at (1, alpha_y), reduced map, recoloring.
/// Throws DimensionMismatch when the model was built for another source.
ImageRGB transfer_pipeline(const ImageRGB& image, const Vector& alpha_y, int bins,
                           const ReducedModel& rom, OpCounter* ops = nullptr);

/// CSV `i1,i2,i3,mass` for nonzero bins.
void write_histogram_csv(std::ostream& out, const Histogram3D& h);

}  // namespace parot

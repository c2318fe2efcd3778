#pragma once

#include "parot/estimators.hpp"
#include "parot/param_family.hpp"
#include "parot/reduction.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace parot {

/// Everything the online phase needs, as stored on disk.
struct ModelBundle {
  ReducedModel model;
  MeasureFamily family;
  std::optional<EIMEstimator> eim;
};

/// Binary container: magic "PAROTRB1", u32 version, u64 dimensions
/// (R, N_x, N_y, N, M, K_x, K_y, target_bins, target_dims, flags), then the
/// arrays in declared order as little-endian f64 (indices as u64). Matrices
/// are column-major.
void write_model(std::ostream& out, const ModelBundle& bundle);
ModelBundle read_model(std::istream& in);

void save_model(const std::string& path, const ModelBundle& bundle);
ModelBundle load_model(const std::string& path);

/// Audit CSV: alpha_x_1..alpha_x_Kx, alpha_y_1..alpha_y_Ky, c_hat.
void write_snapshot_csv(std::ostream& out, const ReducedModel& model);

}  // namespace parot

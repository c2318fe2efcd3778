#pragma once

#include "parot/common.hpp"
#include "parot/hf_ot.hpp"
#include "parot/reduction.hpp"

#include <iosfwd>
#include <vector>

namespace parot {

/// Source index -> target index, both 1-based.
struct IndexMap {
  std::vector<Index> targets;

  Index size() const { return static_cast<Index>(targets.size()); }
  Index operator[](Index i) const { return targets[static_cast<std::size_t>(i)]; }
};

/// floor(x), except that values within 1e-9 (relative) below an integer
/// snap up to it, so round-off in a mass-weighted mean cannot drop an index.
Index snapped_floor(double x);

/// T_i = floor(sum_j plan_ij j / sum_j plan_ij) with 1-based j. Rows without
/// mass map to i, clamped to [1, N_y].
IndexMap map_from_plan(const TransportPlan& plan);

/// Same formula from aggregates (N_x x (D + 1), see Snapshot) on a target
/// grid of `bins` per axis and `dims` axes. The floor is taken per axis and
/// the result flattened row-major.
IndexMap map_from_aggregates(const Matrix& aggregates, Index bins, int dims);

/// sum_r p_r aggregates_r, then map_from_aggregates. O(R N_x).
IndexMap map_from_reduced(const ReducedModel& model, const Vector& p, OpCounter* ops = nullptr);

/// CSV `source_index,target_index`.
void write_map_csv(std::ostream& out, const IndexMap& map);

}  // namespace parot

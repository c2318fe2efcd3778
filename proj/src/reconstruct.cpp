#include "parot/reconstruct.hpp"

#include "parot/csv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace parot {

Index snapped_floor(double x) {
  const double r = std::round(x);
  if (r > x && r - x <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<Index>(r);
  return static_cast<Index>(std::floor(x));
}

IndexMap map_from_plan(const TransportPlan& plan) {
  return map_from_aggregates(plan_aggregates(plan), plan.cols(), 1);
}

IndexMap map_from_aggregates(const Matrix& aggregates, Index bins, int dims) {
  require(dims >= 1 && aggregates.cols() == dims + 1, ErrorCode::DimensionMismatch,
          "map_from_aggregates: expected one column per axis plus the mass");
  require(bins >= 1, ErrorCode::InvalidArgument, "map_from_aggregates: bins >= 1");
  const Index n = aggregates.rows();
  IndexMap map;
  map.targets.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const double mass = aggregates(i, dims);
    Index flat = 0;
    if (mass > 0.0) {
      for (int a = 0; a < dims; ++a) {
        const Index t = std::clamp<Index>(snapped_floor(aggregates(i, a) / mass), 1, bins);
        flat = flat * bins + (t - 1);
      }
    } else {
      // Identity fallback. In 1D the source index may exceed the target range.
      Index total = 1;
      for (int a = 0; a < dims; ++a) total *= bins;
      flat = std::min(i, total - 1);
    }
    map.targets[static_cast<std::size_t>(i)] = flat + 1;
  }
  return map;
}

IndexMap map_from_reduced(const ReducedModel& model, const Vector& p, OpCounter* ops) {
  require(model.has_aggregates(), ErrorCode::InvalidArgument,
          "map_from_reduced: model carries no map aggregates");
  require(p.size() == model.R(), ErrorCode::DimensionMismatch,
          "map_from_reduced: coefficient length differs from R");
  const Matrix& first = model.map_aggregates.front();
  Matrix agg = Matrix::Zero(first.rows(), first.cols());
  for (Index r = 0; r < p.size(); ++r) {
    if (p[r] == 0.0) continue;
    agg.noalias() += p[r] * model.map_aggregates[static_cast<std::size_t>(r)];
    count(ops, static_cast<std::uint64_t>(first.size()));
  }
  count(ops, static_cast<std::uint64_t>(first.size()));
  return map_from_aggregates(agg, model.target_bins, model.target_dims);
}

void write_map_csv(std::ostream& out, const IndexMap& map) {
  CsvWriter w(out, {"source_index", "target_index"});
  for (Index i = 0; i < map.size(); ++i) {
    w.cell(static_cast<long long>(i + 1)).cell(static_cast<long long>(map[i]));
    w.end_row();
  }
}

}  // namespace parot

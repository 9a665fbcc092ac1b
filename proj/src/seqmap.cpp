#include "seqloc/seqmap.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace seqloc {

namespace {

void validate_aps(const std::vector<AccessPoint>& aps) {
  if (aps.size() < 2) {
    throw ConfigError("deployment needs at least 2 APs, got " + std::to_string(aps.size()));
  }
  std::unordered_set<ApId> ids;
  for (const auto& ap : aps) {
    if (ap.id <= 0) {
      throw ConfigError("ap ids must be positive, got " + std::to_string(ap.id));
    }
    if (!ids.insert(ap.id).second) {
      throw ConfigError("duplicate ap id " + std::to_string(ap.id));
    }
    if (!std::isfinite(ap.position.x) || !std::isfinite(ap.position.y)) {
      throw ConfigError("ap " + std::to_string(ap.id) + " has a non-finite position");
    }
  }
}

}  // namespace

ApSequence location_sequence(const Point2D& p, const std::vector<AccessPoint>& aps) {
  validate_aps(aps);
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw DomainError("location_sequence: point is not finite");
  }
  struct Entry {
    double d2;
    ApId id;
  };
  std::vector<Entry> entries;
  entries.reserve(aps.size());
  for (const auto& ap : aps) {
    entries.push_back({squared_distance(p, ap.position), ap.id});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.d2 != b.d2) return a.d2 < b.d2;
    return a.id < b.id;
  });
  ApSequence seq;
  seq.reserve(entries.size());
  for (const auto& e : entries) seq.push_back(e.id);
  return seq;
}

FingerprintMap build_map(const Rect& bounds, double grid_size, std::vector<AccessPoint> aps) {
  validate_aps(aps);
  if (!(grid_size > 0.0)) {
    throw ConfigError("grid_size must be positive");
  }
  if (!(bounds.width() > 0.0) || !(bounds.height() > 0.0)) {
    throw ConfigError("bounds are degenerate");
  }
  // Canonical AP order is ascending id.
  std::sort(aps.begin(), aps.end(),
            [](const AccessPoint& a, const AccessPoint& b) { return a.id < b.id; });

  FingerprintMap map;
  map.bounds = bounds;
  map.grid_size = grid_size;
  map.nx = static_cast<std::size_t>(std::ceil(bounds.width() / grid_size));
  map.ny = static_cast<std::size_t>(std::ceil(bounds.height() / grid_size));
  if (map.nx == 0 || map.ny == 0) {
    throw ConfigError("grid produced zero cells");
  }
  map.cells.reserve(map.nx * map.ny);
  for (std::size_t iy = 0; iy < map.ny; ++iy) {
    const double y0 = bounds.min_y + static_cast<double>(iy) * grid_size;
    const double y1 = std::min(y0 + grid_size, bounds.max_y);
    for (std::size_t ix = 0; ix < map.nx; ++ix) {
      const double x0 = bounds.min_x + static_cast<double>(ix) * grid_size;
      const double x1 = std::min(x0 + grid_size, bounds.max_x);
      GridCell cell;
      cell.anchor = {0.5 * (x0 + x1), 0.5 * (y0 + y1)};
      cell.sequence = location_sequence(cell.anchor, aps);
      map.cells.push_back(std::move(cell));
    }
  }
  map.aps = std::move(aps);
  return map;
}

std::size_t cell_index_at(const FingerprintMap& map, const Point2D& p) {
  if (!map.bounds.contains(p)) {
    throw DomainError("point outside map bounds");
  }
  auto clamp_idx = [](double offset, double grid, std::size_t n) {
    auto i = static_cast<long>(std::floor(offset / grid));
    if (i < 0) i = 0;
    if (i >= static_cast<long>(n)) i = static_cast<long>(n) - 1;
    return static_cast<std::size_t>(i);
  };
  const std::size_t ix = clamp_idx(p.x - map.bounds.min_x, map.grid_size, map.nx);
  const std::size_t iy = clamp_idx(p.y - map.bounds.min_y, map.grid_size, map.ny);
  return iy * map.nx + ix;
}

std::vector<ScoredCell> nearest_cells(const FingerprintMap& map, const ApSequence& seq,
                                      std::size_t k, const CellSimilarityFn& sim) {
  if (k == 0 || k > map.cells.size()) {
    throw DomainError("nearest_cells: k must be in [1, cell count]");
  }
  std::vector<ScoredCell> scored;
  scored.reserve(map.cells.size());
  for (std::size_t i = 0; i < map.cells.size(); ++i) {
    if (const auto s = sim(seq, map.cells[i].sequence)) {
      scored.push_back({i, *s});
    }
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredCell& a, const ScoredCell& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.cell_index < b.cell_index;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

}  // namespace seqloc

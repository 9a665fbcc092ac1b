#pragma once

#include <functional>
#include <optional>

#include "seqloc/types.hpp"

namespace seqloc {

// One grid tile of the fingerprint map: the tile centroid and the location
// sequence computed at it.
struct GridCell {
  Point2D anchor;
  ApSequence sequence;
};

// Training-free fingerprint map: every grid cell carries the AP ranking by
// distance from its centroid. Immutable after build_map; safe to share
// across concurrent trackers.
struct FingerprintMap {
  Rect bounds;
  double grid_size = 2.0;
  std::vector<AccessPoint> aps;
  std::vector<GridCell> cells;  // row-major from the min corner, x fastest
  std::size_t nx = 0;
  std::size_t ny = 0;
};

// AP ids sorted by ascending Euclidean distance from p. Equal distances
// break by ascending id so the order is total. Throws ConfigError with
// fewer than 2 APs.
ApSequence location_sequence(const Point2D& p, const std::vector<AccessPoint>& aps);

// Discretizes bounds into grid_size tiles (ceiling division; edge tiles are
// clipped and keep the clipped tile's centroid) and computes the location
// sequence per cell.
FingerprintMap build_map(const Rect& bounds, double grid_size, std::vector<AccessPoint> aps);

// Cell index of the tile containing p (points on shared edges belong to the
// higher tile, except along the max edges which stay in bounds).
std::size_t cell_index_at(const FingerprintMap& map, const Point2D& p);

struct ScoredCell {
  std::size_t cell_index = 0;
  double similarity = 0.0;
};

// Similarity between a query sequence and one cell sequence; nullopt drops
// the cell from consideration (e.g. insufficient overlap).
using CellSimilarityFn =
    std::function<std::optional<double>(const ApSequence& query, const ApSequence& cell)>;

// The k cells most similar to seq, descending similarity, ties broken by
// lower cell index. Returns fewer than k entries only when fewer cells have
// a defined similarity.
std::vector<ScoredCell> nearest_cells(const FingerprintMap& map, const ApSequence& seq,
                                      std::size_t k, const CellSimilarityFn& sim);

}  // namespace seqloc

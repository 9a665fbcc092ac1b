#include "seqloc/observation.hpp"

#include <algorithm>
#include <cmath>

#include "seqloc/similarity.hpp"

namespace seqloc {

ApSequence rss_sequence(const WifiScan& scan) {
  if (scan.readings.empty()) {
    throw DomainError("rss_sequence: scan has no readings");
  }
  RssVector sorted = scan.readings;
  std::sort(sorted.begin(), sorted.end(), [](const RssReading& a, const RssReading& b) {
    if (a.rss_dbm != b.rss_dbm) return a.rss_dbm > b.rss_dbm;
    return a.ap_id < b.ap_id;
  });
  ApSequence seq;
  seq.reserve(sorted.size());
  for (const auto& r : sorted) seq.push_back(r.ap_id);
  return seq;
}

std::optional<std::vector<WeightedAnchor>> select_anchors(const ApSequence& seq,
                                                          const FingerprintMap& map,
                                                          const ObservationConfig& cfg) {
  if (cfg.k == 0) {
    throw ConfigError("observation k must be at least 1");
  }
  const std::size_t k = std::min(cfg.k, map.cells.size());
  const auto sim = [&cfg](const ApSequence& query, const ApSequence& cell)
      -> std::optional<double> {
    const auto aligned = align_common(query, cell, std::max<std::size_t>(cfg.min_common_aps, 2));
    if (!aligned) return std::nullopt;
    return rank_similarity(aligned->first, aligned->second);
  };
  auto top = nearest_cells(map, seq, k, sim);
  if (top.empty()) return std::nullopt;

  std::vector<WeightedAnchor> anchors;
  anchors.reserve(top.size());
  for (const auto& sc : top) {
    anchors.push_back({map.cells[sc.cell_index].anchor, sc.similarity});
  }
  return anchors;
}

double wknn_likelihood(const Pose& pose, const std::vector<WeightedAnchor>& anchors,
                       double lambda) {
  if (!(lambda > 0.0)) {
    throw ConfigError("lambda must be positive");
  }
  double sum = 0.0;
  for (const auto& a : anchors) {
    const double d2 = squared_distance({pose.x, pose.y}, a.anchor) / lambda;
    sum += a.similarity * std::exp(-0.5 * d2);
  }
  return std::max(sum, kLikelihoodFloor);
}

std::optional<double> likelihood(const Pose& pose, const ApSequence& seq,
                                 const FingerprintMap& map, const ObservationConfig& cfg) {
  const auto anchors = select_anchors(seq, map, cfg);
  if (!anchors) return std::nullopt;
  return wknn_likelihood(pose, *anchors, cfg.lambda);
}

std::optional<std::vector<WeightedAnchor>> SequenceModel::scan_anchors(
    const WifiScan& scan) const {
  if (scan.readings.size() < cfg_.min_common_aps) return std::nullopt;
  return select_anchors(rss_sequence(scan), *map_, cfg_);
}

}  // namespace seqloc

#pragma once

#include <optional>

#include "seqloc/observation.hpp"
#include "seqloc/simulator.hpp"
#include "seqloc/types.hpp"

namespace seqloc {

// One surveyed reference point: dwell location and per-AP mean RSS.
struct RssFingerprint {
  Point2D location;
  RssVector mean_rss;
};

// Survey-based fingerprint map for the traditional cosine/WKNN comparison.
struct RssFingerprintMap {
  std::vector<RssFingerprint> points;
  double survey_duration_s = 0.0;
  std::size_t scans_per_point = 0;
};

// Roughly square grid of `count` dwell locations covering the bounds.
std::vector<Point2D> survey_grid(const Rect& bounds, std::size_t count);

// Simulates a stationary dwell of duration_s at each point, sampling every
// AP at the scenario Wifi rate, and stores the per-AP mean RSS.
RssFingerprintMap survey(const Scenario& scenario, const std::vector<Point2D>& points,
                         double duration_s);

// Top-k survey points by cosine similarity to the scan; same shape as the
// sequence model's anchor list.
std::optional<std::vector<WeightedAnchor>> select_anchors_cosine(const WifiScan& scan,
                                                                 const RssFingerprintMap& map,
                                                                 const ObservationConfig& cfg);

// Cosine/WKNN observation likelihood with the same distance kernel as the
// sequence model; nullopt when the scan is unusable.
std::optional<double> likelihood_cosine(const Pose& pose, const WifiScan& scan,
                                        const RssFingerprintMap& map,
                                        const ObservationConfig& cfg);

// Baseline observation backend: plugs the surveyed map into the same filter
// path as SequenceModel.
class CosineModel final : public ObservationModel {
 public:
  CosineModel(const RssFingerprintMap* map, ObservationConfig cfg) : map_(map), cfg_(cfg) {}

  std::optional<std::vector<WeightedAnchor>> scan_anchors(const WifiScan& scan) const override;
  double lambda() const override { return cfg_.lambda; }

 private:
  const RssFingerprintMap* map_;
  ObservationConfig cfg_;
};

}  // namespace seqloc

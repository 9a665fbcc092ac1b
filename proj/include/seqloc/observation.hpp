#pragma once

#include <optional>

#include "seqloc/seqmap.hpp"
#include "seqloc/types.hpp"

namespace seqloc {

struct ObservationConfig {
  std::size_t k = 4;               // neighbor count
  double lambda = 0.01;            // kernel bandwidth, m^2 per unit of d^2
  std::size_t min_common_aps = 3;  // scans sharing fewer APs with the map are skipped
};

// Floor on the per-particle likelihood. The default lambda makes the kernel
// only ~0.1 m wide, which would otherwise zero out every weight as soon as
// the cloud strays a few meters from the anchors.
inline constexpr double kLikelihoodFloor = 1e-300;

// AP ids ranked by descending RSS, equal strengths broken by ascending id.
// Throws DomainError on an empty scan.
ApSequence rss_sequence(const WifiScan& scan);

// A reference point the kernel is evaluated against, with its sequence (or
// cosine) similarity to the scan.
struct WeightedAnchor {
  Point2D anchor;
  double similarity = 0.0;
};

// The per-scan top-k cells by rank similarity, shared by every particle
// weight evaluation for that scan. Cells that overlap the scan in fewer
// than min_common_aps ids are dropped; nullopt when none remain.
std::optional<std::vector<WeightedAnchor>> select_anchors(const ApSequence& seq,
                                                          const FingerprintMap& map,
                                                          const ObservationConfig& cfg);

// Unnormalized WKNN likelihood: sum over anchors of
//   similarity * exp(-((x-xa)^2 + (y-ya)^2) / (2*lambda)),
// clamped below at kLikelihoodFloor. Heading does not enter.
double wknn_likelihood(const Pose& pose, const std::vector<WeightedAnchor>& anchors,
                       double lambda);

// select_anchors + wknn_likelihood in one call; nullopt means the scan is
// unusable and the filter should predict only.
std::optional<double> likelihood(const Pose& pose, const ApSequence& seq,
                                 const FingerprintMap& map, const ObservationConfig& cfg);

// Observation backend for the particle filter. Implementations compute the
// per-scan anchor list once; the filter evaluates the same kernel against it
// for every particle, so sequence and cosine models share one code path.
class ObservationModel {
 public:
  virtual ~ObservationModel() = default;
  // nullopt: scan unusable (too few readings or no overlap), skip correction.
  virtual std::optional<std::vector<WeightedAnchor>> scan_anchors(const WifiScan& scan) const = 0;
  virtual double lambda() const = 0;
};

// The training-free model: RSS sequence against the grid fingerprint map.
class SequenceModel final : public ObservationModel {
 public:
  SequenceModel(const FingerprintMap* map, ObservationConfig cfg) : map_(map), cfg_(cfg) {}

  std::optional<std::vector<WeightedAnchor>> scan_anchors(const WifiScan& scan) const override;
  double lambda() const override { return cfg_.lambda; }

 private:
  const FingerprintMap* map_;
  ObservationConfig cfg_;
};

}  // namespace seqloc

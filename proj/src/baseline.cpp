#include "seqloc/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "seqloc/eval.hpp"
#include "seqloc/similarity.hpp"

namespace seqloc {

std::vector<Point2D> survey_grid(const Rect& bounds, std::size_t count) {
  if (count == 0) throw ConfigError("survey_grid: count must be positive");
  const double w = bounds.width();
  const double h = bounds.height();
  if (w <= 0.0 || h <= 0.0) throw ConfigError("survey_grid: bounds must have positive area");

  // Near-square cell layout: aim for spacing equal in x and y.
  auto nx = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count) * w / h)));
  nx = std::max<std::size_t>(nx, 1);
  const std::size_t ny = (count + nx - 1) / nx;
  const double sx = w / static_cast<double>(nx);
  const double sy = h / static_cast<double>(ny);

  std::vector<Point2D> points;
  points.reserve(count);
  for (std::size_t j = 0; j < ny && points.size() < count; ++j) {
    for (std::size_t i = 0; i < nx && points.size() < count; ++i) {
      points.push_back({bounds.min_x + (static_cast<double>(i) + 0.5) * sx,
                        bounds.min_y + (static_cast<double>(j) + 0.5) * sy});
    }
  }
  return points;
}

RssFingerprintMap survey(const Scenario& scenario, const std::vector<Point2D>& points,
                         double duration_s) {
  if (points.empty()) throw ConfigError("survey: no dwell points");
  if (duration_s <= 0.0) throw ConfigError("survey: duration must be positive");
  if (scenario.wifi_rate_hz <= 0.0) throw ConfigError("survey: wifi rate must be positive");
  if (scenario.aps.empty()) throw ConfigError("survey: scenario has no APs");

  const auto n_scans =
      std::max<std::size_t>(1, static_cast<std::size_t>(duration_s * scenario.wifi_rate_hz));

  std::vector<AccessPoint> aps = scenario.aps;
  std::sort(aps.begin(), aps.end(),
            [](const AccessPoint& a, const AccessPoint& b) { return a.id < b.id; });

  // Stream constant keeps survey shadowing decoupled from the walk's draws.
  std::mt19937_64 rng(derive_seed(scenario.seed, 0xBA5Eu));

  RssFingerprintMap map;
  map.survey_duration_s = duration_s;
  map.scans_per_point = n_scans;
  map.points.reserve(points.size());
  for (const auto& p : points) {
    if (!scenario.bounds.contains(p)) throw ConfigError("survey: dwell point outside bounds");
    std::vector<double> sums(aps.size(), 0.0);
    for (std::size_t s = 0; s < n_scans; ++s) {
      for (std::size_t a = 0; a < aps.size(); ++a) {
        sums[a] += rss_at(aps[a], p, scenario.path_loss, rng);
      }
    }
    RssFingerprint fp;
    fp.location = p;
    fp.mean_rss.reserve(aps.size());
    for (std::size_t a = 0; a < aps.size(); ++a) {
      fp.mean_rss.push_back({aps[a].id, sums[a] / static_cast<double>(n_scans)});
    }
    map.points.push_back(std::move(fp));
  }
  return map;
}

std::optional<std::vector<WeightedAnchor>> select_anchors_cosine(const WifiScan& scan,
                                                                 const RssFingerprintMap& map,
                                                                 const ObservationConfig& cfg) {
  if (cfg.k == 0) throw ConfigError("select_anchors_cosine: k must be positive");
  if (map.points.empty()) throw ConfigError("select_anchors_cosine: empty fingerprint map");
  if (scan.readings.size() < cfg.min_common_aps) return std::nullopt;

  struct Scored {
    std::size_t index;
    double sim;
  };
  std::vector<Scored> scored;
  scored.reserve(map.points.size());
  for (std::size_t i = 0; i < map.points.size(); ++i) {
    auto sim = cosine_similarity(scan.readings, map.points[i].mean_rss, cfg.min_common_aps);
    if (sim) scored.push_back({i, *sim});
  }
  if (scored.empty()) return std::nullopt;

  const std::size_t k = std::min<std::size_t>(cfg.k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(),
                    [](const Scored& a, const Scored& b) {
                      if (a.sim != b.sim) return a.sim > b.sim;
                      return a.index < b.index;
                    });
  std::vector<WeightedAnchor> anchors;
  anchors.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    anchors.push_back({map.points[scored[i].index].location, scored[i].sim});
  }
  return anchors;
}

std::optional<double> likelihood_cosine(const Pose& pose, const WifiScan& scan,
                                        const RssFingerprintMap& map,
                                        const ObservationConfig& cfg) {
  auto anchors = select_anchors_cosine(scan, map, cfg);
  if (!anchors) return std::nullopt;
  return wknn_likelihood(pose, *anchors, cfg.lambda);
}

std::optional<std::vector<WeightedAnchor>> CosineModel::scan_anchors(const WifiScan& scan) const {
  return select_anchors_cosine(scan, *map_, cfg_);
}

}  // namespace seqloc

#include "seqloc/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "seqloc/motion.hpp"

namespace seqloc {

namespace {

double gaussian(std::mt19937_64& rng, double sigma) {
  if (sigma <= 0.0) return 0.0;
  std::normal_distribution<double> dist(0.0, sigma);
  return dist(rng);
}

// Piecewise-linear route with arc-length lookup.
class Route {
 public:
  explicit Route(const std::vector<Point2D>& waypoints) {
    for (const auto& w : waypoints) {
      if (points_.empty() || distance(points_.back(), w) > 0.0) {
        points_.push_back(w);
      }
    }
    cum_.push_back(0.0);
    for (std::size_t i = 1; i < points_.size(); ++i) {
      cum_.push_back(cum_.back() + distance(points_[i - 1], points_[i]));
    }
  }

  double length() const { return cum_.empty() ? 0.0 : cum_.back(); }

  Point2D at(double s) const {
    s = std::clamp(s, 0.0, length());
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    if (it == cum_.begin()) return points_.front();
    if (it == cum_.end()) return points_.back();
    const std::size_t seg = static_cast<std::size_t>(it - cum_.begin());
    const double t = (s - cum_[seg - 1]) / (cum_[seg] - cum_[seg - 1]);
    const Point2D& a = points_[seg - 1];
    const Point2D& b = points_[seg];
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
  }

  std::size_t segment_count() const { return points_.size() < 2 ? 0 : points_.size() - 1; }

 private:
  std::vector<Point2D> points_;
  std::vector<double> cum_;
};

void validate(const Scenario& s) {
  if (s.aps.size() < 2) throw ConfigError("scenario needs at least 2 APs");
  if (!(s.speed_mps > 0.0)) throw ConfigError("speed must be positive");
  if (!(s.wifi_rate_hz > 0.0)) throw ConfigError("wifi rate must be positive");
  if (!(s.step_cadence_hz > 0.0)) throw ConfigError("step cadence must be positive");
  if (!(s.path_loss.gamma > 0.0)) throw ConfigError("path-loss exponent must be positive");
  if (s.path.size() < 2) throw ConfigError("path needs at least 2 waypoints");
  for (const auto& w : s.path) {
    if (!s.bounds.contains(w)) throw ConfigError("path waypoint outside bounds");
  }
  const double miss = s.imu_noise.step_count_miss_prob;
  if (miss < 0.0 || miss > 1.0) throw ConfigError("step miss probability must lie in [0, 1]");
}

}  // namespace

std::vector<AccessPoint> perimeter_aps(const Rect& bounds, std::size_t count) {
  const double w = bounds.width();
  const double h = bounds.height();
  const double perimeter = 2.0 * (w + h);
  std::vector<AccessPoint> aps;
  aps.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double s = perimeter * static_cast<double>(i) / static_cast<double>(count);
    Point2D p;
    if (s < w) {
      p = {bounds.min_x + s, bounds.min_y};
    } else if ((s -= w) < h) {
      p = {bounds.max_x, bounds.min_y + s};
    } else if ((s -= h) < w) {
      p = {bounds.max_x - s, bounds.max_y};
    } else {
      p = {bounds.min_x, bounds.max_y - (s - w)};
    }
    aps.push_back({static_cast<ApId>(i + 1), p});
  }
  return aps;
}

Scenario default_scenario() {
  Scenario s;
  s.aps = perimeter_aps(s.bounds, 9);
  // Rectangle loop 1 m inside the walls, 70 m per lap. Eleven and a half
  // laps (805 m): a route that ends at a loop closure hides dead-reckoning
  // drift, so the final half lap parks the walker at the far corner.
  const std::vector<Point2D> lap = {{1.0, 1.0}, {24.0, 1.0}, {24.0, 13.0}, {1.0, 13.0}};
  s.path.push_back(lap[0]);
  for (int loop = 0; loop < 11; ++loop) {
    for (std::size_t i = 1; i <= lap.size(); ++i) {
      s.path.push_back(lap[i % lap.size()]);
    }
  }
  s.path.push_back(lap[1]);
  s.path.push_back(lap[2]);
  return s;
}

double rss_at(const AccessPoint& ap, const Point2D& p, const PathLossParams& pl) {
  const double d = std::max(distance(ap.position, p), 0.1);
  const double rss = pl.p0_dbm - 10.0 * pl.gamma * std::log10(d);
  return std::clamp(rss, -100.0, -20.0);
}

double rss_at(const AccessPoint& ap, const Point2D& p, const PathLossParams& pl,
              std::mt19937_64& rng) {
  const double d = std::max(distance(ap.position, p), 0.1);
  const double rss = pl.p0_dbm - 10.0 * pl.gamma * std::log10(d) +
                     gaussian(rng, pl.sigma_shadow_db);
  return std::clamp(rss, -100.0, -20.0);
}

std::vector<Measurement> generate(const Scenario& s) {
  validate(s);
  const Route route(s.path);
  if (route.segment_count() == 0) {
    throw ConfigError("path is degenerate (zero length)");
  }
  const double stride = s.speed_mps / s.step_cadence_hz;
  const auto n_steps = static_cast<std::size_t>(std::floor(route.length() / stride));
  std::mt19937_64 rng(s.seed);

  // Walk the route one stride at a time, each step aimed at the next
  // arc-length sample. Straight segments are tracked exactly; corners get
  // cut by a fraction of a stride and the pursuit pulls back on line.
  std::vector<Point2D> pos(n_steps + 1);
  std::vector<double> step_heading(n_steps + 1, 0.0);  // heading of step i, 1-based
  pos[0] = route.at(0.0);
  double prev_heading = 0.0;
  for (std::size_t i = 1; i <= n_steps; ++i) {
    const Point2D target = route.at(static_cast<double>(i) * stride);
    const double dx = target.x - pos[i - 1].x;
    const double dy = target.y - pos[i - 1].y;
    const double heading =
        (dx * dx + dy * dy) > 1e-24 ? std::atan2(dy, dx) : prev_heading;
    pos[i] = {pos[i - 1].x + stride * std::cos(heading),
              pos[i - 1].y + stride * std::sin(heading)};
    step_heading[i] = heading;
    prev_heading = heading;
  }

  const double t_end = static_cast<double>(n_steps) / s.step_cadence_hz;
  const auto pos_at = [&](double t) -> Point2D {
    if (t <= 0.0) return pos[0];
    const double steps = t * s.step_cadence_hz;
    const auto i = static_cast<std::size_t>(std::floor(steps));
    if (i >= n_steps) return pos[n_steps];
    const double frac = steps - static_cast<double>(i);
    return {pos[i].x + frac * (pos[i + 1].x - pos[i].x),
            pos[i].y + frac * (pos[i + 1].y - pos[i].y)};
  };

  // STEP records: cumulative count (misses undercount), facing of the
  // upcoming step as the heading sample.
  std::vector<DeadReckoningInput> steps;
  steps.reserve(n_steps + 1);
  std::bernoulli_distribution counted(1.0 - s.imu_noise.step_count_miss_prob);
  long count = 0;
  for (std::size_t i = 0; i <= n_steps; ++i) {
    if (i > 0 && counted(rng)) ++count;
    const double facing = step_heading[std::min(i + 1, n_steps)];
    DeadReckoningInput rec;
    rec.timestamp = static_cast<double>(i) / s.step_cadence_hz;
    rec.step_count = count;
    rec.heading = wrap_angle(facing + s.imu_noise.heading_bias_rad +
                             gaussian(rng, s.imu_noise.heading_noise_rad));
    steps.push_back(rec);
  }

  // WIFI records: every AP sampled with an independent shadowing draw.
  std::vector<WifiScan> scans;
  const auto n_scans = static_cast<std::size_t>(std::floor(t_end * s.wifi_rate_hz)) + 1;
  scans.reserve(n_scans);
  std::vector<AccessPoint> aps_sorted = s.aps;
  std::sort(aps_sorted.begin(), aps_sorted.end(),
            [](const AccessPoint& a, const AccessPoint& b) { return a.id < b.id; });
  for (std::size_t j = 0; j < n_scans; ++j) {
    WifiScan scan;
    scan.timestamp = static_cast<double>(j) / s.wifi_rate_hz;
    const Point2D p = pos_at(scan.timestamp);
    for (const auto& ap : aps_sorted) {
      scan.readings.push_back({ap.id, rss_at(ap, p, s.path_loss, rng)});
    }
    scans.push_back(std::move(scan));
  }

  // One GT fix per distinct event timestamp, then merge everything in time
  // order with GT < STEP < WIFI on ties.
  std::vector<double> gt_times;
  gt_times.reserve(steps.size() + scans.size());
  for (const auto& r : steps) gt_times.push_back(r.timestamp);
  for (const auto& r : scans) gt_times.push_back(r.timestamp);
  std::sort(gt_times.begin(), gt_times.end());
  gt_times.erase(std::unique(gt_times.begin(), gt_times.end()), gt_times.end());

  std::vector<Measurement> log;
  log.reserve(gt_times.size() + steps.size() + scans.size());
  std::size_t si = 0;
  std::size_t wi = 0;
  for (double t : gt_times) {
    log.emplace_back(GroundTruthFix{t, pos_at(t)});
    while (si < steps.size() && steps[si].timestamp <= t) {
      log.emplace_back(steps[si++]);
    }
    while (wi < scans.size() && scans[wi].timestamp <= t) {
      log.emplace_back(std::move(scans[wi++]));
    }
  }
  return log;
}

std::vector<Measurement> decimate(const std::vector<Measurement>& log, std::size_t keep_every) {
  if (keep_every == 0) throw ConfigError("keep_every must be at least 1");
  std::vector<Measurement> out;
  out.reserve(log.size());
  std::size_t scan_index = 0;
  for (const auto& m : log) {
    if (std::holds_alternative<WifiScan>(m)) {
      if (scan_index++ % keep_every == 0) out.push_back(m);
    } else {
      out.push_back(m);
    }
  }
  return out;
}

}  // namespace seqloc

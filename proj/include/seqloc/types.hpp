#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace seqloc {

// Invalid deployment, scenario, or tracker configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Inputs outside an operation's domain (mismatched id sets, bad sequence).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed measurement log or data file; message carries the line number
// when one is known.
class LogError : public std::runtime_error {
 public:
  explicit LogError(const std::string& what) : std::runtime_error(what) {}
};

struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

inline double squared_distance(const Point2D& a, const Point2D& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(const Point2D& a, const Point2D& b) {
  return std::sqrt(squared_distance(a, b));
}

// Axis-aligned rectangle in meters.
struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  bool contains(const Point2D& p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  Point2D center() const { return {0.5 * (min_x + max_x), 0.5 * (min_y + max_y)}; }
};

// 2D position plus heading, radians in (-pi, pi].
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

using ApId = int;

// A Wifi transmitter at a known position. Ids are unique within a deployment
// and ascending id is the canonical AP order.
struct AccessPoint {
  ApId id = 0;
  Point2D position;
};

// Ordered list of AP ids. Holds both location sequences (distance ranking)
// and RSS sequences (strength ranking).
using ApSequence = std::vector<ApId>;

struct RssReading {
  ApId ap_id = 0;
  double rss_dbm = 0.0;
};

// Readings sorted by ascending ap_id, ids unique.
using RssVector = std::vector<RssReading>;

struct WifiScan {
  double timestamp = 0.0;
  RssVector readings;
};

// One dead-reckoning sample: cumulative step count and absolute heading.
struct DeadReckoningInput {
  double timestamp = 0.0;
  long step_count = 0;
  double heading = 0.0;  // radians in (-pi, pi]
};

struct GroundTruthFix {
  double timestamp = 0.0;
  Point2D position;
};

// One timestamped log record: Wifi scan, step/heading sample, or truth fix.
using Measurement = std::variant<WifiScan, DeadReckoningInput, GroundTruthFix>;

inline double measurement_time(const Measurement& m) {
  return std::visit([](const auto& r) { return r.timestamp; }, m);
}

}  // namespace seqloc

#pragma once

#include <random>

#include "seqloc/types.hpp"

namespace seqloc {

// Log-distance path loss: rss = p0 - 10*gamma*log10(d / 1m) + shadowing.
struct PathLossParams {
  double p0_dbm = -40.0;        // RSS at the 1 m reference distance
  double gamma = 2.5;           // path-loss exponent
  double sigma_shadow_db = 6.0; // lognormal shadowing std; corrupts rank order
};

struct ImuNoiseParams {
  double step_count_miss_prob = 0.02;  // chance a step is not counted
  double heading_bias_rad = 0.02;      // constant magnetometer offset
  double heading_noise_rad = 0.05;     // per-sample heading noise std
};

// Everything that defines one synthetic walk: geometry, route, rates,
// radio and sensor noise, and the seed that fixes every draw.
struct Scenario {
  Rect bounds{0.0, 0.0, 25.0, 14.0};
  std::vector<AccessPoint> aps;
  std::vector<Point2D> path;  // waypoints, walked in order at constant speed
  double speed_mps = 0.8;
  double wifi_rate_hz = 0.5;
  double step_cadence_hz = 1.6;
  PathLossParams path_loss;
  ImuNoiseParams imu_noise;
  std::uint64_t seed = 1;
};

// APs spaced evenly along the bounds perimeter, ids 1..count.
std::vector<AccessPoint> perimeter_aps(const Rect& bounds, std::size_t count);

// 25 m x 14 m room, nine perimeter APs, a rectangle loop walked for eleven
// and a half laps (805 m), ending at the corner opposite the start so
// end-of-route dead-reckoning drift is measurable rather than cancelled by
// loop closure. One place holds all default constants.
Scenario default_scenario();

// One shadowed RSS sample in dBm, clamped to [-100, -20]. Distance is
// floored at 0.1 m so a point on top of an AP stays finite.
double rss_at(const AccessPoint& ap, const Point2D& p, const PathLossParams& pl,
              std::mt19937_64& rng);
// Noise-free variant (shadowing ignored).
double rss_at(const AccessPoint& ap, const Point2D& p, const PathLossParams& pl);

// Simulates the walk and returns the merged, time-ordered measurement log:
// STEP records at the step cadence, WIFI scans of every AP at the Wifi rate,
// and a GT fix at each event timestamp. The walker advances one stride per
// step toward successive arc-length targets on the route, so with all noise
// at zero, dead-reckoned integration of the STEP stream reproduces GT.
std::vector<Measurement> generate(const Scenario& s);

// Keeps every n-th WIFI record and all STEP/GT records; models a lower
// Wifi sampling rate.
std::vector<Measurement> decimate(const std::vector<Measurement>& log, std::size_t keep_every);

}  // namespace seqloc

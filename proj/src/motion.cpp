#include "seqloc/motion.hpp"

#include <cmath>

namespace seqloc {

double wrap_angle(double angle) {
  // remainder() maps to [-pi, pi); move the -pi boundary to +pi.
  const double w = std::remainder(angle, 2.0 * M_PI);
  return w <= -M_PI ? w + 2.0 * M_PI : w;
}

namespace {

// normal_distribution requires sigma > 0; a zero sigma draws nothing, which
// also keeps zero-noise runs free of RNG consumption.
double gaussian(std::mt19937_64& rng, double sigma) {
  if (sigma <= 0.0) return 0.0;
  std::normal_distribution<double> dist(0.0, sigma);
  return dist(rng);
}

}  // namespace

Pose propagate(const Pose& p, const DeadReckoningInput& prev, const DeadReckoningInput& cur,
               const MotionConfig& cfg, std::mt19937_64& rng) {
  const long delta_steps = cur.step_count - prev.step_count;
  if (delta_steps < 0) {
    throw LogError("step count decreased from " + std::to_string(prev.step_count) + " to " +
                   std::to_string(cur.step_count));
  }
  // Wrap before scaling so a crossing of the +-pi seam is not treated as a
  // near-2pi turn.
  const double delta_heading = wrap_angle(cur.heading - prev.heading);

  const double displacement = cfg.step_length_m * static_cast<double>(delta_steps);
  const double noise_x = gaussian(rng, cfg.sigma_d);
  const double noise_y = cfg.independent_xy_noise ? gaussian(rng, cfg.sigma_d) : noise_x;
  const double noise_theta = gaussian(rng, cfg.sigma_theta);

  Pose out;
  out.x = p.x + displacement * std::cos(p.theta) * (1.0 + noise_x);
  out.y = p.y + displacement * std::sin(p.theta) * (1.0 + noise_y);
  out.theta = wrap_angle(p.theta + delta_heading * (1.0 + noise_theta) +
                         gaussian(rng, cfg.sigma_theta_add));
  return out;
}

}  // namespace seqloc

#pragma once

#include <random>

#include "seqloc/types.hpp"

namespace seqloc {

struct MotionConfig {
  double step_length_m = 0.7;
  double sigma_d = 0.4;          // multiplicative distance noise std
  double sigma_theta = 0.01;     // multiplicative heading-delta noise std
  double sigma_theta_add = 0.0;  // optional additive heading noise std, radians
  // When set, x and y take independent distance-noise draws instead of the
  // default shared draw (shared keeps the error a step-length error rather
  // than an anisotropic one).
  bool independent_xy_noise = false;
};

// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

// Dead-reckoning update: displaces the pose by step_length * delta-steps
// along the pre-update heading, then applies the heading delta. Distance and
// turn noise are multiplicative, so zero deltas propagate exactly.
// Throws LogError when the step count decreases.
Pose propagate(const Pose& p, const DeadReckoningInput& prev, const DeadReckoningInput& cur,
               const MotionConfig& cfg, std::mt19937_64& rng);

}  // namespace seqloc

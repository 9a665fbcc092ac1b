#include <cmath>
#include <random>

#include "doctest.h"
#include "seqloc/motion.hpp"

using namespace seqloc;

namespace {

DeadReckoningInput dr(double t, long c, double heading) { return {t, c, heading}; }

MotionConfig noiseless() {
  MotionConfig cfg;
  cfg.sigma_d = 0.0;
  cfg.sigma_theta = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(3.0 * M_PI / 2.0) == doctest::Approx(-M_PI / 2.0));
  CHECK(wrap_angle(-3.0 * M_PI / 2.0) == doctest::Approx(M_PI / 2.0));
  CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(7.0 * M_PI) == doctest::Approx(M_PI));
}

TEST_CASE("zero-noise propagation displaces by step_length * delta_count") {
  std::mt19937_64 rng(1);
  const Pose p{3.0, 4.0, M_PI / 2.0};
  const auto out = propagate(p, dr(0.0, 10, M_PI / 2.0), dr(1.25, 12, M_PI / 2.0), noiseless(), rng);
  CHECK(out.x == doctest::Approx(3.0));
  CHECK(out.y == doctest::Approx(4.0 + 1.4));
  CHECK(out.theta == doctest::Approx(M_PI / 2.0));
}

TEST_CASE("displacement uses the pre-update heading") {
  std::mt19937_64 rng(1);
  // Particle faces +x; the new sample turns 90 degrees. The step itself must
  // still go along +x, with the turn applied afterwards.
  const Pose p{0.0, 0.0, 0.0};
  const auto out = propagate(p, dr(0.0, 0, 0.0), dr(1.0, 1, M_PI / 2.0), noiseless(), rng);
  CHECK(out.x == doctest::Approx(0.7));
  CHECK(out.y == doctest::Approx(0.0));
  CHECK(out.theta == doctest::Approx(M_PI / 2.0));
}

TEST_CASE("heading delta wraps before it is applied") {
  std::mt19937_64 rng(1);
  // From +179deg to -179deg is a +2deg turn, not a -358deg one.
  const double a = 179.0 * M_PI / 180.0;
  const double b = -179.0 * M_PI / 180.0;
  const Pose p{0.0, 0.0, a};
  const auto out = propagate(p, dr(0.0, 0, a), dr(1.0, 0, b), noiseless(), rng);
  CHECK(out.theta == doctest::Approx(wrap_angle(a + 2.0 * M_PI / 180.0)));
}

TEST_CASE("step count must not decrease") {
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(propagate({}, dr(0.0, 5, 0.0), dr(1.0, 4, 0.0), noiseless(), rng), LogError);
}

TEST_CASE("distance noise scales the step multiplicatively") {
  MotionConfig cfg;
  cfg.sigma_d = 0.4;
  cfg.sigma_theta = 0.0;
  std::mt19937_64 rng(123);
  const int n = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto out = propagate({0.0, 0.0, 0.0}, dr(0.0, 0, 0.0), dr(1.0, 1, 0.0), cfg, rng);
    sum += out.x;
    sum_sq += out.x * out.x;
  }
  const double mean = sum / n;
  const double std = std::sqrt(sum_sq / n - mean * mean);
  // x-increment ~ 0.7 * (1 + N(0, 0.4^2)) so std ~ 0.28.
  CHECK(mean == doctest::Approx(0.7).epsilon(0.01));
  CHECK(std == doctest::Approx(0.28).epsilon(0.03));
}

TEST_CASE("x and y share one distance-noise draw by default") {
  MotionConfig cfg;
  cfg.sigma_d = 0.5;
  cfg.sigma_theta = 0.0;
  std::mt19937_64 rng(9);
  const Pose p{0.0, 0.0, M_PI / 4.0};
  for (int i = 0; i < 100; ++i) {
    const auto out = propagate(p, dr(0.0, 0, p.theta), dr(1.0, 1, p.theta), cfg, rng);
    // Along a diagonal heading the shared draw keeps the step on the heading
    // line, so x and y stay equal.
    CHECK(out.x == doctest::Approx(out.y).epsilon(1e-12));
  }

  cfg.independent_xy_noise = true;
  int differing = 0;
  for (int i = 0; i < 100; ++i) {
    const auto out = propagate(p, dr(0.0, 0, p.theta), dr(1.0, 1, p.theta), cfg, rng);
    if (std::abs(out.x - out.y) > 1e-6) ++differing;
  }
  CHECK(differing > 90);
}

TEST_CASE("zero heading delta stays exact under multiplicative heading noise") {
  MotionConfig cfg;
  cfg.sigma_d = 0.0;
  cfg.sigma_theta = 0.05;
  std::mt19937_64 rng(4);
  const Pose p{0.0, 0.0, 1.0};
  const auto out = propagate(p, dr(0.0, 0, 1.0), dr(1.0, 1, 1.0), cfg, rng);
  CHECK(out.theta == 1.0);

  cfg.sigma_theta_add = 0.05;
  bool moved = false;
  for (int i = 0; i < 50 && !moved; ++i) {
    moved = propagate(p, dr(0.0, 0, 1.0), dr(1.0, 1, 1.0), cfg, rng).theta != 1.0;
  }
  CHECK(moved);
}

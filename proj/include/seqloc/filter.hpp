#pragma once

#include <memory>
#include <optional>
#include <random>
#include <variant>

#include "seqloc/motion.hpp"
#include "seqloc/observation.hpp"
#include "seqloc/types.hpp"

namespace seqloc {

struct Particle {
  Pose pose;
  double weight = 0.0;
};

struct Disc {
  Point2D center;
  double radius = 0.0;
};

using InitRegion = std::variant<Rect, Disc>;

struct FilterConfig {
  std::size_t n_particles = 1000;
  // Resample when ESS falls below this fraction of N. 1.0 resamples on every
  // correction, which is the behavior described in most filter writeups;
  // gating on ESS only reduces sample impoverishment.
  double resample_threshold = 0.5;
  InitRegion init_region = Rect{0.0, 0.0, 1.0, 1.0};
  // Std of the heading prior applied when the first heading sample arrives.
  double init_heading_std = 10.0 * M_PI / 180.0;
};

// Low-variance resampling: n_out selections from positions
// offset + m/n_out over the cumulative weights, offset in [0, 1/n_out).
// Guarantees per-particle copy counts in {floor(n*w), ceil(n*w)}.
std::vector<std::size_t> systematic_resample_indices(const std::vector<double>& weights,
                                                     std::size_t n_out, double offset);

enum class CorrectionOutcome {
  Applied,   // weights updated and normalized
  Skipped,   // scan unusable; tracker unchanged
  Reset,     // every likelihood underflowed; weights reset to uniform
};

// Recursive particle filter over pose: predict from dead reckoning, correct
// with the WKNN observation likelihood, resample on low ESS. Single-owner
// mutable state; one seeded RNG stream per tracker, so equal
// (seed, log, config) replays produce identical trajectories.
class Tracker {
 public:
  Tracker(const FilterConfig& filter_cfg, const MotionConfig& motion_cfg,
          std::shared_ptr<const ObservationModel> model, std::uint64_t seed);

  // Propagates every particle by the dead-reckoning delta. The first input
  // only anchors the step counter and re-draws particle headings around its
  // heading sample (init_heading_std). Throws LogError on out-of-order input.
  void predict(const DeadReckoningInput& u);

  // Multiplies weights by the per-particle likelihood against the scan's
  // shared anchor list, then normalizes.
  CorrectionOutcome correct(const WifiScan& scan);

  // Systematic resampling when ESS < threshold * N. Returns whether it ran.
  bool maybe_resample();

  // Weighted mean position; heading is the circular weighted mean.
  Pose estimate() const;

  // Log-record dispatch: STEP -> predict, WIFI -> correct (estimate is taken
  // before resampling), GT -> ignored (returns nullopt).
  std::optional<Pose> step(const Measurement& m);

  // Zero-mean Gaussian random-walk prediction; stands in for the motion
  // model when tracking from Wifi alone.
  void diffuse(double sigma_m, double timestamp);

  const std::vector<Particle>& particles() const { return particles_; }
  // Timestamp the current state estimate refers to (last prediction time);
  // NaN until the first measurement.
  double state_time() const { return state_time_; }
  double effective_sample_size() const;

  std::size_t corrections() const { return corrections_; }
  std::size_t skipped_scans() const { return skipped_scans_; }
  std::size_t divergence_resets() const { return divergence_resets_; }
  std::size_t resamples() const { return resamples_; }

 private:
  void reset_uniform_weights();
  void check_order(double timestamp, const char* what);

  FilterConfig filter_cfg_;
  MotionConfig motion_cfg_;
  std::shared_ptr<const ObservationModel> model_;
  std::vector<Particle> particles_;
  std::optional<DeadReckoningInput> last_dr_;
  double state_time_;
  double last_input_time_;
  std::mt19937_64 rng_;

  std::size_t corrections_ = 0;
  std::size_t skipped_scans_ = 0;
  std::size_t divergence_resets_ = 0;
  std::size_t resamples_ = 0;
};

}  // namespace seqloc

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqloc/baseline.hpp"
#include "seqloc/config.hpp"
#include "seqloc/seqmap.hpp"
#include "seqloc/simulator.hpp"
#include "seqloc/types.hpp"

namespace seqloc {

// Splitmix-style stream derivation so related runs (sweep reps, survey vs
// walk) get decorrelated seeds from one base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

enum class TrackMode {
  Fused,     // dead reckoning + sequence observations
  WifiOnly,  // random-walk prediction + sequence observations
  ImuOnly,   // dead reckoning alone
  Baseline,  // dead reckoning + surveyed cosine observations
};

TrackMode parse_track_mode(const std::string& name);
std::string track_mode_name(TrackMode mode);

// Piecewise-linear interpolation over the log's truth fixes. Queries outside
// the fixes' time span return nullopt.
class GroundTruthTrack {
 public:
  explicit GroundTruthTrack(const std::vector<Measurement>& log);

  std::optional<Point2D> at(double t) const;
  bool empty() const { return fixes_.empty(); }
  const std::vector<GroundTruthFix>& fixes() const { return fixes_; }

 private:
  std::vector<GroundTruthFix> fixes_;
};

// One pose estimate, emitted after each processed log record.
struct TrackRow {
  double t = 0.0;      // time the estimate refers to (tracker state time)
  char source = 'S';   // 'S' step, 'W' wifi
  Pose estimate;
  std::optional<Point2D> gt;
  std::optional<double> error_m;
};

struct ErrorSummary {
  std::size_t count = 0;  // rows with ground truth
  double mean_m = 0.0;
  double median_m = 0.0;
  double p90_m = 0.0;
  // Empirical error CDF sampled at quantiles 0.05, 0.10, ..., 1.00.
  std::vector<std::pair<double, double>> cdf;
};

ErrorSummary summarize_rows(const std::vector<TrackRow>& rows);

// Wall-clock cost of integrating one Wifi measurement (likelihood update
// plus any resampling). Kept out of the deterministic report body.
struct TimingStats {
  std::size_t updates = 0;
  double mean_ms = 0.0;
  double max_ms = 0.0;
};

struct TrackReport {
  std::string mode;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::size_t n_steps = 0;
  std::size_t n_scans = 0;
  std::size_t n_skipped_scans = 0;
  std::size_t n_divergence_resets = 0;
  std::size_t n_resamples = 0;
  std::size_t n_rows_without_gt = 0;
  std::vector<TrackRow> rows;
  ErrorSummary summary;
  TimingStats timing;
};

struct TrackInputs {
  const FingerprintMap* map = nullptr;                // fused and wifi-only
  const RssFingerprintMap* fingerprints = nullptr;    // baseline
};

// Replays a measurement log through one tracker and scores it against the
// embedded ground truth. Deterministic given (inputs, log, cfg, mode, seed),
// except for the timing block.
TrackReport run_track(const TrackInputs& inputs, const std::vector<Measurement>& log,
                      const EngineConfig& cfg, TrackMode mode, std::uint64_t seed);

// Deterministic serialization: everything except timing, which goes to its
// own sidecar document so identical runs produce identical report bytes.
std::string report_to_json(const TrackReport& report);
TrackReport report_from_json(const std::string& text);
std::string timing_to_json(const TimingStats& timing);
std::string rows_to_csv(const TrackReport& report);

// Parameters sweep() knows how to vary.
extern const char* const kSweepParameters[8];

struct SweepOptions {
  std::size_t reps = 5;
  TrackMode mode = TrackMode::Fused;
  std::uint64_t base_seed = 1;
  std::size_t survey_points = 41;     // baseline mode only
  double survey_duration_s = 180.0;   // baseline mode only
};

struct SweepPoint {
  std::string parameter;
  double value = 0.0;
  std::vector<double> rep_errors;  // mean error per repetition, meters
  double mean_error_m = 0.0;
  double std_error_m = 0.0;  // sample std over repetitions
};

// Runs reps independent scenarios per value. Repetition r uses the same
// scenario seed for every value, so points are paired across values.
std::vector<SweepPoint> sweep(const std::string& parameter, const std::vector<double>& values,
                              const EngineConfig& base, const Scenario& scenario,
                              const SweepOptions& opt);

std::string sweep_to_csv(const std::vector<SweepPoint>& points);

}  // namespace seqloc

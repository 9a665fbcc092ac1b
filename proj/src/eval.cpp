#include "seqloc/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <memory>

#include "json.hpp"
#include "seqloc/filter.hpp"
#include "seqloc/observation.hpp"

namespace seqloc {

using ordered_json = nlohmann::ordered_json;

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TrackMode parse_track_mode(const std::string& name) {
  if (name == "fused") return TrackMode::Fused;
  if (name == "wifi") return TrackMode::WifiOnly;
  if (name == "imu") return TrackMode::ImuOnly;
  if (name == "baseline") return TrackMode::Baseline;
  throw ConfigError("unknown mode '" + name + "' (fused|wifi|imu|baseline)");
}

std::string track_mode_name(TrackMode mode) {
  switch (mode) {
    case TrackMode::Fused: return "fused";
    case TrackMode::WifiOnly: return "wifi";
    case TrackMode::ImuOnly: return "imu";
    case TrackMode::Baseline: return "baseline";
  }
  throw ConfigError("unknown track mode");
}

GroundTruthTrack::GroundTruthTrack(const std::vector<Measurement>& log) {
  for (const auto& m : log) {
    if (const auto* fix = std::get_if<GroundTruthFix>(&m)) fixes_.push_back(*fix);
  }
}

std::optional<Point2D> GroundTruthTrack::at(double t) const {
  constexpr double kEps = 1e-9;
  if (fixes_.empty()) return std::nullopt;
  if (t < fixes_.front().timestamp - kEps || t > fixes_.back().timestamp + kEps) {
    return std::nullopt;
  }
  const auto it = std::lower_bound(
      fixes_.begin(), fixes_.end(), t,
      [](const GroundTruthFix& f, double query) { return f.timestamp < query; });
  if (it == fixes_.end()) return fixes_.back().position;
  if (it == fixes_.begin()) return it->position;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double dt = hi.timestamp - lo.timestamp;
  if (dt <= 0.0) return hi.position;
  const double u = (t - lo.timestamp) / dt;
  return Point2D{lo.position.x + u * (hi.position.x - lo.position.x),
                 lo.position.y + u * (hi.position.y - lo.position.y)};
}

namespace {

double quantile(const std::vector<double>& sorted, double p) {
  const auto n = sorted.size();
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  const std::size_t idx = rank == 0 ? 0 : std::min(rank - 1, n - 1);
  return sorted[idx];
}

InitRegion resolve_init_region(const EngineConfig& cfg, const TrackInputs& inputs,
                               const GroundTruthTrack& gt) {
  switch (cfg.init_mode) {
    case InitMode::MapBounds: {
      if (inputs.map) return inputs.map->bounds;
      if (inputs.fingerprints && !inputs.fingerprints->points.empty()) {
        Rect r{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
        for (const auto& fp : inputs.fingerprints->points) {
          r.min_x = std::min(r.min_x, fp.location.x);
          r.min_y = std::min(r.min_y, fp.location.y);
          r.max_x = std::max(r.max_x, fp.location.x);
          r.max_y = std::max(r.max_y, fp.location.y);
        }
        return r;
      }
      throw ConfigError("init_mode=bounds needs a map or a survey");
    }
    case InitMode::InitRect:
      return cfg.init_rect;
    case InitMode::InitDisc:
      return Disc{cfg.init_center, cfg.init_radius};
    case InitMode::GtStart: {
      if (gt.empty()) throw ConfigError("init_mode=gt_start needs truth fixes in the log");
      return Disc{gt.fixes().front().position, cfg.init_radius};
    }
  }
  throw ConfigError("unknown init mode");
}

std::shared_ptr<const ObservationModel> make_model(const EngineConfig& cfg,
                                                   const TrackInputs& inputs, TrackMode mode) {
  switch (mode) {
    case TrackMode::Fused:
    case TrackMode::WifiOnly:
      if (!inputs.map) throw ConfigError(track_mode_name(mode) + " mode needs a fingerprint map");
      return std::make_shared<SequenceModel>(inputs.map, cfg.observation);
    case TrackMode::Baseline:
      if (!inputs.fingerprints) throw ConfigError("baseline mode needs a survey");
      return std::make_shared<CosineModel>(inputs.fingerprints, cfg.observation);
    case TrackMode::ImuOnly:
      return nullptr;
  }
  throw ConfigError("unknown track mode");
}

}  // namespace

ErrorSummary summarize_rows(const std::vector<TrackRow>& rows) {
  std::vector<double> errors;
  errors.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.error_m) errors.push_back(*row.error_m);
  }
  ErrorSummary s;
  s.count = errors.size();
  if (errors.empty()) {
    s.mean_m = s.median_m = s.p90_m = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  std::sort(errors.begin(), errors.end());
  double sum = 0.0;
  for (double e : errors) sum += e;
  s.mean_m = sum / static_cast<double>(errors.size());
  s.median_m = quantile(errors, 0.5);
  s.p90_m = quantile(errors, 0.9);
  s.cdf.reserve(20);
  for (int i = 1; i <= 20; ++i) {
    const double q = static_cast<double>(i) / 20.0;
    s.cdf.emplace_back(q, quantile(errors, q));
  }
  return s;
}

TrackReport run_track(const TrackInputs& inputs, const std::vector<Measurement>& log,
                      const EngineConfig& cfg, TrackMode mode, std::uint64_t seed) {
  const GroundTruthTrack gt(log);
  Tracker tracker(make_filter_config(cfg, resolve_init_region(cfg, inputs, gt)), cfg.motion,
                  make_model(cfg, inputs, mode), seed);

  TrackReport report;
  report.mode = track_mode_name(mode);
  report.seed = seed;
  report.config = config_echo(cfg);

  using Clock = std::chrono::steady_clock;
  double total_ms = 0.0;

  auto emit = [&](char source) {
    TrackRow row;
    row.t = tracker.state_time();
    if (std::isnan(row.t)) return;
    row.source = source;
    row.estimate = tracker.estimate();
    row.gt = gt.at(row.t);
    if (row.gt) {
      row.error_m = distance({row.estimate.x, row.estimate.y}, *row.gt);
    } else {
      ++report.n_rows_without_gt;
    }
    report.rows.push_back(std::move(row));
  };

  for (const auto& m : log) {
    if (std::holds_alternative<GroundTruthFix>(m)) continue;
    if (const auto* dr = std::get_if<DeadReckoningInput>(&m)) {
      if (mode == TrackMode::WifiOnly) continue;
      tracker.predict(*dr);
      ++report.n_steps;
      emit('S');
      continue;
    }
    const auto& scan = std::get<WifiScan>(m);
    if (mode == TrackMode::ImuOnly) continue;
    if (mode == TrackMode::WifiOnly) tracker.diffuse(cfg.random_walk_sigma, scan.timestamp);

    const auto t0 = Clock::now();
    const auto outcome = tracker.correct(scan);
    const auto t1 = Clock::now();
    ++report.n_scans;
    emit('W');
    const auto t2 = Clock::now();
    tracker.maybe_resample();
    const auto t3 = Clock::now();
    if (outcome != CorrectionOutcome::Skipped) {
      const double ms = std::chrono::duration<double, std::milli>((t1 - t0) + (t3 - t2)).count();
      ++report.timing.updates;
      total_ms += ms;
      report.timing.max_ms = std::max(report.timing.max_ms, ms);
    }
  }
  if (report.timing.updates > 0) {
    report.timing.mean_ms = total_ms / static_cast<double>(report.timing.updates);
  }
  report.n_skipped_scans = tracker.skipped_scans();
  report.n_divergence_resets = tracker.divergence_resets();
  report.n_resamples = tracker.resamples();
  report.summary = summarize_rows(report.rows);
  return report;
}

namespace {

ordered_json summary_to_json(const ErrorSummary& s) {
  ordered_json j;
  j["count"] = s.count;
  j["mean_m"] = s.mean_m;
  j["median_m"] = s.median_m;
  j["p90_m"] = s.p90_m;
  ordered_json cdf = ordered_json::array();
  for (const auto& [q, e] : s.cdf) cdf.push_back(ordered_json::array({q, e}));
  j["cdf"] = std::move(cdf);
  return j;
}

double json_number(const ordered_json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw LogError(std::string("report: missing field '") + key + "'");
  if (it->is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!it->is_number()) throw LogError(std::string("report: field '") + key + "' not a number");
  return it->get<double>();
}

}  // namespace

std::string report_to_json(const TrackReport& report) {
  ordered_json j;
  j["mode"] = report.mode;
  j["seed"] = report.seed;
  ordered_json config = ordered_json::object();
  for (const auto& [key, value] : report.config) config[key] = value;
  j["config"] = std::move(config);
  ordered_json counts;
  counts["rows"] = report.rows.size();
  counts["steps"] = report.n_steps;
  counts["scans"] = report.n_scans;
  counts["skipped_scans"] = report.n_skipped_scans;
  counts["divergence_resets"] = report.n_divergence_resets;
  counts["resamples"] = report.n_resamples;
  counts["rows_without_gt"] = report.n_rows_without_gt;
  j["counts"] = std::move(counts);
  j["summary"] = summary_to_json(report.summary);
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["t"] = row.t;
    r["src"] = std::string(1, row.source);
    r["x"] = row.estimate.x;
    r["y"] = row.estimate.y;
    r["theta"] = row.estimate.theta;
    if (row.gt) {
      r["gt_x"] = row.gt->x;
      r["gt_y"] = row.gt->y;
      r["error_m"] = row.error_m ? ordered_json(*row.error_m) : ordered_json();
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

TrackReport report_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw LogError("report: invalid JSON");
  TrackReport report;
  report.mode = j.value("mode", std::string());
  report.seed = j.value("seed", std::uint64_t{0});
  if (const auto it = j.find("config"); it != j.end() && it->is_object()) {
    for (const auto& [key, value] : it->items()) {
      report.config.emplace_back(key, value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  if (const auto it = j.find("counts"); it != j.end() && it->is_object()) {
    report.n_steps = it->value("steps", std::size_t{0});
    report.n_scans = it->value("scans", std::size_t{0});
    report.n_skipped_scans = it->value("skipped_scans", std::size_t{0});
    report.n_divergence_resets = it->value("divergence_resets", std::size_t{0});
    report.n_resamples = it->value("resamples", std::size_t{0});
    report.n_rows_without_gt = it->value("rows_without_gt", std::size_t{0});
  }
  if (const auto it = j.find("summary"); it != j.end() && it->is_object()) {
    report.summary.count = it->value("count", std::size_t{0});
    report.summary.mean_m = json_number(*it, "mean_m");
    report.summary.median_m = json_number(*it, "median_m");
    report.summary.p90_m = json_number(*it, "p90_m");
    if (const auto cdf = it->find("cdf"); cdf != it->end() && cdf->is_array()) {
      for (const auto& pair : *cdf) {
        if (pair.is_array() && pair.size() == 2) {
          report.summary.cdf.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
      }
    }
  }
  const auto rows_it = j.find("rows");
  if (rows_it == j.end() || !rows_it->is_array()) throw LogError("report: missing 'rows'");
  for (const auto& r : *rows_it) {
    TrackRow row;
    row.t = json_number(r, "t");
    const std::string src = r.value("src", std::string("S"));
    row.source = src.empty() ? 'S' : src[0];
    row.estimate.x = json_number(r, "x");
    row.estimate.y = json_number(r, "y");
    row.estimate.theta = json_number(r, "theta");
    if (r.contains("gt_x")) {
      row.gt = Point2D{json_number(r, "gt_x"), json_number(r, "gt_y")};
      row.error_m = json_number(r, "error_m");
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string timing_to_json(const TimingStats& timing) {
  ordered_json j;
  j["updates"] = timing.updates;
  j["mean_ms"] = timing.mean_ms;
  j["max_ms"] = timing.max_ms;
  return j.dump(2) + "\n";
}

std::string rows_to_csv(const TrackReport& report) {
  std::string out = "t,src,x,y,theta,gt_x,gt_y,error_m\n";
  for (const auto& row : report.rows) {
    out += format_double(row.t);
    out += ',';
    out += row.source;
    out += ',';
    out += format_double(row.estimate.x);
    out += ',';
    out += format_double(row.estimate.y);
    out += ',';
    out += format_double(row.estimate.theta);
    out += ',';
    if (row.gt) {
      out += format_double(row.gt->x);
      out += ',';
      out += format_double(row.gt->y);
      out += ',';
      out += format_double(row.error_m.value());
    } else {
      out += ",,";
    }
    out += '\n';
  }
  return out;
}

const char* const kSweepParameters[8] = {"n_particles", "k",       "lambda",
                                         "step_length", "sigma_d", "sigma_theta",
                                         "grid_size",   "wifi_keep_every"};

namespace {

std::size_t positive_count(double v, const std::string& parameter) {
  if (v < 1.0 || v != std::floor(v)) {
    throw ConfigError("sweep: " + parameter + " values must be positive integers");
  }
  return static_cast<std::size_t>(v);
}

// Returns the decimation factor (1 = keep every scan).
std::size_t apply_parameter(EngineConfig& cfg, const std::string& parameter, double v) {
  if (parameter == "n_particles") {
    cfg.n_particles = positive_count(v, parameter);
  } else if (parameter == "k") {
    cfg.observation.k = positive_count(v, parameter);
  } else if (parameter == "lambda") {
    cfg.observation.lambda = v;
  } else if (parameter == "step_length") {
    cfg.motion.step_length_m = v;
  } else if (parameter == "sigma_d") {
    cfg.motion.sigma_d = v;
  } else if (parameter == "sigma_theta") {
    cfg.motion.sigma_theta = v;
  } else if (parameter == "grid_size") {
    if (v <= 0.0) throw ConfigError("sweep: grid_size values must be positive");
    cfg.grid_size = v;
  } else if (parameter == "wifi_keep_every") {
    return positive_count(v, parameter);
  } else {
    throw ConfigError("sweep: unknown parameter '" + parameter + "'");
  }
  return 1;
}

}  // namespace

std::vector<SweepPoint> sweep(const std::string& parameter, const std::vector<double>& values,
                              const EngineConfig& base, const Scenario& scenario,
                              const SweepOptions& opt) {
  if (values.empty()) throw ConfigError("sweep: no values given");
  if (opt.reps == 0) throw ConfigError("sweep: reps must be positive");
  if (std::find(std::begin(kSweepParameters), std::end(kSweepParameters), std::string(parameter)) ==
      std::end(kSweepParameters)) {
    throw ConfigError("sweep: unknown parameter '" + parameter + "'");
  }

  // Repetition r reuses one simulated world across all values, so value
  // comparisons are paired.
  std::vector<std::vector<Measurement>> logs;
  std::vector<RssFingerprintMap> surveys;
  logs.reserve(opt.reps);
  for (std::size_t r = 0; r < opt.reps; ++r) {
    Scenario scen = scenario;
    scen.seed = derive_seed(scenario.seed, r);
    logs.push_back(generate(scen));
    if (opt.mode == TrackMode::Baseline) {
      surveys.push_back(
          survey(scen, survey_grid(scen.bounds, opt.survey_points), opt.survey_duration_s));
    }
  }

  std::map<double, FingerprintMap> maps;  // keyed by grid size
  const auto map_for = [&](double grid) -> const FingerprintMap& {
    auto it = maps.find(grid);
    if (it == maps.end()) {
      it = maps.emplace(grid, build_map(scenario.bounds, grid, scenario.aps)).first;
    }
    return it->second;
  };

  std::vector<SweepPoint> points;
  points.reserve(values.size());
  for (double v : values) {
    SweepPoint point;
    point.parameter = parameter;
    point.value = v;
    point.rep_errors.reserve(opt.reps);
    for (std::size_t r = 0; r < opt.reps; ++r) {
      EngineConfig cfg = base;
      const std::size_t keep_every = apply_parameter(cfg, parameter, v);
      std::vector<Measurement> decimated;
      const std::vector<Measurement>* log = &logs[r];
      if (keep_every > 1) {
        decimated = decimate(logs[r], keep_every);
        log = &decimated;
      }

      TrackInputs inputs;
      inputs.map = &map_for(cfg.grid_size);
      if (opt.mode == TrackMode::Baseline) inputs.fingerprints = &surveys[r];

      const auto report =
          run_track(inputs, *log, cfg, opt.mode, derive_seed(opt.base_seed, 0x1000 + r));
      point.rep_errors.push_back(report.summary.mean_m);
    }
    double sum = 0.0;
    for (double e : point.rep_errors) sum += e;
    point.mean_error_m = sum / static_cast<double>(point.rep_errors.size());
    double var = 0.0;
    for (double e : point.rep_errors) {
      const double d = e - point.mean_error_m;
      var += d * d;
    }
    point.std_error_m = point.rep_errors.size() > 1
                            ? std::sqrt(var / static_cast<double>(point.rep_errors.size() - 1))
                            : 0.0;
    points.push_back(std::move(point));
  }
  return points;
}

std::string sweep_to_csv(const std::vector<SweepPoint>& points) {
  std::string out = "parameter,value,reps,mean_error_m,std_error_m\n";
  for (const auto& p : points) {
    out += p.parameter;
    out += ',';
    out += format_double(p.value);
    out += ',';
    out += std::to_string(p.rep_errors.size());
    out += ',';
    out += format_double(p.mean_error_m);
    out += ',';
    out += format_double(p.std_error_m);
    out += '\n';
  }
  return out;
}

}  // namespace seqloc

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "seqloc/eval.hpp"
#include "seqloc/io.hpp"

namespace {

using seqloc::EngineConfig;
using seqloc::Scenario;

Scenario scenario_or_default(const std::string& path) {
  return path.empty() ? seqloc::default_scenario() : seqloc::load_scenario(path);
}

EngineConfig config_or_default(const std::string& path) {
  return path.empty() ? EngineConfig{} : seqloc::load_config(path);
}

void print_summary_line(const seqloc::TrackReport& r) {
  std::cout << "mode=" << r.mode << " seed=" << r.seed << " rows=" << r.rows.size()
            << " with_gt=" << r.summary.count
            << " mean=" << seqloc::format_double(r.summary.mean_m) << "m"
            << " median=" << seqloc::format_double(r.summary.median_m) << "m"
            << " p90=" << seqloc::format_double(r.summary.p90_m) << "m"
            << " update_mean=" << seqloc::format_double(r.timing.mean_ms) << "ms\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Sequence-based indoor positioning: simulate, map, track, evaluate"};
  app.require_subcommand(1);

  std::string config_path;
  std::string scenario_path;
  std::string out_path;
  std::string mode_name = "fused";
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* cmd, bool with_mode) {
    cmd->add_option("--config", config_path, "flat key=value engine config");
    cmd->add_option("--seed", seed, "seed override");
    cmd->add_option("--out", out_path, "output file path");
    if (with_mode) {
      cmd->add_option("--mode", mode_name, "fused|wifi|imu|baseline")
          ->check(CLI::IsMember({"fused", "wifi", "imu", "baseline"}));
    }
  };

  // build-map
  auto* cmd_map = app.add_subcommand("build-map", "grid the scenario's AP geometry into a map");
  cmd_map->add_option("--scenario", scenario_path, "scenario file (default: built-in)");
  add_common(cmd_map, false);

  // simulate
  auto* cmd_sim = app.add_subcommand("simulate", "generate a measurement log with ground truth");
  cmd_sim->add_option("--scenario", scenario_path, "scenario file (default: built-in)");
  std::string save_scenario_path;
  cmd_sim->add_option("--save-scenario", save_scenario_path,
                      "also write the scenario actually used");
  add_common(cmd_sim, false);

  // survey
  auto* cmd_survey = app.add_subcommand("survey", "simulate an RSS site survey for the baseline");
  cmd_survey->add_option("--scenario", scenario_path, "scenario file (default: built-in)");
  std::size_t survey_points = 41;
  double survey_duration = 180.0;
  cmd_survey->add_option("--points", survey_points, "number of dwell locations");
  cmd_survey->add_option("--duration", survey_duration, "dwell seconds per location");
  add_common(cmd_survey, false);

  // track
  auto* cmd_track = app.add_subcommand("track", "replay a log through the tracker");
  std::string log_path;
  std::string map_path;
  std::string fingerprints_path;
  std::string csv_path;
  std::string timing_path;
  cmd_track->add_option("--log", log_path, "measurement log (JSON lines)")->required();
  cmd_track->add_option("--map", map_path, "fingerprint map (fused/wifi modes)");
  cmd_track->add_option("--fingerprints", fingerprints_path, "survey file (baseline mode)");
  cmd_track->add_option("--csv", csv_path, "also write per-row CSV");
  cmd_track->add_option("--timing-out", timing_path,
                        "timing sidecar path (default: <out>.timing.json)");
  add_common(cmd_track, true);

  // sweep
  auto* cmd_sweep = app.add_subcommand("sweep", "vary one parameter over repeated scenarios");
  std::string parameter;
  std::vector<double> values;
  std::size_t reps = 5;
  cmd_sweep->add_option("--parameter", parameter, "parameter name")->required();
  cmd_sweep->add_option("--values", values, "comma-separated values")
      ->required()
      ->delimiter(',');
  cmd_sweep->add_option("--reps", reps, "repetitions per value");
  cmd_sweep->add_option("--scenario", scenario_path, "scenario file (default: built-in)");
  add_common(cmd_sweep, true);

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "check a report's summary against its rows");
  std::string report_path;
  cmd_eval->add_option("--report", report_path, "track report JSON")->required();

  CLI11_PARSE(app, argc, argv);

  if (cmd_map->parsed()) {
    const Scenario scen = scenario_or_default(scenario_path);
    const EngineConfig cfg = config_or_default(config_path);
    const auto map = seqloc::build_map(scen.bounds, cfg.grid_size, scen.aps);
    const std::string text = seqloc::map_to_json(map);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      seqloc::write_text_file(out_path, text);
      std::cout << "map: " << map.nx << "x" << map.ny << " cells, " << map.aps.size()
                << " APs -> " << out_path << "\n";
    }
    return 0;
  }

  if (cmd_sim->parsed()) {
    Scenario scen = scenario_or_default(scenario_path);
    if (seed) scen.seed = *seed;
    const auto log = seqloc::generate(scen);
    if (!save_scenario_path.empty()) seqloc::save_scenario(save_scenario_path, scen);
    if (out_path.empty()) {
      std::cout << seqloc::log_to_string(log);
    } else {
      seqloc::save_log(out_path, log);
      std::cout << "log: " << log.size() << " records -> " << out_path << "\n";
    }
    return 0;
  }

  if (cmd_survey->parsed()) {
    Scenario scen = scenario_or_default(scenario_path);
    if (seed) scen.seed = *seed;
    const auto fps =
        seqloc::survey(scen, seqloc::survey_grid(scen.bounds, survey_points), survey_duration);
    const std::string text = seqloc::fingerprints_to_json(fps);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      seqloc::write_text_file(out_path, text);
      std::cout << "survey: " << fps.points.size() << " points, " << fps.scans_per_point
                << " scans each -> " << out_path << "\n";
    }
    return 0;
  }

  if (cmd_track->parsed()) {
    const EngineConfig cfg = config_or_default(config_path);
    const auto mode = seqloc::parse_track_mode(mode_name);
    const auto log = seqloc::load_log(log_path);

    seqloc::FingerprintMap map;
    seqloc::RssFingerprintMap fingerprints;
    seqloc::TrackInputs inputs;
    if (!map_path.empty()) {
      map = seqloc::load_map(map_path);
      inputs.map = &map;
    }
    if (!fingerprints_path.empty()) {
      fingerprints = seqloc::load_fingerprints(fingerprints_path);
      inputs.fingerprints = &fingerprints;
    }

    const auto report = seqloc::run_track(inputs, log, cfg, mode, seed.value_or(1));
    print_summary_line(report);
    if (!out_path.empty()) {
      seqloc::write_text_file(out_path, seqloc::report_to_json(report));
      const std::string sidecar = timing_path.empty() ? out_path + ".timing.json" : timing_path;
      seqloc::write_text_file(sidecar, seqloc::timing_to_json(report.timing));
    } else if (!timing_path.empty()) {
      seqloc::write_text_file(timing_path, seqloc::timing_to_json(report.timing));
    }
    if (!csv_path.empty()) seqloc::write_text_file(csv_path, seqloc::rows_to_csv(report));
    return 0;
  }

  if (cmd_sweep->parsed()) {
    const Scenario scen = scenario_or_default(scenario_path);
    const EngineConfig cfg = config_or_default(config_path);
    seqloc::SweepOptions opt;
    opt.reps = reps;
    opt.mode = seqloc::parse_track_mode(mode_name);
    opt.base_seed = seed.value_or(1);
    const auto points = seqloc::sweep(parameter, values, cfg, scen, opt);
    const std::string csv = seqloc::sweep_to_csv(points);
    std::cout << csv;
    if (!out_path.empty()) seqloc::write_text_file(out_path, csv);
    return 0;
  }

  if (cmd_eval->parsed()) {
    const auto report = seqloc::report_from_json(seqloc::read_text_file(report_path));
    const auto recomputed = seqloc::summarize_rows(report.rows);
    const auto close = [](double a, double b) {
      if (std::isnan(a) && std::isnan(b)) return true;
      return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
    };
    bool ok = recomputed.count == report.summary.count &&
              close(recomputed.mean_m, report.summary.mean_m) &&
              close(recomputed.median_m, report.summary.median_m) &&
              close(recomputed.p90_m, report.summary.p90_m) &&
              recomputed.cdf.size() == report.summary.cdf.size();
    for (std::size_t i = 0; ok && i < recomputed.cdf.size(); ++i) {
      ok = close(recomputed.cdf[i].second, report.summary.cdf[i].second);
    }
    std::cout << "rows=" << report.rows.size() << " with_gt=" << recomputed.count
              << " mean=" << seqloc::format_double(recomputed.mean_m) << "m"
              << " median=" << seqloc::format_double(recomputed.median_m) << "m"
              << " p90=" << seqloc::format_double(recomputed.p90_m) << "m"
              << " summary_matches_rows=" << (ok ? "yes" : "no") << "\n";
    return ok ? 0 : 1;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    nlohmann::ordered_json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
}

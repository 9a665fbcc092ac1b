#include <sstream>

#include "doctest.h"
#include "seqloc/config.hpp"
#include "seqloc/io.hpp"
#include "seqloc/simulator.hpp"

using namespace seqloc;

TEST_CASE("log records serialize with the exact field layout") {
  std::vector<Measurement> log;
  log.push_back(WifiScan{12.0, {{1, -55.0}, {2, -61.5}}});
  log.push_back(DeadReckoningInput{12.5, 20, 1.5});
  log.push_back(GroundTruthFix{12.5, {4.0, 2.5}});
  CHECK(log_to_string(log) ==
        "{\"type\":\"WIFI\",\"t\":12.0,\"rss\":{\"1\":-55.0,\"2\":-61.5}}\n"
        "{\"type\":\"STEP\",\"t\":12.5,\"c\":20,\"alpha\":1.5}\n"
        "{\"type\":\"GT\",\"t\":12.5,\"x\":4.0,\"y\":2.5}\n");
}

TEST_CASE("log parsing round-trips a generated log") {
  Scenario s = default_scenario();
  s.path = {{1.0, 1.0}, {24.0, 1.0}, {24.0, 13.0}};
  const auto log = generate(s);
  std::istringstream in(log_to_string(log));
  const auto parsed = read_log(in);
  REQUIRE(parsed.size() == log.size());
  CHECK(log_to_string(parsed) == log_to_string(log));
}

TEST_CASE("log parser reports the offending line") {
  const auto error_of = [](const std::string& text) -> std::string {
    std::istringstream in(text);
    try {
      read_log(in);
      return {};
    } catch (const LogError& e) {
      return e.what();
    }
  };

  SUBCASE("invalid json") {
    const auto msg = error_of("{\"type\":\"GT\",\"t\":0,\"x\":1,\"y\":1}\nnot json\n");
    CHECK(msg.find("line 2") != std::string::npos);
  }
  SUBCASE("unknown type") {
    const auto msg = error_of("{\"type\":\"IMU\",\"t\":0}\n");
    CHECK(msg.find("line 1") != std::string::npos);
    CHECK(msg.find("IMU") != std::string::npos);
  }
  SUBCASE("missing field") {
    CHECK(error_of("{\"type\":\"STEP\",\"t\":0,\"c\":1}\n").find("alpha") != std::string::npos);
    CHECK(error_of("{\"type\":\"GT\",\"t\":0,\"x\":1}\n").find("'y'") != std::string::npos);
    CHECK(error_of("{\"type\":\"WIFI\",\"t\":0}\n").find("rss") != std::string::npos);
  }
  SUBCASE("bad step count") {
    CHECK(error_of("{\"type\":\"STEP\",\"t\":0,\"c\":1.5,\"alpha\":0}\n").find("'c'") !=
          std::string::npos);
    CHECK(error_of("{\"type\":\"STEP\",\"t\":0,\"c\":-1,\"alpha\":0}\n").find("'c'") !=
          std::string::npos);
  }
  SUBCASE("bad rss key") {
    const auto msg = error_of("{\"type\":\"WIFI\",\"t\":0,\"rss\":{\"ap1\":-50}}\n");
    CHECK(msg.find("ap1") != std::string::npos);
  }
  SUBCASE("timestamps must not decrease") {
    const auto msg = error_of(
        "{\"type\":\"GT\",\"t\":5,\"x\":1,\"y\":1}\n{\"type\":\"GT\",\"t\":4,\"x\":1,\"y\":1}\n");
    CHECK(msg.find("line 2") != std::string::npos);
  }
}

TEST_CASE("blank lines are allowed") {
  std::istringstream in("\n{\"type\":\"GT\",\"t\":0,\"x\":1,\"y\":2}\n\n");
  const auto log = read_log(in);
  REQUIRE(log.size() == 1);
  const auto& fix = std::get<GroundTruthFix>(log[0]);
  CHECK(fix.position.x == 1.0);
  CHECK(fix.position.y == 2.0);
}

TEST_CASE("wifi readings come back sorted by ap id") {
  std::istringstream in("{\"type\":\"WIFI\",\"t\":0,\"rss\":{\"10\":-50,\"2\":-60,\"7\":-55}}\n");
  const auto log = read_log(in);
  const auto& scan = std::get<WifiScan>(log.at(0));
  REQUIRE(scan.readings.size() == 3);
  CHECK(scan.readings[0].ap_id == 2);
  CHECK(scan.readings[1].ap_id == 7);
  CHECK(scan.readings[2].ap_id == 10);
}

TEST_CASE("map files round-trip") {
  const std::vector<AccessPoint> aps{
      {1, {0.0, 0.0}}, {2, {10.0, 0.0}}, {3, {0.0, 10.0}}, {4, {10.0, 10.0}}};
  const auto map = build_map({0.0, 0.0, 10.0, 10.0}, 3.0, aps);
  const auto loaded = map_from_json(map_to_json(map));
  CHECK(loaded.nx == map.nx);
  CHECK(loaded.ny == map.ny);
  CHECK(loaded.grid_size == map.grid_size);
  REQUIRE(loaded.cells.size() == map.cells.size());
  for (std::size_t i = 0; i < map.cells.size(); ++i) {
    CHECK(loaded.cells[i].sequence == map.cells[i].sequence);
    CHECK(loaded.cells[i].anchor.x == map.cells[i].anchor.x);
    CHECK(loaded.cells[i].anchor.y == map.cells[i].anchor.y);
  }
  CHECK(map_to_json(loaded) == map_to_json(map));
}

TEST_CASE("map files validate their shape") {
  CHECK_THROWS_AS(map_from_json("not json"), LogError);
  CHECK_THROWS_AS(map_from_json("{}"), LogError);
  // Cell count disagreeing with bounds/grid.
  const std::vector<AccessPoint> aps{{1, {0.0, 0.0}}, {2, {10.0, 0.0}}};
  auto text = map_to_json(build_map({0.0, 0.0, 10.0, 10.0}, 5.0, aps));
  const auto pos = text.find("\"grid_size\": 5.0");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 16, "\"grid_size\": 2.0");
  CHECK_THROWS_AS(map_from_json(text), LogError);
}

TEST_CASE("scenario files round-trip") {
  Scenario s = default_scenario();
  s.seed = 42;
  s.imu_noise.heading_bias_rad = 0.125;
  const Scenario loaded = scenario_from_json(scenario_to_json(s));
  CHECK(scenario_to_json(loaded) == scenario_to_json(s));
  CHECK(loaded.seed == 42);
  CHECK(loaded.aps.size() == s.aps.size());
  CHECK(loaded.path.size() == s.path.size());
  CHECK(loaded.imu_noise.heading_bias_rad == 0.125);
}

TEST_CASE("survey files round-trip as a plain array") {
  RssFingerprintMap map;
  map.points.push_back({{1.0, 2.0}, {{1, -50.5}, {3, -61.25}}});
  map.points.push_back({{4.0, 5.0}, {{1, -70.0}, {3, -40.0}}});
  const auto text = fingerprints_to_json(map);
  CHECK(text.front() == '[');
  const auto loaded = fingerprints_from_json(text);
  REQUIRE(loaded.points.size() == 2);
  CHECK(loaded.points[0].location.x == 1.0);
  CHECK(loaded.points[0].mean_rss[1].ap_id == 3);
  CHECK(loaded.points[0].mean_rss[1].rss_dbm == -61.25);
  CHECK(fingerprints_to_json(loaded) == text);
}

TEST_CASE("config text parses with defaults and overrides") {
  const EngineConfig defaults = parse_config_text("");
  CHECK(defaults.n_particles == 1000);
  CHECK(defaults.resample_threshold == 0.5);
  CHECK(defaults.observation.k == 4);
  CHECK(defaults.observation.lambda == 0.01);
  CHECK(defaults.observation.min_common_aps == 3);
  CHECK(defaults.motion.step_length_m == 0.7);
  CHECK(defaults.motion.sigma_d == 0.4);
  CHECK(defaults.motion.sigma_theta == 0.01);
  CHECK(defaults.random_walk_sigma == 0.5);
  CHECK(defaults.grid_size == 2.0);
  CHECK(defaults.init_mode == InitMode::MapBounds);

  const EngineConfig cfg = parse_config_text(
      "# tracker\n"
      "n_particles = 250\n"
      "lambda=0.5   # wide kernel\n"
      "init_mode=gt_start\n"
      "init_radius=0.25\n"
      "independent_xy_noise=true\n");
  CHECK(cfg.n_particles == 250);
  CHECK(cfg.observation.lambda == 0.5);
  CHECK(cfg.init_mode == InitMode::GtStart);
  CHECK(cfg.init_radius == 0.25);
  CHECK(cfg.motion.independent_xy_noise);
  // Untouched keys keep defaults.
  CHECK(cfg.observation.k == 4);
}

TEST_CASE("config errors carry line numbers") {
  const auto error_of = [](const std::string& text) -> std::string {
    try {
      parse_config_text(text);
      return {};
    } catch (const ConfigError& e) {
      return e.what();
    }
  };
  CHECK(error_of("n_particles=10\nbogus_key=1\n").find("line 2") != std::string::npos);
  CHECK(error_of("bogus_key=1\n").find("bogus_key") != std::string::npos);
  CHECK(error_of("lambda=abc\n").find("line 1") != std::string::npos);
  CHECK(error_of("n_particles=-5\n").find("line 1") != std::string::npos);
  CHECK(error_of("just a line\n").find("key=value") != std::string::npos);
  CHECK(error_of("lambda=\n").find("empty value") != std::string::npos);
}

TEST_CASE("config round-trips through its text form") {
  EngineConfig cfg;
  cfg.n_particles = 77;
  cfg.observation.lambda = 0.125;
  cfg.init_mode = InitMode::InitDisc;
  cfg.init_center = {3.5, -1.25};
  cfg.motion.sigma_theta_add = 0.01;
  const EngineConfig back = parse_config_text(config_to_text(cfg));
  CHECK(config_echo(back) == config_echo(cfg));
}

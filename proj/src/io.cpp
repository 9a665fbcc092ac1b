#include "seqloc/io.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace seqloc {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void line_error(std::size_t line_no, const std::string& what) {
  throw LogError("log line " + std::to_string(line_no) + ": " + what);
}

double require_number(const ordered_json& j, const char* key, std::size_t line_no) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    line_error(line_no, std::string("missing numeric field '") + key + "'");
  }
  return it->get<double>();
}

Measurement parse_record(const ordered_json& j, std::size_t line_no) {
  if (!j.is_object()) line_error(line_no, "record is not a JSON object");
  const auto type_it = j.find("type");
  if (type_it == j.end() || !type_it->is_string()) {
    line_error(line_no, "missing string field 'type'");
  }
  const std::string type = type_it->get<std::string>();
  const double t = require_number(j, "t", line_no);
  if (!std::isfinite(t)) line_error(line_no, "non-finite timestamp");

  if (type == "WIFI") {
    const auto rss_it = j.find("rss");
    if (rss_it == j.end() || !rss_it->is_object()) {
      line_error(line_no, "WIFI record needs an 'rss' object");
    }
    WifiScan scan;
    scan.timestamp = t;
    scan.readings.reserve(rss_it->size());
    for (const auto& [key, value] : rss_it->items()) {
      ApId id = 0;
      try {
        std::size_t consumed = 0;
        id = std::stoi(key, &consumed);
        if (consumed != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        line_error(line_no, "rss key '" + key + "' is not an AP id");
      }
      if (!value.is_number()) line_error(line_no, "rss value for '" + key + "' is not a number");
      scan.readings.push_back({id, value.get<double>()});
    }
    std::sort(scan.readings.begin(), scan.readings.end(),
              [](const RssReading& a, const RssReading& b) { return a.ap_id < b.ap_id; });
    for (std::size_t i = 0; i + 1 < scan.readings.size(); ++i) {
      if (scan.readings[i].ap_id == scan.readings[i + 1].ap_id) {
        line_error(line_no, "duplicate AP id in rss");
      }
    }
    return scan;
  }
  if (type == "STEP") {
    DeadReckoningInput dr;
    dr.timestamp = t;
    const double c = require_number(j, "c", line_no);
    if (c < 0.0 || c != std::floor(c)) line_error(line_no, "'c' must be a non-negative integer");
    dr.step_count = static_cast<long>(c);
    dr.heading = require_number(j, "alpha", line_no);
    if (!std::isfinite(dr.heading)) line_error(line_no, "non-finite heading");
    return dr;
  }
  if (type == "GT") {
    GroundTruthFix fix;
    fix.timestamp = t;
    fix.position.x = require_number(j, "x", line_no);
    fix.position.y = require_number(j, "y", line_no);
    return fix;
  }
  line_error(line_no, "unknown record type '" + type + "'");
}

ordered_json record_to_json(const Measurement& m) {
  ordered_json j;
  if (const auto* scan = std::get_if<WifiScan>(&m)) {
    j["type"] = "WIFI";
    j["t"] = scan->timestamp;
    ordered_json rss = ordered_json::object();
    for (const auto& r : scan->readings) rss[std::to_string(r.ap_id)] = r.rss_dbm;
    j["rss"] = std::move(rss);
  } else if (const auto* dr = std::get_if<DeadReckoningInput>(&m)) {
    j["type"] = "STEP";
    j["t"] = dr->timestamp;
    j["c"] = dr->step_count;
    j["alpha"] = dr->heading;
  } else {
    const auto& fix = std::get<GroundTruthFix>(m);
    j["type"] = "GT";
    j["t"] = fix.timestamp;
    j["x"] = fix.position.x;
    j["y"] = fix.position.y;
  }
  return j;
}

ordered_json parse_document(const std::string& text, const char* what) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw LogError(std::string(what) + ": invalid JSON");
  return j;
}

double get_number(const ordered_json& j, const char* key, const char* what) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw LogError(std::string(what) + ": missing numeric field '" + key + "'");
  }
  return it->get<double>();
}

Rect rect_from_json(const ordered_json& j, const char* what) {
  Rect r;
  r.min_x = get_number(j, "min_x", what);
  r.min_y = get_number(j, "min_y", what);
  r.max_x = get_number(j, "max_x", what);
  r.max_y = get_number(j, "max_y", what);
  return r;
}

ordered_json rect_to_json(const Rect& r) {
  ordered_json j;
  j["min_x"] = r.min_x;
  j["min_y"] = r.min_y;
  j["max_x"] = r.max_x;
  j["max_y"] = r.max_y;
  return j;
}

ordered_json aps_to_json(const std::vector<AccessPoint>& aps) {
  ordered_json arr = ordered_json::array();
  for (const auto& ap : aps) {
    ordered_json j;
    j["id"] = ap.id;
    j["x"] = ap.position.x;
    j["y"] = ap.position.y;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<AccessPoint> aps_from_json(const ordered_json& arr, const char* what) {
  if (!arr.is_array()) throw LogError(std::string(what) + ": 'aps' must be an array");
  std::vector<AccessPoint> aps;
  aps.reserve(arr.size());
  for (const auto& j : arr) {
    AccessPoint ap;
    ap.id = static_cast<ApId>(get_number(j, "id", what));
    ap.position.x = get_number(j, "x", what);
    ap.position.y = get_number(j, "y", what);
    aps.push_back(ap);
  }
  return aps;
}

RssVector rss_from_json(const ordered_json& obj, const char* what) {
  if (!obj.is_object()) throw LogError(std::string(what) + ": 'rss' must be an object");
  RssVector readings;
  readings.reserve(obj.size());
  for (const auto& [key, value] : obj.items()) {
    ApId id = 0;
    try {
      std::size_t consumed = 0;
      id = std::stoi(key, &consumed);
      if (consumed != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw LogError(std::string(what) + ": rss key '" + key + "' is not an AP id");
    }
    if (!value.is_number()) {
      throw LogError(std::string(what) + ": rss value for '" + key + "' is not a number");
    }
    readings.push_back({id, value.get<double>()});
  }
  std::sort(readings.begin(), readings.end(),
            [](const RssReading& a, const RssReading& b) { return a.ap_id < b.ap_id; });
  return readings;
}

}  // namespace

std::vector<Measurement> read_log(std::istream& in) {
  std::vector<Measurement> log;
  std::string line;
  std::size_t line_no = 0;
  double last_t = -std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) line_error(line_no, "invalid JSON");
    Measurement m = parse_record(j, line_no);
    const double t = measurement_time(m);
    if (t < last_t) line_error(line_no, "timestamp decreases");
    last_t = t;
    log.push_back(std::move(m));
  }
  return log;
}

std::vector<Measurement> load_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LogError("cannot open log file: " + path);
  return read_log(in);
}

void write_log(std::ostream& out, const std::vector<Measurement>& log) {
  for (const auto& m : log) out << record_to_json(m).dump() << '\n';
}

void save_log(const std::string& path, const std::vector<Measurement>& log) {
  std::ofstream out(path);
  if (!out) throw LogError("cannot write log file: " + path);
  write_log(out, log);
}

std::string log_to_string(const std::vector<Measurement>& log) {
  std::ostringstream out;
  write_log(out, log);
  return out.str();
}

std::string map_to_json(const FingerprintMap& map) {
  ordered_json j;
  j["bounds"] = rect_to_json(map.bounds);
  j["grid_size"] = map.grid_size;
  j["aps"] = aps_to_json(map.aps);
  ordered_json cells = ordered_json::array();
  for (const auto& cell : map.cells) {
    ordered_json c;
    c["cx"] = cell.anchor.x;
    c["cy"] = cell.anchor.y;
    c["sequence"] = cell.sequence;
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

FingerprintMap map_from_json(const std::string& text) {
  const ordered_json j = parse_document(text, "map file");
  const auto bounds_it = j.find("bounds");
  if (bounds_it == j.end()) throw LogError("map file: missing 'bounds'");

  // Rebuild the grid from bounds and grid size, then overlay the stored
  // cells so the file stays authoritative for the sequences.
  const Rect bounds = rect_from_json(*bounds_it, "map file");
  const double grid_size = get_number(j, "grid_size", "map file");
  const auto aps_it = j.find("aps");
  if (aps_it == j.end()) throw LogError("map file: missing 'aps'");
  FingerprintMap map = build_map(bounds, grid_size, aps_from_json(*aps_it, "map file"));

  const auto cells_it = j.find("cells");
  if (cells_it == j.end() || !cells_it->is_array()) throw LogError("map file: missing 'cells'");
  if (cells_it->size() != map.cells.size()) {
    throw LogError("map file: expected " + std::to_string(map.cells.size()) + " cells, got " +
                   std::to_string(cells_it->size()));
  }
  for (std::size_t i = 0; i < map.cells.size(); ++i) {
    const auto& c = (*cells_it)[i];
    map.cells[i].anchor.x = get_number(c, "cx", "map file");
    map.cells[i].anchor.y = get_number(c, "cy", "map file");
    const auto seq_it = c.find("sequence");
    if (seq_it == c.end() || !seq_it->is_array()) {
      throw LogError("map file: cell " + std::to_string(i) + " missing 'sequence'");
    }
    ApSequence seq;
    seq.reserve(seq_it->size());
    for (const auto& id : *seq_it) {
      if (!id.is_number_integer()) {
        throw LogError("map file: cell " + std::to_string(i) + " has a non-integer id");
      }
      seq.push_back(id.get<ApId>());
    }
    if (seq.size() != map.aps.size()) {
      throw LogError("map file: cell " + std::to_string(i) + " sequence length mismatch");
    }
    map.cells[i].sequence = std::move(seq);
  }
  return map;
}

void save_map(const std::string& path, const FingerprintMap& map) {
  write_text_file(path, map_to_json(map));
}

FingerprintMap load_map(const std::string& path) { return map_from_json(read_text_file(path)); }

std::string fingerprints_to_json(const RssFingerprintMap& map) {
  ordered_json arr = ordered_json::array();
  for (const auto& fp : map.points) {
    ordered_json j;
    j["x"] = fp.location.x;
    j["y"] = fp.location.y;
    ordered_json rss = ordered_json::object();
    for (const auto& r : fp.mean_rss) rss[std::to_string(r.ap_id)] = r.rss_dbm;
    j["rss"] = std::move(rss);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

RssFingerprintMap fingerprints_from_json(const std::string& text) {
  const ordered_json arr = parse_document(text, "survey file");
  if (!arr.is_array()) throw LogError("survey file: top level must be an array");
  RssFingerprintMap map;
  map.points.reserve(arr.size());
  for (const auto& j : arr) {
    RssFingerprint fp;
    fp.location.x = get_number(j, "x", "survey file");
    fp.location.y = get_number(j, "y", "survey file");
    const auto rss_it = j.find("rss");
    if (rss_it == j.end()) throw LogError("survey file: point missing 'rss'");
    fp.mean_rss = rss_from_json(*rss_it, "survey file");
    map.points.push_back(std::move(fp));
  }
  return map;
}

void save_fingerprints(const std::string& path, const RssFingerprintMap& map) {
  write_text_file(path, fingerprints_to_json(map));
}

RssFingerprintMap load_fingerprints(const std::string& path) {
  return fingerprints_from_json(read_text_file(path));
}

std::string scenario_to_json(const Scenario& s) {
  ordered_json j;
  j["bounds"] = rect_to_json(s.bounds);
  j["aps"] = aps_to_json(s.aps);
  ordered_json path = ordered_json::array();
  for (const auto& p : s.path) path.push_back(ordered_json::array({p.x, p.y}));
  j["path"] = std::move(path);
  j["speed_mps"] = s.speed_mps;
  j["wifi_rate_hz"] = s.wifi_rate_hz;
  j["step_cadence_hz"] = s.step_cadence_hz;
  j["path_loss"] = {{"p0_dbm", s.path_loss.p0_dbm},
                    {"gamma", s.path_loss.gamma},
                    {"sigma_shadow_db", s.path_loss.sigma_shadow_db}};
  j["imu_noise"] = {{"step_count_miss_prob", s.imu_noise.step_count_miss_prob},
                    {"heading_bias_rad", s.imu_noise.heading_bias_rad},
                    {"heading_noise_rad", s.imu_noise.heading_noise_rad}};
  j["seed"] = s.seed;
  return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  const ordered_json j = parse_document(text, "scenario file");
  Scenario s;
  const auto bounds_it = j.find("bounds");
  if (bounds_it == j.end()) throw LogError("scenario file: missing 'bounds'");
  s.bounds = rect_from_json(*bounds_it, "scenario file");
  const auto aps_it = j.find("aps");
  if (aps_it == j.end()) throw LogError("scenario file: missing 'aps'");
  s.aps = aps_from_json(*aps_it, "scenario file");
  const auto path_it = j.find("path");
  if (path_it == j.end() || !path_it->is_array()) {
    throw LogError("scenario file: missing 'path'");
  }
  s.path.clear();
  for (const auto& p : *path_it) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw LogError("scenario file: path entries must be [x, y]");
    }
    s.path.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  s.speed_mps = get_number(j, "speed_mps", "scenario file");
  s.wifi_rate_hz = get_number(j, "wifi_rate_hz", "scenario file");
  s.step_cadence_hz = get_number(j, "step_cadence_hz", "scenario file");
  if (const auto it = j.find("path_loss"); it != j.end()) {
    s.path_loss.p0_dbm = get_number(*it, "p0_dbm", "scenario file");
    s.path_loss.gamma = get_number(*it, "gamma", "scenario file");
    s.path_loss.sigma_shadow_db = get_number(*it, "sigma_shadow_db", "scenario file");
  }
  if (const auto it = j.find("imu_noise"); it != j.end()) {
    s.imu_noise.step_count_miss_prob = get_number(*it, "step_count_miss_prob", "scenario file");
    s.imu_noise.heading_bias_rad = get_number(*it, "heading_bias_rad", "scenario file");
    s.imu_noise.heading_noise_rad = get_number(*it, "heading_noise_rad", "scenario file");
  }
  if (const auto it = j.find("seed"); it != j.end() && it->is_number()) {
    s.seed = it->get<std::uint64_t>();
  }
  return s;
}

void save_scenario(const std::string& path, const Scenario& s) {
  write_text_file(path, scenario_to_json(s));
}

Scenario load_scenario(const std::string& path) {
  return scenario_from_json(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LogError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LogError("cannot write file: " + path);
  out << text;
}

}  // namespace seqloc

#include "seqloc/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>

#include "seqloc/io.hpp"

namespace seqloc {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& v, std::size_t line_no) {
  try {
    std::size_t consumed = 0;
    const double d = std::stod(v, &consumed);
    if (consumed != v.size()) throw std::invalid_argument(v);
    if (!std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    fail(line_no, "'" + v + "' is not a finite number");
  }
}

std::size_t parse_count(const std::string& v, std::size_t line_no) {
  const double d = parse_double(v, line_no);
  if (d < 0.0 || d != std::floor(d)) fail(line_no, "'" + v + "' is not a non-negative integer");
  return static_cast<std::size_t>(d);
}

bool parse_bool(const std::string& v, std::size_t line_no) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  fail(line_no, "'" + v + "' is not a boolean (use 0/1/true/false)");
}

}  // namespace

std::string init_mode_name(InitMode mode) {
  switch (mode) {
    case InitMode::MapBounds: return "bounds";
    case InitMode::InitRect: return "rect";
    case InitMode::InitDisc: return "disc";
    case InitMode::GtStart: return "gt_start";
  }
  throw ConfigError("unknown init mode");
}

InitMode parse_init_mode(const std::string& name) {
  if (name == "bounds") return InitMode::MapBounds;
  if (name == "rect") return InitMode::InitRect;
  if (name == "disc") return InitMode::InitDisc;
  if (name == "gt_start") return InitMode::GtStart;
  throw ConfigError("unknown init_mode '" + name + "' (bounds|rect|disc|gt_start)");
}

EngineConfig parse_config_text(const std::string& text) {
  EngineConfig cfg;
  using Setter = std::function<void(EngineConfig&, const std::string&, std::size_t)>;
  static const std::map<std::string, Setter> setters = {
      {"n_particles",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.n_particles = parse_count(v, n);
       }},
      {"resample_threshold",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.resample_threshold = parse_double(v, n);
       }},
      {"init_mode",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         try {
           c.init_mode = parse_init_mode(v);
         } catch (const ConfigError& e) {
           fail(n, e.what());
         }
       }},
      {"init_min_x",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.init_rect.min_x = parse_double(v, n);
       }},
      {"init_min_y",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.init_rect.min_y = parse_double(v, n);
       }},
      {"init_max_x",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.init_rect.max_x = parse_double(v, n);
       }},
      {"init_max_y",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.init_rect.max_y = parse_double(v, n);
       }},
      {"init_x",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.init_center.x = parse_double(v, n);
       }},
      {"init_y",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.init_center.y = parse_double(v, n);
       }},
      {"init_radius",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.init_radius = parse_double(v, n);
       }},
      {"init_heading_std_deg",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.init_heading_std_deg = parse_double(v, n);
       }},
      {"step_length",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.motion.step_length_m = parse_double(v, n);
       }},
      {"sigma_d",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.motion.sigma_d = parse_double(v, n);
       }},
      {"sigma_theta",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.motion.sigma_theta = parse_double(v, n);
       }},
      {"sigma_theta_add",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.motion.sigma_theta_add = parse_double(v, n);
       }},
      {"independent_xy_noise",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.motion.independent_xy_noise = parse_bool(v, n);
       }},
      {"k",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.observation.k = parse_count(v, n);
       }},
      {"lambda",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.observation.lambda = parse_double(v, n);
       }},
      {"min_common_aps",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.observation.min_common_aps = parse_count(v, n);
       }},
      {"random_walk_sigma",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.random_walk_sigma = parse_double(v, n);
       }},
      {"grid_size",
       [](EngineConfig& c, const std::string& v, std::size_t n) {
         c.grid_size = parse_double(v, n);
       }},
  };

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    ++line_no;
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;

    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "empty value for '" + key + "'");

    const auto it = setters.find(key);
    if (it == setters.end()) fail(line_no, "unknown key '" + key + "'");
    it->second(cfg, value, line_no);
  }
  return cfg;
}

EngineConfig load_config(const std::string& path) {
  return parse_config_text(read_text_file(path));
}

std::vector<std::pair<std::string, std::string>> config_echo(const EngineConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("n_particles", std::to_string(cfg.n_particles));
  out.emplace_back("resample_threshold", format_double(cfg.resample_threshold));
  out.emplace_back("init_mode", init_mode_name(cfg.init_mode));
  out.emplace_back("init_min_x", format_double(cfg.init_rect.min_x));
  out.emplace_back("init_min_y", format_double(cfg.init_rect.min_y));
  out.emplace_back("init_max_x", format_double(cfg.init_rect.max_x));
  out.emplace_back("init_max_y", format_double(cfg.init_rect.max_y));
  out.emplace_back("init_x", format_double(cfg.init_center.x));
  out.emplace_back("init_y", format_double(cfg.init_center.y));
  out.emplace_back("init_radius", format_double(cfg.init_radius));
  out.emplace_back("init_heading_std_deg", format_double(cfg.init_heading_std_deg));
  out.emplace_back("step_length", format_double(cfg.motion.step_length_m));
  out.emplace_back("sigma_d", format_double(cfg.motion.sigma_d));
  out.emplace_back("sigma_theta", format_double(cfg.motion.sigma_theta));
  out.emplace_back("sigma_theta_add", format_double(cfg.motion.sigma_theta_add));
  out.emplace_back("independent_xy_noise", cfg.motion.independent_xy_noise ? "1" : "0");
  out.emplace_back("k", std::to_string(cfg.observation.k));
  out.emplace_back("lambda", format_double(cfg.observation.lambda));
  out.emplace_back("min_common_aps", std::to_string(cfg.observation.min_common_aps));
  out.emplace_back("random_walk_sigma", format_double(cfg.random_walk_sigma));
  out.emplace_back("grid_size", format_double(cfg.grid_size));
  return out;
}

std::string config_to_text(const EngineConfig& cfg) {
  std::string out;
  for (const auto& [key, value] : config_echo(cfg)) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

FilterConfig make_filter_config(const EngineConfig& cfg, const InitRegion& region) {
  FilterConfig fc;
  fc.n_particles = cfg.n_particles;
  fc.resample_threshold = cfg.resample_threshold;
  fc.init_region = region;
  fc.init_heading_std = cfg.init_heading_std_deg * M_PI / 180.0;
  return fc;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace seqloc

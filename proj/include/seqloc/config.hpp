#pragma once

#include <string>
#include <utility>
#include <vector>

#include "seqloc/filter.hpp"
#include "seqloc/motion.hpp"
#include "seqloc/observation.hpp"
#include "seqloc/types.hpp"

namespace seqloc {

// How the particle cloud is seeded before the first measurement.
enum class InitMode {
  MapBounds,  // uniform over the fingerprint map bounds
  InitRect,   // uniform over an explicit rectangle
  InitDisc,   // uniform over an explicit disc
  GtStart,    // disc of init_radius around the log's first truth fix
};

// Everything a tracking run needs beyond the map and the log. Mirrors the
// flat key=value config file one to one.
struct EngineConfig {
  std::size_t n_particles = 1000;
  double resample_threshold = 0.5;
  InitMode init_mode = InitMode::MapBounds;
  Rect init_rect{0.0, 0.0, 0.0, 0.0};
  Point2D init_center{0.0, 0.0};
  double init_radius = 0.5;
  double init_heading_std_deg = 10.0;
  MotionConfig motion;
  ObservationConfig observation;
  double random_walk_sigma = 0.5;  // Wifi-only diffusion per scan, meters
  double grid_size = 2.0;          // map build default, meters
};

std::string init_mode_name(InitMode mode);
InitMode parse_init_mode(const std::string& name);

// Parses `key=value` lines; '#' starts a comment, blank lines are skipped.
// Unknown keys and malformed values raise ConfigError naming the line.
// Omitted keys keep their defaults.
EngineConfig parse_config_text(const std::string& text);
EngineConfig load_config(const std::string& path);

// Full round-trippable dump, one key=value per line, every key present.
std::string config_to_text(const EngineConfig& cfg);

// Same content as config_to_text, as ordered pairs for report embedding.
std::vector<std::pair<std::string, std::string>> config_echo(const EngineConfig& cfg);

// Assembles the filter config; the init region must already be resolved
// (InitMode is interpreted by the caller, which knows map bounds and GT).
FilterConfig make_filter_config(const EngineConfig& cfg, const InitRegion& region);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace seqloc

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "seqloc/baseline.hpp"
#include "seqloc/seqmap.hpp"
#include "seqloc/simulator.hpp"
#include "seqloc/types.hpp"

namespace seqloc {

// Measurement logs are JSON Lines, one record per line:
//   {"type":"WIFI","t":12.0,"rss":{"1":-55.0,"2":-61.5}}
//   {"type":"STEP","t":12.5,"c":20,"alpha":1.5707}
//   {"type":"GT","t":12.5,"x":4.0,"y":2.5}
// Parsing rejects unknown types, missing fields, and out-of-order
// timestamps; errors name the offending line.
std::vector<Measurement> read_log(std::istream& in);
std::vector<Measurement> load_log(const std::string& path);
void write_log(std::ostream& out, const std::vector<Measurement>& log);
void save_log(const std::string& path, const std::vector<Measurement>& log);
std::string log_to_string(const std::vector<Measurement>& log);

// Fingerprint maps serialize to a single self-describing JSON document: AP
// geometry, bounds, grid size, and the per-cell sequences.
std::string map_to_json(const FingerprintMap& map);
FingerprintMap map_from_json(const std::string& text);
void save_map(const std::string& path, const FingerprintMap& map);
FingerprintMap load_map(const std::string& path);

// Survey files are a JSON array of {x, y, rss:{ap_id: mean dBm}}.
std::string fingerprints_to_json(const RssFingerprintMap& map);
RssFingerprintMap fingerprints_from_json(const std::string& text);
void save_fingerprints(const std::string& path, const RssFingerprintMap& map);
RssFingerprintMap load_fingerprints(const std::string& path);

// Scenario files are one JSON document mirroring the Scenario struct.
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);
void save_scenario(const std::string& path, const Scenario& s);
Scenario load_scenario(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace seqloc

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "m2o/bounds.hpp"
#include "m2o/channel.hpp"
#include "m2o/layering.hpp"
#include "m2o/simulator.hpp"

namespace m2o {

/* Config ingestion and report serialization.
 *
 * Configs are JSON objects {"K": int, "gains": [K-1 numbers],
 * "powers": [K numbers]}. parse_config accepts either a filesystem path or
 * an inline JSON string (anything whose first non-space byte is '{').
 * Parse failures raise ConfigError with the byte offset reported by the
 * JSON parser; validation failures raise ConfigError naming each offending
 * field by JSON pointer.
 *
 * All numeric report output goes through JsonWriter, which prints numbers
 * with 12 significant digits ("%.12g"), the precision contract of every
 * emitted report. Key order is insertion order, so identical inputs yield
 * byte-identical reports.
 */

ChannelConfig parse_config(const std::string& path_or_json);
ChannelConfig parse_config_text(const std::string& json_text);

// FNV-1a 64-bit content hash of the canonical serialized config,
// "fnv1a64:" followed by 16 hex digits.
std::string config_digest(const ChannelConfig& config);

// Canonical JSON serialization of a config (12 significant digits).
std::string serialize_config(const ChannelConfig& config);

/* Provenance block embedded in every emitted report. The timestamp honors
 * SOURCE_DATE_EPOCH (seconds since the epoch, UTC) when set, so
 * reproducible environments get byte-identical reports; otherwise it is
 * the wall clock at run time. */
struct RunManifest {
  std::string command;
  std::string config_digest;  // empty when the command takes no config
  std::uint64_t seed = 0;
  bool seeded = false;        // false for fully deterministic commands
  std::string version;
  std::string timestamp;      // ISO 8601 UTC
};

RunManifest make_manifest(const std::string& command,
                          const std::string& digest, std::uint64_t seed,
                          bool seeded);

/* Minimal JSON writer with the 12-significant-digit number format. */
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);
  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(int v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& null_value();

  const std::string& str() const { return out_; }

  static std::string format_number(double v);

 private:
  void comma();
  void append_escaped(const std::string& v);
  std::string out_;
  std::vector<bool> need_comma_;
  bool after_key_ = false;
};

void write_manifest(JsonWriter& w, const RunManifest& manifest);

// Report serializers. Each returns a complete JSON document with a
// trailing newline.
std::string serialize_bounds_report(const BoundsReport& report,
                                    const RunManifest& manifest);
std::string serialize_layer_plan(const LayerPlan& plan,
                                 const RunManifest& manifest);
std::string serialize_sim_result(const SimResult& result,
                                 const RunManifest& manifest);

// Human-oriented table for a layer plan (delimiters plus the P_{k,m}
// matrix with per-user totals).
std::string format_layer_table(const ChannelConfig& config,
                               const LayerPlan& plan);

// Sweep CSV, header "P,half_log2P,lower,upper,gap". The lower column is
// the clamped bound; gap = upper - lower_raw.
std::string format_sweep_csv(const DofEstimate& estimate);

// Per-layer error-rate CSV for a simulation result.
std::string format_sim_csv(const SimResult& result);

}  // namespace m2o

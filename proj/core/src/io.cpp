#include "m2o/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "m2o/errors.hpp"
#include "m2o/version.hpp"

namespace m2o {

namespace {

using nlohmann::json;

double require_number(const json& node, const std::string& pointer) {
  if (!node.is_number()) {
    throw ConfigError(pointer + ": expected a number, got " +
                      std::string(node.type_name()));
  }
  return node.get<double>();
}

std::vector<double> require_number_array(const json& node,
                                         const std::string& pointer) {
  if (!node.is_array()) {
    throw ConfigError(pointer + ": expected an array, got " +
                      std::string(node.type_name()));
  }
  std::vector<double> values;
  values.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    values.push_back(
        require_number(node[i], pointer + "/" + std::to_string(i)));
  }
  return values;
}

}  // namespace

ChannelConfig parse_config_text(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config root must be a JSON object");
  }
  for (const auto& [k, v] : doc.items()) {
    (void)v;
    if (k != "K" && k != "gains" && k != "powers") {
      throw ConfigError("unknown config key \"" + k +
                        "\" (expected K, gains, powers)");
    }
  }
  for (const char* required : {"K", "gains", "powers"}) {
    if (!doc.contains(required)) {
      throw ConfigError(std::string("missing config key \"") + required + "\"");
    }
  }
  if (!doc["K"].is_number_integer()) {
    throw ConfigError("/K: expected an integer, got " +
                      std::string(doc["K"].type_name()));
  }

  ChannelConfig config;
  config.K = doc["K"].get<int>();
  config.gains = require_number_array(doc["gains"], "/gains");
  config.powers = require_number_array(doc["powers"], "/powers");
  require_valid(config);
  return config;
}

ChannelConfig parse_config(const std::string& path_or_json) {
  const std::size_t first =
      path_or_json.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && path_or_json[first] == '{') {
    return parse_config_text(path_or_json);
  }
  std::ifstream in(path_or_json, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file: " + path_or_json);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

std::string serialize_config(const ChannelConfig& config) {
  JsonWriter w;
  w.begin_object();
  w.key("K").value(config.K);
  w.key("gains").begin_array();
  for (double a : config.gains) w.value(a);
  w.end_array();
  w.key("powers").begin_array();
  for (double p : config.powers) w.value(p);
  w.end_array();
  w.end_object();
  return w.str();
}

std::string config_digest(const ChannelConfig& config) {
  const std::string bytes = serialize_config(config);
  std::uint64_t hash = 14695981039346656037ull;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, hash);
  return buf;
}

RunManifest make_manifest(const std::string& command,
                          const std::string& digest, std::uint64_t seed,
                          bool seeded) {
  RunManifest manifest;
  manifest.command = command;
  manifest.config_digest = digest;
  manifest.seed = seed;
  manifest.seeded = seeded;
  manifest.version = kVersion;

  std::time_t stamp = 0;
  bool have_stamp = false;
  if (const char* fixed = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long parsed = std::strtoll(fixed, &end, 10);
    if (end != fixed && end != nullptr && *end == '\0') {
      stamp = static_cast<std::time_t>(parsed);
      have_stamp = true;
    }
  }
  if (!have_stamp) stamp = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&stamp, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  manifest.timestamp = buf;
  return manifest;
}

/* ---------------------------------------------------------------- writer */

std::string JsonWriter::format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void JsonWriter::comma() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!need_comma_.empty()) {
    if (need_comma_.back()) out_ += ',';
    need_comma_.back() = true;
  }
}

JsonWriter& JsonWriter::begin_object() {
  comma();
  out_ += '{';
  need_comma_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  need_comma_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  comma();
  out_ += '[';
  need_comma_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  need_comma_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
  comma();
  append_escaped(name);
  out_ += ':';
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  comma();
  out_ += format_number(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
  comma();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(int v) {
  return value(static_cast<std::int64_t>(v));
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
  comma();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  comma();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  comma();
  append_escaped(v);
  return *this;
}

void JsonWriter::append_escaped(const std::string& v) {
  out_ += '"';
  for (const char c : v) {
    switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\t': out_ += "\\t"; break;
      case '\r': out_ += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x",
                        static_cast<unsigned>(static_cast<unsigned char>(c)));
          out_ += buf;
        } else {
          out_ += c;
        }
    }
  }
  out_ += '"';
}

JsonWriter& JsonWriter::null_value() {
  comma();
  out_ += "null";
  return *this;
}

/* ------------------------------------------------------------- manifests */

void write_manifest(JsonWriter& w, const RunManifest& manifest) {
  w.key("manifest").begin_object();
  w.key("command").value(manifest.command);
  if (!manifest.config_digest.empty()) {
    w.key("config_digest").value(manifest.config_digest);
  }
  w.key("seeded").value(manifest.seeded);
  if (manifest.seeded) w.key("seed").value(manifest.seed);
  w.key("version").value(manifest.version);
  w.key("timestamp").value(manifest.timestamp);
  w.end_object();
}

/* ----------------------------------------------------------- serializers */

std::string serialize_bounds_report(const BoundsReport& report,
                                    const RunManifest& manifest) {
  JsonWriter w;
  w.begin_object();
  w.key("lower_raw").value(report.lower_raw);
  w.key("lower").value(report.lower);
  w.key("upper").value(report.upper);
  w.key("f_K").value(report.fK);
  w.key("gap").value(report.gap);
  w.key("case1").value(report.case1);
  w.key("case2").value(report.case2);
  if (report.gap_budget) {
    w.key("gap_budget").value(*report.gap_budget);
    w.key("within_budget").value(report.gap <= *report.gap_budget + 1e-9);
  } else {
    w.key("gap_budget").null_value();
  }
  write_manifest(w, manifest);
  w.end_object();
  return w.str() + "\n";
}

std::string serialize_layer_plan(const LayerPlan& plan,
                                 const RunManifest& manifest) {
  JsonWriter w;
  w.begin_object();
  w.key("K").value(plan.K);
  w.key("M").value(plan.M());
  w.key("delimiters").begin_array();
  for (double q : plan.delimiters) w.value(q);
  w.end_array();
  w.key("layers").begin_array();
  for (const LayerInterval& interval : plan.intervals) {
    w.begin_object();
    w.key("index").value(interval.index);
    if (interval.index == 0) {
      w.key("floor").null_value();
    } else {
      w.key("floor").value(interval.floor);
    }
    w.key("ceiling").value(interval.ceiling);
    if (interval.index > 0) w.key("width").value(interval.width());
    w.key("occupants").begin_array();
    for (const int user : plan.active[static_cast<std::size_t>(interval.index)]) {
      w.value(user);
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.key("allocations").begin_array();
  for (int user = 1; user <= plan.K; ++user) {
    const auto& row = plan.alloc[static_cast<std::size_t>(user - 1)];
    double total = 0;
    for (const double p : row) total += p;
    w.begin_object();
    w.key("user").value(user);
    w.key("total").value(total);
    w.key("per_layer").begin_array();
    for (const double p : row) w.value(p);
    w.end_array();
    w.end_object();
  }
  w.end_array();
  write_manifest(w, manifest);
  w.end_object();
  return w.str() + "\n";
}

namespace {

void write_receiver_stats(JsonWriter& w, const ReceiverStats& stats) {
  w.begin_object();
  if (stats.user == 0) {
    w.key("receiver").value(std::string("K"));
  } else {
    w.key("receiver").value(stats.user);
  }
  w.key("trials").value(stats.trials);
  w.key("block_errors").value(stats.block_errors);
  w.key("block_error_rate").value(stats.block_error_rate());
  w.key("layers").begin_array();
  for (const LayerErrorStats& layer : stats.layers) {
    w.begin_object();
    w.key("layer").value(layer.layer);
    w.key("q").value(layer.q);
    w.key("rate").value(layer.rate);
    w.key("trials").value(layer.trials);
    w.key("errors").value(layer.errors);
    w.key("wraps").value(layer.wraps);
    w.key("error_rate").value(
        layer.trials ? static_cast<double>(layer.errors) /
                           static_cast<double>(layer.trials)
                     : 0.0);
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

}  // namespace

std::string serialize_sim_result(const SimResult& result,
                                 const RunManifest& manifest) {
  JsonWriter w;
  w.begin_object();
  w.key("margin").value(result.margin);
  w.key("dim").value(result.dim);
  w.key("trials").value(result.trials);
  w.key("shards").value(result.shards);
  w.key("noise_variance").value(result.noise_variance);
  w.key("receiver_K");
  write_receiver_stats(w, result.receiver_K);
  w.key("receivers").begin_array();
  for (const ReceiverStats& stats : result.receivers) {
    write_receiver_stats(w, stats);
  }
  w.end_array();
  w.key("power").begin_array();
  for (const UserPower& power : result.power) {
    w.begin_object();
    w.key("user").value(power.user);
    w.key("budget").value(power.budget);
    w.key("mean").value(power.mean);
    w.end_object();
  }
  w.end_array();
  write_manifest(w, manifest);
  w.end_object();
  return w.str() + "\n";
}

/* ----------------------------------------------------------- flat output */

std::string format_layer_table(const ChannelConfig& config,
                               const LayerPlan& plan) {
  std::ostringstream out;
  out << "delimiters:";
  for (const double q : plan.delimiters) {
    out << ' ' << JsonWriter::format_number(q);
  }
  out << '\n';
  char line[160];
  std::snprintf(line, sizeof line, "%5s  %-12s %-12s %-12s %s\n", "layer",
                "floor", "ceiling", "width", "occupants");
  out << line;
  for (std::size_t i = plan.intervals.size(); i-- > 0;) {
    const LayerInterval& interval = plan.intervals[i];
    const std::string floor =
        interval.index == 0 ? "-inf" : JsonWriter::format_number(interval.floor);
    const std::string width =
        interval.index == 0 ? "-" : JsonWriter::format_number(interval.width());
    std::snprintf(line, sizeof line, "%5d  %-12s %-12s %-12s", interval.index,
                  floor.c_str(), JsonWriter::format_number(interval.ceiling).c_str(),
                  width.c_str());
    out << line;
    for (const int user : plan.active[i]) out << ' ' << user;
    out << '\n';
  }
  out << '\n';
  std::snprintf(line, sizeof line, "%5s  %-12s %-12s %s\n", "user", "budget",
                "spent", "per-layer P_{k,m} (layer 0 first)");
  out << line;
  for (int user = 1; user <= plan.K; ++user) {
    const auto& row = plan.alloc[static_cast<std::size_t>(user - 1)];
    double total = 0;
    for (const double p : row) total += p;
    std::snprintf(line, sizeof line, "%5d  %-12s %-12s", user,
                  JsonWriter::format_number(
                      config.powers[static_cast<std::size_t>(user - 1)])
                      .c_str(),
                  JsonWriter::format_number(total).c_str());
    out << line;
    for (const double p : row) out << ' ' << JsonWriter::format_number(p);
    out << '\n';
  }
  return out.str();
}

std::string format_sweep_csv(const DofEstimate& estimate) {
  std::ostringstream out;
  out << "P,half_log2P,lower,upper,gap\n";
  for (const DofPoint& point : estimate.points) {
    out << JsonWriter::format_number(point.P) << ','
        << JsonWriter::format_number(point.half_log2_P) << ','
        << JsonWriter::format_number(point.lower) << ','
        << JsonWriter::format_number(point.upper) << ','
        << JsonWriter::format_number(point.upper - point.lower_raw) << '\n';
  }
  return out.str();
}

std::string format_sim_csv(const SimResult& result) {
  std::ostringstream out;
  out << "receiver,layer,q,rate,trials,errors,wraps,error_rate\n";
  const auto rows = [&out](const ReceiverStats& stats) {
    const std::string receiver =
        stats.user == 0 ? "K" : std::to_string(stats.user);
    for (const LayerErrorStats& layer : stats.layers) {
      out << receiver << ',' << layer.layer << ',' << layer.q << ','
          << JsonWriter::format_number(layer.rate) << ',' << layer.trials
          << ',' << layer.errors << ',' << layer.wraps << ','
          << JsonWriter::format_number(
                 layer.trials ? static_cast<double>(layer.errors) /
                                    static_cast<double>(layer.trials)
                              : 0.0)
          << '\n';
    }
  };
  rows(result.receiver_K);
  for (const ReceiverStats& stats : result.receivers) rows(stats);
  return out.str();
}

}  // namespace m2o

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <string>

#include "m2o/cli.hpp"
#include "m2o/errors.hpp"
#include "m2o/io.hpp"

using namespace m2o;
using nlohmann::json;

namespace {

const char* kWorkedJson = R"({"K":3,"gains":[4,9],"powers":[4,2,20]})";

ChannelConfig worked_config() {
  return ChannelConfig{3, {4.0, 9.0}, {4.0, 2.0, 20.0}};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = "/tmp/m2o_test_" + name;
  std::ofstream out(path);
  out << text;
  return path;
}

// Reference FNV-1a 64, kept separate from the implementation under test.
std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

struct ScopedEpoch {
  std::string saved;
  bool had = false;
  explicit ScopedEpoch(const char* value) {
    if (const char* old = std::getenv("SOURCE_DATE_EPOCH")) {
      saved = old;
      had = true;
    }
    setenv("SOURCE_DATE_EPOCH", value, 1);
  }
  ~ScopedEpoch() {
    if (had) {
      setenv("SOURCE_DATE_EPOCH", saved.c_str(), 1);
    } else {
      unsetenv("SOURCE_DATE_EPOCH");
    }
  }
};

}  // namespace

TEST_CASE("configs parse from inline JSON and from files identically") {
  const ChannelConfig inline_cfg = parse_config(kWorkedJson);
  const std::string path = write_temp("worked.json", kWorkedJson);
  const ChannelConfig file_cfg = parse_config(path);
  std::remove(path.c_str());
  CHECK(config_digest(inline_cfg) == config_digest(file_cfg));
  CHECK(inline_cfg.K == 3);
  CHECK(inline_cfg.gains == std::vector<double>{4.0, 9.0});
  CHECK(inline_cfg.powers == std::vector<double>{4.0, 2.0, 20.0});
}

TEST_CASE("config parse errors name the offending field") {
  CHECK_THROWS_AS(parse_config_text("{"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[1,2]"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config_text(R"({"K":3,"gains":[4,9],"powers":[4,2,20],"bogus":1})"),
      doctest::Contains("bogus"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"K":3,"gains":[4,9]})"),
                       doctest::Contains("powers"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config_text(R"({"K":3.5,"gains":[4,9],"powers":[4,2,20]})"),
      doctest::Contains("/K"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config_text(R"({"K":3,"gains":[4,"x"],"powers":[4,2,20]})"),
      doctest::Contains("/gains/1"), ConfigError);
  // Structurally valid configs still run channel validation.
  CHECK_THROWS_WITH_AS(
      parse_config_text(R"({"K":3,"gains":[4,9],"powers":[4,-2,20]})"),
      doctest::Contains("/powers/1"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("/nonexistent/m2o.json"),
                       doctest::Contains("cannot open config file"),
                       ConfigError);
}

TEST_CASE("canonical serialization and digest") {
  CHECK(serialize_config(worked_config()) == kWorkedJson);
  const std::string digest = config_digest(worked_config());
  CHECK(digest == "fnv1a64:c5191c1ec83a3c02");
  CHECK(digest == "fnv1a64:" + fnv1a64_hex(serialize_config(worked_config())));

  // Digest distinguishes configs.
  CHECK(config_digest({3, {4.0, 9.0}, {4.0, 2.0, 21.0}}) != digest);
}

TEST_CASE("json writer emits exact document structure") {
  JsonWriter w;
  w.begin_object();
  w.key("a").begin_array().value(1).value(2.5).end_array();
  w.key("s").value(std::string("x\"y\\z\n"));
  w.key("b").value(true);
  w.key("n").null_value();
  w.end_object();
  CHECK(w.str() == R"({"a":[1,2.5],"s":"x\"y\\z\n","b":true,"n":null})");
}

TEST_CASE("numbers print with 12 significant digits") {
  CHECK(JsonWriter::format_number(46.5) == "46.5");
  CHECK(JsonWriter::format_number(0.1) == "0.1");
  CHECK(JsonWriter::format_number(2.0) == "2");
  CHECK(JsonWriter::format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(JsonWriter::format_number(-19.06610471084965) == "-19.0661047108");
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(JsonWriter::format_number(inf) == "null");
  CHECK(JsonWriter::format_number(-inf) == "null");
  CHECK(JsonWriter::format_number(std::nan("")) == "null");
}

TEST_CASE("manifest honors SOURCE_DATE_EPOCH") {
  {
    ScopedEpoch epoch("1700000000");
    const RunManifest manifest = make_manifest("bounds", "digest", 7, true);
    CHECK(manifest.timestamp == "2023-11-14T22:13:20Z");
    CHECK(manifest.command == "bounds");
    CHECK(manifest.config_digest == "digest");
    CHECK(manifest.seed == 7);
    CHECK(manifest.seeded);
    CHECK_FALSE(manifest.version.empty());
  }
  const RunManifest live = make_manifest("bounds", "", 0, false);
  REQUIRE(live.timestamp.size() == 20);
  CHECK(live.timestamp[10] == 'T');
  CHECK(live.timestamp.back() == 'Z');
  CHECK_FALSE(live.seeded);
}

TEST_CASE("manifest serialization keeps the seed only when seeded") {
  JsonWriter seeded;
  seeded.begin_object();
  RunManifest manifest = make_manifest("simulate", "d", 42, true);
  manifest.timestamp = "2023-11-14T22:13:20Z";
  manifest.version = "test";
  write_manifest(seeded, manifest);
  seeded.end_object();
  const json parsed = json::parse(seeded.str());
  CHECK(parsed["manifest"]["seed"] == 42);
  CHECK(parsed["manifest"]["seeded"] == true);

  JsonWriter plain;
  plain.begin_object();
  manifest.seeded = false;
  write_manifest(plain, manifest);
  plain.end_object();
  const json bare = json::parse(plain.str());
  CHECK_FALSE(bare["manifest"].contains("seed"));
}

TEST_CASE("bounds report serialization round-trips") {
  const RunManifest manifest = make_manifest("bounds", "d", 0, false);

  const BoundsReport open = gap_report(worked_config());
  const json parsed = json::parse(serialize_bounds_report(open, manifest));
  CHECK(parsed["lower_raw"].get<double>() ==
        doctest::Approx(open.lower_raw).epsilon(1e-10));
  CHECK(parsed["upper"].get<double>() ==
        doctest::Approx(open.upper).epsilon(1e-10));
  CHECK(parsed["gap_budget"].is_null());
  CHECK_FALSE(parsed.contains("within_budget"));
  CHECK(parsed["manifest"]["command"] == "bounds");

  const BoundsReport capped = gap_report({3, {0.5, 0.25}, {2.0, 3.0, 4.0}});
  const json budget = json::parse(serialize_bounds_report(capped, manifest));
  CHECK(budget["case1"] == true);
  CHECK(budget["gap_budget"].get<double>() ==
        doctest::Approx(gap_budget_case1(3)));
  CHECK(budget["within_budget"] == true);
}

TEST_CASE("layer plan serialization round-trips") {
  const LayerPlan plan = build_layer_plan(worked_config());
  const json parsed = json::parse(
      serialize_layer_plan(plan, make_manifest("layers", "d", 0, false)));
  CHECK(parsed["K"] == 3);
  CHECK(parsed["M"] == 5);
  REQUIRE(parsed["delimiters"].size() == 6);
  CHECK(parsed["delimiters"][0].get<double>() == 1.0);
  CHECK(parsed["delimiters"][5].get<double>() == 20.0);
  REQUIRE(parsed["layers"].size() == 6);
  CHECK(parsed["layers"][0]["floor"].is_null());
  CHECK(parsed["layers"][0]["occupants"].empty());
  CHECK(parsed["layers"][3]["width"].get<double>() == doctest::Approx(7.0));
  CHECK(parsed["layers"][3]["occupants"] == json::array({1, 2, 3}));
  REQUIRE(parsed["allocations"].size() == 3);
  CHECK(parsed["allocations"][2]["user"] == 3);
  CHECK(parsed["allocations"][2]["total"].get<double>() ==
        doctest::Approx(19.0));
}

TEST_CASE("simulation result serialization round-trips") {
  const ChannelConfig config{3, {64.0, 1.0}, {64.0, 4096.0, 4096.0}};
  const SimResult sim = end_to_end_report(config, 1.0, 20, 5, 2, 1, {0.0});
  const json parsed = json::parse(
      serialize_sim_result(sim, make_manifest("simulate", "d", 5, true)));
  CHECK(parsed["margin"].get<double>() == 1.0);
  CHECK(parsed["dim"] == 1);
  CHECK(parsed["trials"] == 20);
  CHECK(parsed["shards"] == 2);
  CHECK(parsed["noise_variance"].get<double>() == 0.0);
  CHECK(parsed["receiver_K"]["receiver"] == "K");
  CHECK(parsed["receiver_K"]["trials"] == 20);
  REQUIRE(parsed["receiver_K"]["layers"].size() == 2);
  CHECK(parsed["receiver_K"]["layers"][0]["layer"] == 2);
  REQUIRE(parsed["receivers"].size() == 2);
  CHECK(parsed["receivers"][0]["receiver"] == 1);
  REQUIRE(parsed["power"].size() == 3);
  CHECK(parsed["power"][0]["budget"].get<double>() == 64.0);
}

TEST_CASE("csv formats") {
  std::vector<double> powers;
  for (int e = 10; e <= 20; e += 2) powers.push_back(std::pow(2.0, e));
  const DofEstimate estimate =
      dof_sweep({3, {1.0, 1.0}, {1.0, 1.0, 1.0}}, powers);
  const std::string sweep = format_sweep_csv(estimate);
  CHECK(sweep.rfind("P,half_log2P,lower,upper,gap\n", 0) == 0);
  CHECK(sweep.find("\n1024,5,") != std::string::npos);

  const ChannelConfig config{3, {64.0, 1.0}, {64.0, 4096.0, 4096.0}};
  const SimResult sim = end_to_end_report(config, 1.0, 20, 5, 1, 1, {0.0});
  const std::string csv = format_sim_csv(sim);
  CHECK(csv.rfind("receiver,layer,q,rate,trials,errors,wraps,error_rate\n",
                  0) == 0);
  CHECK(csv.find("\nK,2,2,1,20,0,0,0\n") != std::string::npos);
  CHECK(csv.find("\n1,2,2,1,20,0,0,0\n") != std::string::npos);

  const std::string table = format_layer_table(worked_config(),
                                               build_layer_plan(worked_config()));
  CHECK(table.find("delimiters:") != std::string::npos);
  CHECK(table.find("user") != std::string::npos);
}

TEST_CASE("cli: bounds") {
  const RunResult run = run_command({"bounds", "--config", kWorkedJson});
  REQUIRE(run.exit_code == 0);
  const json parsed = json::parse(run.out);
  CHECK(parsed["lower_raw"].get<double>() ==
        doctest::Approx(-19.0661047108496).epsilon(1e-10));
  CHECK(parsed["upper"].get<double>() ==
        doctest::Approx(3.38434665084425).epsilon(1e-10));
  CHECK(parsed["f_K"].get<double>() ==
        doctest::Approx(21.6421062575721).epsilon(1e-10));
  CHECK(parsed["manifest"]["config_digest"] == "fnv1a64:c5191c1ec83a3c02");
}

TEST_CASE("cli: layers") {
  const RunResult run = run_command({"layers", "--config", kWorkedJson});
  REQUIRE(run.exit_code == 0);
  CHECK(run.err.find("delimiters:") != std::string::npos);
  const json parsed = json::parse(run.out);
  CHECK(parsed["M"] == 5);
}

TEST_CASE("cli: usage errors exit 2") {
  CHECK(run_command({"bounds"}).exit_code == 2);
  CHECK(run_command({"nonsense"}).exit_code == 2);
  const RunResult bad = run_command({"bounds", "--config", "/nonexistent.json"});
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.rfind("m2o: ", 0) == 0);
  CHECK(bad.err.find("cannot open") != std::string::npos);
  const RunResult malformed = run_command({"bounds", "--config", "{"});
  CHECK(malformed.exit_code == 2);
}

TEST_CASE("cli: help and version exit 0") {
  const RunResult help = run_command({"--help"});
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("Usage") != std::string::npos);
  CHECK(run_command({"--version"}).exit_code == 0);
}

TEST_CASE("cli: leakage") {
  const RunResult run = run_command({"leakage", "--q", "2", "--users", "2"});
  REQUIRE(run.exit_code == 0);
  const json parsed = json::parse(run.out);
  CHECK(parsed["leakage_bits"].get<double>() == doctest::Approx(0.5));
  CHECK(parsed["bound_bits"].get<double>() == doctest::Approx(1.0));
  CHECK(parsed["states"] == 4);

  const RunResult dithered = run_command(
      {"leakage", "--q", "4", "--users", "3", "--denom", "4", "--dither",
       "1,0,3"});
  REQUIRE(dithered.exit_code == 0);
  CHECK(json::parse(dithered.out)["leakage_bits"].get<double>() ==
        doctest::Approx(0.984265829249).epsilon(1e-9));

  CHECK(run_command({"leakage", "--q", "2", "--users", "2", "--mod-sum",
                     "--dither", "0,0"})
            .exit_code == 2);
}

TEST_CASE("cli: gap-scan") {
  const RunResult run =
      run_command({"gap-scan", "--case", "1", "--trials", "200"});
  REQUIRE(run.exit_code == 0);
  const json parsed = json::parse(run.out);
  CHECK(parsed["violations"] == 0);
  CHECK(parsed["case"] == 1);
  CHECK(parsed["budget"].get<double>() ==
        doctest::Approx(24.1421062575721).epsilon(1e-10));
  CHECK(run.err.find("gap-scan case 1") != std::string::npos);
  CHECK(run_command({"gap-scan", "--case", "3"}).exit_code == 2);
}

TEST_CASE("cli: simulate") {
  const RunResult run = run_command(
      {"simulate", "--config", R"({"K":3,"gains":[1,1],"powers":[256,256,256]})",
       "--margin", "0.5", "--trials", "50", "--seed", "9", "--noise-var", "4"});
  REQUIRE(run.exit_code == 0);
  const json parsed = json::parse(run.out);
  CHECK(parsed["trials"] == 50);
  CHECK(run.err.find("block error") != std::string::npos);

  const std::string csv_path = "/tmp/m2o_test_sim.csv";
  const RunResult with_csv = run_command(
      {"simulate", "--config", R"({"K":3,"gains":[1,1],"powers":[256,256,256]})",
       "--trials", "20", "--out", csv_path});
  REQUIRE(with_csv.exit_code == 0);
  std::ifstream in(csv_path);
  std::string header;
  std::getline(in, header);
  std::remove(csv_path.c_str());
  CHECK(header == "receiver,layer,q,rate,trials,errors,wraps,error_rate");

  CHECK(run_command({"simulate", "--config", kWorkedJson, "--noise-var", "0"})
            .exit_code == 2);
}

TEST_CASE("cli: sweep") {
  const RunResult csv_run = run_command({"sweep", "--config", kWorkedJson,
                                         "--min-log2", "10", "--max-log2",
                                         "20", "--points", "6"});
  REQUIRE(csv_run.exit_code == 0);
  CHECK(csv_run.out.rfind("P,half_log2P,lower,upper,gap\n", 0) == 0);

  const std::string path = "/tmp/m2o_test_sweep.csv";
  const RunResult slope_run =
      run_command({"sweep", "--config", kWorkedJson, "--min-log2", "10",
                   "--max-log2", "20", "--points", "6", "--out", path});
  REQUIRE(slope_run.exit_code == 0);
  const json parsed = json::parse(slope_run.out);
  CHECK(parsed["lower_slope"].get<double>() == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(parsed["points"] == 6);
  CHECK(parsed["csv"] == path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  std::remove(path.c_str());
  CHECK(header == "P,half_log2P,lower,upper,gap");

  CHECK(run_command({"sweep", "--config", kWorkedJson, "--points", "2"})
            .exit_code == 2);
}

TEST_CASE("cli: reports are byte-identical under a pinned epoch") {
  ScopedEpoch epoch("1700000000");
  const RunResult a = run_command({"bounds", "--config", kWorkedJson});
  const RunResult b = run_command({"bounds", "--config", kWorkedJson});
  CHECK(a.out == b.out);
  CHECK(a.out.find("2023-11-14T22:13:20Z") != std::string::npos);
}

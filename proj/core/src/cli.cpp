#include "m2o/cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "m2o/bounds.hpp"
#include "m2o/errors.hpp"
#include "m2o/io.hpp"
#include "m2o/lattice.hpp"
#include "m2o/layering.hpp"
#include "m2o/rng.hpp"
#include "m2o/simulator.hpp"
#include "m2o/version.hpp"

namespace m2o {

namespace {

void write_file_or_throw(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << bytes;
  if (!out) throw ConfigError("failed writing output file: " + path);
}

int cmd_bounds(const std::string& config_arg, RunResult& result) {
  const ChannelConfig config = parse_config(config_arg);
  const RunManifest manifest =
      make_manifest("bounds", config_digest(config), 0, false);
  result.out = serialize_bounds_report(gap_report(config), manifest);
  return 0;
}

int cmd_layers(const std::string& config_arg, RunResult& result) {
  const ChannelConfig config = parse_config(config_arg);
  const LayerPlan plan = build_layer_plan(config);
  const RunManifest manifest =
      make_manifest("layers", config_digest(config), 0, false);
  result.err = format_layer_table(config, plan);
  result.out = serialize_layer_plan(plan, manifest);
  return 0;
}

int cmd_sweep(const std::string& config_arg, double min_log2, double max_log2,
              int points, const std::string& out_path, RunResult& result) {
  const ChannelConfig config = parse_config(config_arg);
  if (points < 3) throw DegenerateSweep("sweep needs at least 3 points");
  if (!(max_log2 > min_log2)) {
    throw DegenerateSweep("sweep needs max-log2 > min-log2");
  }
  std::vector<double> powers;
  powers.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double exponent =
        min_log2 + (max_log2 - min_log2) * static_cast<double>(i) /
                       static_cast<double>(points - 1);
    powers.push_back(std::pow(2.0, exponent));
  }
  const DofEstimate estimate = dof_sweep(config, powers);
  const std::string csv = format_sweep_csv(estimate);
  const RunManifest manifest =
      make_manifest("sweep", config_digest(config), 0, false);
  if (out_path.empty()) {
    result.out = csv;
    return 0;
  }
  write_file_or_throw(out_path, csv);
  JsonWriter w;
  w.begin_object();
  w.key("lower_slope").value(estimate.lower_slope);
  w.key("upper_slope").value(estimate.upper_slope);
  w.key("fit_points").value(estimate.fit_points);
  w.key("points").value(static_cast<int>(estimate.points.size()));
  w.key("csv").value(out_path);
  write_manifest(w, manifest);
  w.end_object();
  result.out = w.str() + "\n";
  return 0;
}

int cmd_gap_scan(int which_case, int K, std::int64_t trials,
                 std::uint64_t seed, RunResult& result) {
  if (which_case != 1 && which_case != 2) {
    throw ConfigError("--case must be 1 or 2");
  }
  if (K < 3) throw ConfigError("--K must be >= 3");
  if (trials < 1) throw ConfigError("--trials must be >= 1");

  Rng rng(derive_seed(seed, rng_domain::kScan,
                      static_cast<std::uint64_t>(which_case)));
  const auto log_uniform = [&rng](double lo_exp, double hi_exp) {
    return std::pow(10.0, lo_exp + (hi_exp - lo_exp) * rng.uniform());
  };

  const double budget =
      which_case == 1 ? gap_budget_case1(K) : gap_budget_case2(K);
  std::int64_t violations = 0;
  double max_gap = -1e300;
  double min_slack = 1e300;
  ChannelConfig worst;
  for (std::int64_t i = 0; i < trials; ++i) {
    ChannelConfig config;
    config.K = K;
    config.gains.resize(static_cast<std::size_t>(K - 1));
    config.powers.resize(static_cast<std::size_t>(K));
    if (which_case == 1) {
      for (auto& a : config.gains) a = log_uniform(-2.0, 0.0);  // < 1
      for (auto& p : config.powers) p = log_uniform(-1.0, 4.0);
    } else {
      const double a = log_uniform(-2.0, 2.0);
      const double p = log_uniform(-1.0, 4.0);
      for (auto& g : config.gains) g = a;
      for (int k = 0; k < K - 1; ++k) {
        config.powers[static_cast<std::size_t>(k)] = p;
      }
      config.powers[static_cast<std::size_t>(K - 1)] = log_uniform(-1.0, 4.0);
    }
    const BoundsReport report = gap_report(config);
    const double slack = budget - report.gap;
    if (report.gap > max_gap) {
      max_gap = report.gap;
      worst = config;
    }
    if (slack < min_slack) min_slack = slack;
    if (report.gap > budget + 1e-9) ++violations;
  }

  const RunManifest manifest = make_manifest("gap-scan", "", seed, true);
  JsonWriter w;
  w.begin_object();
  w.key("case").value(which_case);
  w.key("K").value(K);
  w.key("trials").value(trials);
  w.key("budget").value(budget);
  w.key("violations").value(violations);
  w.key("max_gap").value(max_gap);
  w.key("min_slack").value(min_slack);
  w.key("worst_config").begin_object();
  w.key("K").value(worst.K);
  w.key("gains").begin_array();
  for (const double a : worst.gains) w.value(a);
  w.end_array();
  w.key("powers").begin_array();
  for (const double p : worst.powers) w.value(p);
  w.end_array();
  w.end_object();
  write_manifest(w, manifest);
  w.end_object();
  result.out = w.str() + "\n";

  std::ostringstream err;
  err << "gap-scan case " << which_case << ": " << trials << " configs, "
      << violations << " violations, max gap "
      << JsonWriter::format_number(max_gap) << " (budget "
      << JsonWriter::format_number(budget) << ")\n";
  result.err = err.str();
  return violations > 0 ? 1 : 0;
}

int cmd_leakage(std::int64_t q, int dim, int users, std::int64_t denom,
                const std::vector<std::int64_t>& dither_flat, bool mod_sum,
                RunResult& result) {
  const NestedLatticePair pair(dim, q);
  if (users < 2) throw ConfigError("--users must be >= 2");
  if (denom < 1) throw ConfigError("--denom must be >= 1");

  LeakageResult leak;
  if (mod_sum) {
    if (!dither_flat.empty()) {
      throw ConfigError("--dither has no effect on the mod-reduced sum");
    }
    leak = exact_leakage_mod_sum(pair, users);
  } else if (dither_flat.empty()) {
    leak = exact_leakage(pair, users);
  } else {
    if (dither_flat.size() !=
        static_cast<std::size_t>(users) * static_cast<std::size_t>(dim)) {
      throw ConfigError("--dither needs users*dim numerators");
    }
    std::vector<std::vector<std::int64_t>> dither_num(
        static_cast<std::size_t>(users));
    for (int k = 0; k < users; ++k) {
      dither_num[static_cast<std::size_t>(k)].assign(
          dither_flat.begin() + static_cast<std::ptrdiff_t>(k) * dim,
          dither_flat.begin() + static_cast<std::ptrdiff_t>(k + 1) * dim);
    }
    leak = exact_leakage(pair, users, dither_num, denom);
  }

  const RunManifest manifest = make_manifest("leakage", "", 0, false);
  JsonWriter w;
  w.begin_object();
  w.key("q").value(q);
  w.key("dim").value(dim);
  w.key("users").value(users);
  w.key("mod_sum").value(mod_sum);
  w.key("leakage_bits").value(leak.leakage_bits);
  w.key("bound_bits").value(leak.bound_bits);
  w.key("T_max").value(leak.t_max);
  w.key("states").value(leak.states);
  write_manifest(w, manifest);
  w.end_object();
  result.out = w.str() + "\n";
  return leak.leakage_bits > leak.bound_bits + 1e-12 ? 1 : 0;
}

int cmd_simulate(const std::string& config_arg, double margin,
                 std::int64_t trials, std::uint64_t seed, int shards, int dim,
                 double noise_var, const std::string& out_path,
                 RunResult& result) {
  const ChannelConfig config = parse_config(config_arg);
  if (noise_var <= 0.0) throw ConfigError("--noise-var must be > 0");
  const SimResult sim = end_to_end_report(config, margin, trials, seed, shards,
                                          dim, GaussianNoiseSpec{noise_var});
  const RunManifest manifest =
      make_manifest("simulate", config_digest(config), seed, true);
  result.out = serialize_sim_result(sim, manifest);
  if (!out_path.empty()) write_file_or_throw(out_path, format_sim_csv(sim));

  std::ostringstream err;
  err << "simulate: margin " << JsonWriter::format_number(margin) << ", "
      << trials << " trials, receiver K block error "
      << JsonWriter::format_number(sim.receiver_K.block_error_rate());
  for (const ReceiverStats& stats : sim.receivers) {
    err << ", receiver " << stats.user << " block error "
        << JsonWriter::format_number(stats.block_error_rate());
  }
  err << '\n';
  result.err = err.str();
  return 0;
}

}  // namespace

RunResult run_command(const std::vector<std::string>& args) {
  RunResult result;

  CLI::App app{"secrecy bounds and lattice simulations for the many-to-one "
               "interference channel"};
  app.name("m2o");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_arg;
  std::string out_path;

  CLI::App* bounds =
      app.add_subcommand("bounds", "closed-form secrecy sum-rate bounds");
  bounds->add_option("--config", config_arg,
                     "config file path or inline JSON")->required();

  CLI::App* layers =
      app.add_subcommand("layers", "power-domain layer decomposition");
  layers->add_option("--config", config_arg,
                     "config file path or inline JSON")->required();

  double min_log2 = 10.0, max_log2 = 40.0;
  int points = 31;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "bounds across a symmetric power sweep, with slope fits");
  sweep->add_option("--config", config_arg,
                    "config file path or inline JSON")->required();
  sweep->add_option("--min-log2", min_log2, "log2 of the smallest power");
  sweep->add_option("--max-log2", max_log2, "log2 of the largest power");
  sweep->add_option("--points", points, "number of sweep points");
  sweep->add_option("--out", out_path, "write the CSV here, slopes to stdout");

  int which_case = 0, scan_K = 3;
  std::int64_t scan_trials = 1000;
  std::uint64_t scan_seed = 1;
  CLI::App* gap_scan = app.add_subcommand(
      "gap-scan", "randomized search for constant-gap budget violations");
  gap_scan->add_option("--case", which_case,
                       "1: all gains below one, 2: symmetric interferers")
      ->required();
  gap_scan->add_option("--K", scan_K, "number of users");
  gap_scan->add_option("--trials", scan_trials, "number of random configs");
  gap_scan->add_option("--seed", scan_seed, "scan seed");

  std::int64_t leak_q = 2, leak_denom = 1;
  int leak_dim = 1, leak_users = 3;
  std::vector<std::int64_t> dither_flat;
  bool mod_sum = false;
  CLI::App* leakage = app.add_subcommand(
      "leakage", "exact eavesdropper leakage on the finite lattice group");
  leakage->add_option("--q", leak_q, "coarse lattice scale")->required();
  leakage->add_option("--dim", leak_dim, "lattice dimension");
  leakage->add_option("--users", leak_users, "number of summed codewords");
  leakage->add_option("--denom", leak_denom,
                      "common denominator of the dither numerators");
  leakage->add_option("--dither", dither_flat,
                      "users*dim dither numerators, user-major")
      ->delimiter(',');
  leakage->add_flag("--mod-sum", mod_sum,
                    "score the mod-reduced codeword sum instead");

  double margin = 1.0, noise_var = 1.0;
  std::int64_t sim_trials = 10000;
  std::uint64_t sim_seed = 1;
  int shards = 1, sim_dim = 1;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo sequential decoding of the layered scheme");
  simulate->add_option("--config", config_arg,
                       "config file path or inline JSON")->required();
  simulate->add_option("--margin", margin, "rate backoff per layer, bits");
  simulate->add_option("--trials", sim_trials, "total trials per receiver");
  simulate->add_option("--seed", sim_seed, "simulation seed");
  simulate->add_option("--shards", shards, "deterministic substreams");
  simulate->add_option("--dim", sim_dim, "lattice dimension");
  simulate->add_option("--noise-var", noise_var, "per-dimension noise variance");
  simulate->add_option("--out", out_path, "write the per-layer CSV here");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("m2o");
  for (const std::string& arg : args) argv.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    result.out = app.help();
    result.exit_code = 0;
    return result;
  } catch (const CLI::CallForVersion&) {
    result.out = std::string(kVersion) + "\n";
    result.exit_code = 0;
    return result;
  } catch (const CLI::ParseError& e) {
    result.err = std::string("m2o: ") + e.what() + "\n";
    result.exit_code = 2;
    return result;
  }

  try {
    if (bounds->parsed()) {
      result.exit_code = cmd_bounds(config_arg, result);
    } else if (layers->parsed()) {
      result.exit_code = cmd_layers(config_arg, result);
    } else if (sweep->parsed()) {
      result.exit_code =
          cmd_sweep(config_arg, min_log2, max_log2, points, out_path, result);
    } else if (gap_scan->parsed()) {
      result.exit_code =
          cmd_gap_scan(which_case, scan_K, scan_trials, scan_seed, result);
    } else if (leakage->parsed()) {
      result.exit_code = cmd_leakage(leak_q, leak_dim, leak_users, leak_denom,
                                     dither_flat, mod_sum, result);
    } else if (simulate->parsed()) {
      result.exit_code = cmd_simulate(config_arg, margin, sim_trials, sim_seed,
                                      shards, sim_dim, noise_var, out_path,
                                      result);
    }
  } catch (const std::exception& e) {
    result.err += std::string("m2o: ") + e.what() + "\n";
    result.exit_code = 2;
  }
  return result;
}

}  // namespace m2o

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors
//
// Experiment harness. Exit codes: 0 success, 2 every row infeasible, 1 error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "wpc/json_io.hpp"

namespace {

using namespace wpc;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

// "1,2,5" or "1-5" or a mix such as "1-3,7".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) throw std::invalid_argument("--seeds: empty entry in '" + text + "'");
    const auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoull(part));
      } else {
        const std::uint64_t a = std::stoull(part.substr(0, dash));
        const std::uint64_t b = std::stoull(part.substr(dash + 1));
        if (b < a) throw std::invalid_argument("descending range");
        for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("--seeds: cannot parse '" + part + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("--seeds: no seeds given");
  return out;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return spec_from_json(j);
}

struct Overrides {
  std::string spec_path;
  std::string out;
  std::string seeds;
  std::string variant;
  std::string mode;
  int K = 0, N = 0, M = 0;
  double e_min = -1.0;
  bool timing = false;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--spec", o.spec_path, "Experiment spec (JSON)");
  app->add_option("--out", o.out, "Output directory");
  app->add_option("--seeds", o.seeds, "Seeds, e.g. 1-5 or 1,4,9");
  app->add_option("--variant", o.variant, "full|t_static|t_f_static|baseline1|baseline2");
  app->add_option("--mode", o.mode, "relay|irs");
  app->add_option("--K", o.K, "Pairs");
  app->add_option("--N", o.N, "Subbands");
  app->add_option("--M", o.M, "Relay antennas or IRS elements");
  app->add_option("--e-min", o.e_min, "Harvested energy target per pair (J)");
  app->add_flag("--timing", o.timing, "Record wall times in the result table");
}

ExperimentSpec build_spec(const Overrides& o) {
  ExperimentSpec s = o.spec_path.empty() ? ExperimentSpec{} : load_spec(o.spec_path);
  if (o.spec_path.empty()) s.seeds = {1};
  if (!o.mode.empty()) s.mode = mode_from_string(o.mode);
  if (!o.variant.empty()) s.variant = variant_from_string(o.variant);
  s.settings.variant = s.variant;
  if (!o.seeds.empty()) s.seeds = parse_seeds(o.seeds);
  if (!o.out.empty()) s.outputs = o.out;
  if (o.K > 0) s.K = o.K;
  if (o.N > 0) s.N = o.N;
  if (o.M > 0) s.M = o.M;
  if (o.e_min >= 0) s.e_min = o.e_min;
  if (o.timing) s.timing = true;
  return s;
}

int run_table(const ExperimentSpec& spec) {
  const ResultTable table = run_experiment(spec, [](const ResultRow& r) {
    std::fprintf(stderr, "%s seed %llu: %s", r.sweep.c_str(), (unsigned long long)r.seed,
                 r.status.c_str());
    if (r.feasible) std::fprintf(stderr, " min_rate %.6f tau %.6f", r.min_rate, r.tau);
    std::fprintf(stderr, "\n");
  });
  const auto paths = emit_results(table, spec.outputs, spec.name, spec.emit);
  std::cout << summary_csv(table);
  for (const auto& p : paths) std::cerr << "wrote " << p << "\n";
  return table.any_feasible() ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-min rate optimisation for wireless-powered relay and IRS links"};
  app.require_subcommand(1);
  Overrides run_o, sweep_o, cx_o;
  CLI::App* run = app.add_subcommand("run", "One configuration, every seed, traces written");
  add_common(run, run_o);
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one axis over seeds");
  add_common(sweep, sweep_o);
  CLI::App* cx = app.add_subcommand("complexity", "Operation-count orders per step");
  add_common(cx, cx_o);
  bool measure = false;
  cx->add_flag("--measure", measure, "Attach wall times from one run of the first seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (run->parsed()) {
      ExperimentSpec s = build_spec(run_o);
      // One point: the chosen variant at the base configuration.
      s.axis = SweepAxis::Variant;
      s.variants = {s.variant};
      s.values.clear();
      s.write_traces = true;
      if (run_o.spec_path.empty()) s.name = "run";
      return run_table(s);
    }
    if (sweep->parsed()) {
      if (sweep_o.spec_path.empty()) throw std::invalid_argument("sweep: --spec is required");
      return run_table(build_spec(sweep_o));
    }
    ExperimentSpec s = build_spec(cx_o);
    const SystemConfig cfg = default_config(s.mode, s.K, s.N, s.M, s.e_min);
    auto rows = complexity_report(cfg, s.variant);
    if (measure) {
      const ChannelSet ch = generate_scenario(cfg, s.geometry, s.seeds.front());
      OptimizerSettings st = s.settings;
      st.variant = s.variant;
      st.nested_start = false;
      attach_measurements(rows, algorithm1(ch, cfg, st).trace);
    }
    std::cout << "mode " << to_string(s.mode) << " variant " << to_string(s.variant) << " K "
              << s.K << " N " << s.N << " M " << s.M << "\n"
              << format_complexity(rows);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

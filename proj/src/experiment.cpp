// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors

#include "wpc/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "wpc/json_io.hpp"

namespace wpc {

namespace {

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool integer_axis(SweepAxis a) {
  return a == SweepAxis::K || a == SweepAxis::M || a == SweepAxis::N;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::EMin: return "E_min";
    case SweepAxis::K: return "K";
    case SweepAxis::M: return "M";
    case SweepAxis::N: return "N";
    case SweepAxis::Variant: return "variant";
  }
  return "unknown";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  for (SweepAxis a :
       {SweepAxis::EMin, SweepAxis::K, SweepAxis::M, SweepAxis::N, SweepAxis::Variant}) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown sweep axis '" + name + "' (expected E_min|K|M|N|variant)");
}

std::string to_string(EmitFormat f) {
  switch (f) {
    case EmitFormat::Csv: return "csv";
    case EmitFormat::Json: return "json";
    case EmitFormat::Both: return "both";
  }
  return "unknown";
}

EmitFormat emit_format_from_string(const std::string& name) {
  for (EmitFormat f : {EmitFormat::Csv, EmitFormat::Json, EmitFormat::Both}) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown emit format '" + name + "' (expected csv|json|both)");
}

// ---- spec ---------------------------------------------------------------------

void ExperimentSpec::validate() const {
  if (seeds.empty()) throw std::invalid_argument("spec: at least one seed is required");
  if (K < 1 || N < 1 || M < 1) throw std::invalid_argument("spec: K, N and M must be positive");
  if (!(e_min >= 0.0)) throw std::invalid_argument("spec: e_min must be non-negative");
  geometry.validate();
  if (axis == SweepAxis::Variant) {
    if (variants.empty()) throw std::invalid_argument("spec: variant sweep without values");
    if (!values.empty()) throw std::invalid_argument("spec: variant sweep takes variant names");
  } else {
    if (values.empty()) throw std::invalid_argument("spec: sweep without values");
    if (!variants.empty()) throw std::invalid_argument("spec: variant names on a numeric sweep");
    for (double v : values) {
      if (integer_axis(axis) && !(v >= 1.0 && v == std::floor(v) && v <= 64.0)) {
        throw std::invalid_argument("spec: " + to_string(axis) + " values must be integers in [1, 64]");
      }
      if (axis == SweepAxis::EMin && !(v >= 0.0)) {
        throw std::invalid_argument("spec: E_min values must be non-negative");
      }
    }
  }
  for (std::size_t i = 0; i < points(); ++i) {
    OptimizerSettings st = settings;
    st.variant = variant_at(i);
    st.validate(mode);
  }
}

std::size_t ExperimentSpec::points() const {
  return axis == SweepAxis::Variant ? variants.size() : values.size();
}

std::string ExperimentSpec::point_label(std::size_t i) const {
  if (axis == SweepAxis::Variant) return to_string(variants.at(i));
  const double v = values.at(i);
  return integer_axis(axis) ? std::to_string(int(v)) : num(v);
}

SystemConfig ExperimentSpec::config_at(std::size_t i) const {
  int k = K, n = N, m = M;
  double e = e_min;
  switch (axis) {
    case SweepAxis::EMin: e = values.at(i); break;
    case SweepAxis::K: k = int(values.at(i)); break;
    case SweepAxis::M: m = int(values.at(i)); break;
    case SweepAxis::N: n = int(values.at(i)); break;
    case SweepAxis::Variant: break;
  }
  return default_config(mode, k, n, m, e);
}

Variant ExperimentSpec::variant_at(std::size_t i) const {
  return axis == SweepAxis::Variant ? variants.at(i) : variant;
}

// ---- results ------------------------------------------------------------------

bool ResultTable::any_feasible() const {
  return std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.feasible; });
}

int ResultTable::energy_columns() const {
  int k = 0;
  for (const auto& r : rows) k = std::max(k, int(r.energy.size()));
  return k;
}

std::vector<PointSummary> summarize(const std::vector<ResultRow>& rows) {
  std::vector<PointSummary> out;
  std::vector<std::vector<double>> rates;
  for (const auto& r : rows) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const PointSummary& s) { return s.sweep == r.sweep; });
    if (it == out.end()) {
      out.push_back({r.sweep});
      rates.emplace_back();
      it = out.end() - 1;
    }
    const std::size_t i = std::size_t(it - out.begin());
    if (r.feasible) {
      ++it->feasible;
      rates[i].push_back(r.min_rate);
    } else {
      ++it->infeasible;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& x = rates[i];
    if (x.empty()) continue;
    const double n = double(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    out[i].mean = mean;
    out[i].stderr_mean = x.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  }
  return out;
}

Design embed_design(const Design& d, const SystemConfig& to) {
  if (d.mode != to.mode) throw std::invalid_argument("embed_design: mode mismatch");
  if (int(d.s_E.size()) != to.N) throw std::invalid_argument("embed_design: subband count mismatch");
  Design out = Design::zeros(to);
  out.tau = d.tau;
  for (int n = 0; n < to.N; ++n) {
    const Index k = std::min<Index>(to.K, d.s_E[n].size());
    out.s_E[n].head(k) = d.s_E[n].head(k);
    out.p_I[n].head(k) = d.p_I[n].head(k);
  }
  if (to.mode == Mode::Relay) {
    for (int n = 0; n < to.N; ++n) {
      const Index m = std::min<Index>(to.M, d.U_E[n].rows());
      out.U_E[n].topLeftCorner(m, m) = d.U_E[n].topLeftCorner(m, m);
      out.U_I[n].topLeftCorner(m, m) = d.U_I[n].topLeftCorner(m, m);
    }
  } else {
    out.theta_E = CVector::Ones(to.M);
    out.theta_I = CVector::Ones(to.M);
    const Index m = std::min<Index>(to.M, d.theta_E.size());
    out.theta_E.head(m) = d.theta_E.head(m);
    out.theta_I.head(m) = d.theta_I.head(m);
  }
  return out;
}

ResultTable run_experiment(const ExperimentSpec& spec,
                           const std::function<void(const ResultRow&)>& on_row) {
  spec.validate();
  using Clock = std::chrono::steady_clock;
  const std::size_t P = spec.points();
  const std::size_t S = spec.seeds.size();

  // Continuation walks from the most constrained point to the least.
  std::vector<std::size_t> order(P);
  std::iota(order.begin(), order.end(), 0);
  const bool chain = spec.continuation && spec.axis != SweepAxis::N &&
                     spec.axis != SweepAxis::Variant;
  if (spec.axis == SweepAxis::EMin || spec.axis == SweepAxis::K) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return spec.values[a] > spec.values[b]; });
  } else if (spec.axis == SweepAxis::M) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return spec.values[a] < spec.values[b]; });
  }

  std::filesystem::path trace_dir;
  if (spec.write_traces) {
    trace_dir = std::filesystem::path(spec.outputs) / "traces";
    std::filesystem::create_directories(trace_dir);
  }

  std::vector<ResultRow> grid(P * S);
  for (std::size_t si = 0; si < S; ++si) {
    const std::uint64_t seed = spec.seeds[si];
    VariantCache cache;
    std::optional<Design> prev;
    for (std::size_t pi : order) {
      const SystemConfig cfg = spec.config_at(pi);
      const ChannelSet ch = generate_scenario(cfg, spec.geometry, seed);
      OptimizerSettings st = spec.settings;
      st.variant = spec.variant_at(pi);
      const auto t0 = Clock::now();

      std::optional<RunResult> best;
      std::string failure;
      try {
        best = algorithm1(ch, cfg, st, spec.axis == SweepAxis::Variant ? &cache : nullptr);
      } catch (const std::runtime_error& e) {
        failure = e.what();
      }
      if (chain && prev) {
        const Design start = embed_design(*prev, cfg);
        if (feasibility_report(ch, cfg, start).feasible) {
          RunResult r = algorithm1_from(ch, cfg, st, start);
          if (!best || r.trace.final_min_rate() > best->trace.final_min_rate()) {
            r.trace.notes.insert(r.trace.notes.begin(), "continued from the neighbouring point");
            best = std::move(r);
          }
        }
      }

      ResultRow row;
      row.sweep = spec.point_label(pi);
      row.seed = seed;
      row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
      if (best) {
        row.feasible = true;
        row.status = "ok";
        row.min_rate = best->trace.final_min_rate();
        row.tau = best->design.tau;
        row.energy.resize(cfg.K);
        for (int k = 0; k < cfg.K; ++k) row.energy(k) = harvested_energy(ch, cfg, best->design, k);
        row.iterations = int(best->trace.outer.size());
        prev = best->design;
        if (spec.write_traces) {
          const Json j = {{"sweep", row.sweep},
                          {"seed", seed},
                          {"trace", to_json(best->trace)},
                          {"design", to_json(best->design)}};
          write_file(trace_dir / (spec.name + "_" + row.sweep + "_" + std::to_string(seed) + ".json"),
                     j.dump(1) + "\n");
        }
      } else {
        row.status = "infeasible: " + failure;
        prev.reset();
      }
      if (on_row) on_row(row);
      grid[pi * S + si] = std::move(row);
    }
  }

  ResultTable table;
  table.axis = to_string(spec.axis);
  table.timing = spec.timing;
  table.rows = std::move(grid);
  table.summary = summarize(table.rows);
  return table;
}

std::string results_csv(const ResultTable& table) {
  const int kc = table.energy_columns();
  std::ostringstream out;
  out << "sweep,seed,status,min_rate,tau";
  for (int k = 1; k <= kc; ++k) out << ",energy_" << k;
  out << ",iters,ms\n";
  for (const auto& r : table.rows) {
    out << r.sweep << ',' << r.seed << ',' << (r.feasible ? "ok" : "infeasible") << ',';
    if (r.feasible) out << num(r.min_rate) << ',' << num(r.tau);
    else out << ',';
    for (int k = 0; k < kc; ++k) {
      out << ',';
      if (r.feasible && k < r.energy.size()) out << num(r.energy(k));
    }
    out << ',';
    if (r.feasible) out << r.iterations;
    out << ',';
    if (table.timing) out << num(std::round(r.wall_ms * 1000.0) / 1000.0);
    out << '\n';
  }
  return out.str();
}

std::string summary_csv(const ResultTable& table) {
  std::ostringstream out;
  out << "sweep,feasible,infeasible,mean,stderr\n";
  for (const auto& s : table.summary) {
    out << s.sweep << ',' << s.feasible << ',' << s.infeasible << ',';
    if (s.feasible > 0) out << num(s.mean) << ',' << num(s.stderr_mean);
    else out << ',';
    out << '\n';
  }
  return out.str();
}

std::vector<std::string> emit_results(const ResultTable& table, const std::string& dir,
                                      const std::string& name, EmitFormat format) {
  if (table.rows.empty()) throw std::invalid_argument("emit_results: empty result table");
  const std::filesystem::path base(dir);
  std::error_code ec;
  std::filesystem::create_directories(base, ec);
  if (ec) throw std::runtime_error("cannot create " + base.string() + ": " + ec.message());
  std::vector<std::string> written;
  if (format != EmitFormat::Json) {
    const auto p = base / (name + ".csv");
    write_file(p, results_csv(table));
    written.push_back(p.string());
    const auto q = base / (name + "_summary.csv");
    write_file(q, summary_csv(table));
    written.push_back(q.string());
  }
  if (format != EmitFormat::Csv) {
    const auto p = base / (name + ".json");
    write_file(p, to_json(table).dump(1) + "\n");
    written.push_back(p.string());
  }
  return written;
}

// ---- complexity ---------------------------------------------------------------

std::vector<ComplexityRow> complexity_report(const SystemConfig& cfg, Variant variant) {
  const double K = cfg.K, N = cfg.N, M = cfg.M;
  std::vector<ComplexityRow> rows;
  auto add = [&](std::string step, double base, double exponent) {
    rows.push_back({std::move(step), base, exponent, std::pow(base, exponent), -1.0});
  };
  if (variant != Variant::Baseline2) {
    double base = 0.0;
    if (cfg.mode == Mode::Relay) {
      switch (variant) {
        case Variant::TStatic: base = N * M * M * (1 + N) * (1 + 2 * K); break;
        case Variant::TFStatic: base = 2 * M * M * (1 + 2 * K); break;
        default: base = 2 * N * M * M * (1 + 2 * N) * (1 + K); break;
      }
    } else {
      base = variant == Variant::TStatic ? 2 * M * (N + 2 * K + 1) : 6 * M * (N + K + 1);
    }
    add("matrices", base, 3.5);
  }
  add("waveforms", K * N * (1 + 2 * N) * (5 + 2 * K), 3.5);
  add("tau", N, 3.0);
  return rows;
}

void attach_measurements(std::vector<ComplexityRow>& rows, const RunTrace& trace) {
  if (trace.outer.empty()) return;
  double m = 0, w = 0, t = 0;
  for (const auto& r : trace.outer) {
    m += r.ms_matrices;
    w += r.ms_waveforms;
    t += r.ms_tau;
  }
  const double n = double(trace.outer.size());
  for (auto& row : rows) {
    if (row.step == "matrices") row.measured_ms = m / n;
    if (row.step == "waveforms") row.measured_ms = w / n;
    if (row.step == "tau") row.measured_ms = t / n;
  }
}

std::string format_complexity(const std::vector<ComplexityRow>& rows) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-10s %14s %8s %14s %16s\n", "step", "base", "exponent",
                "order", "ms/outer");
  out << line;
  for (const auto& r : rows) {
    char ms[32] = "-";
    if (r.measured_ms >= 0) std::snprintf(ms, sizeof(ms), "%.3f", r.measured_ms);
    std::snprintf(line, sizeof(line), "%-10s %14.0f %8.1f %14.4e %16s\n", r.step.c_str(), r.base,
                  r.exponent, r.order, ms);
    out << line;
  }
  return out.str();
}

}  // namespace wpc

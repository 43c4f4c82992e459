// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors
//
// Seeded Monte-Carlo experiments: one sweep axis, a list of seeds, a result
// table with per-point aggregates, and CSV/JSON emission.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wpc/optimizer.hpp"

namespace wpc {

enum class SweepAxis { EMin, K, M, N, Variant };
std::string to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(const std::string& name);  // E_min|K|M|N|variant

enum class EmitFormat { Csv, Json, Both };
std::string to_string(EmitFormat f);
EmitFormat emit_format_from_string(const std::string& name);  // csv|json|both

struct ExperimentSpec {
  std::string name = "experiment";
  Mode mode = Mode::Relay;
  int K = 3;
  int N = 4;
  int M = 4;
  double e_min = 0.0;  // J, every pair
  ScenarioGeometry geometry;
  Variant variant = Variant::Full;

  SweepAxis axis = SweepAxis::EMin;
  std::vector<double> values;      // numeric axes
  std::vector<Variant> variants;   // variant axis
  std::vector<std::uint64_t> seeds;

  std::string outputs = "out";
  EmitFormat emit = EmitFormat::Both;
  // Start each sweep point also from the neighbouring point's final design,
  // embedded into the current configuration; the better run is kept.
  bool continuation = true;
  // Wall times vary between runs; without timing the ms column stays empty
  // so that reruns are byte-identical.
  bool timing = false;
  bool write_traces = false;
  OptimizerSettings settings;

  /// Throws std::invalid_argument naming the first broken invariant.
  void validate() const;
  std::size_t points() const;
  std::string point_label(std::size_t i) const;
  /// Configuration for sweep point i (the variant axis keeps the base one).
  SystemConfig config_at(std::size_t i) const;
  Variant variant_at(std::size_t i) const;
};

struct ResultRow {
  std::string sweep;  // sweep value as printed
  std::uint64_t seed = 0;
  bool feasible = false;
  std::string status;  // "ok" or the failure message
  double min_rate = 0.0;
  double tau = 0.0;
  RVector energy;  // per pair, J
  int iterations = 0;
  double wall_ms = 0.0;
};

struct PointSummary {
  std::string sweep;
  int feasible = 0;
  int infeasible = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;  // sample standard deviation / sqrt(count)
};

struct ResultTable {
  std::string axis;
  bool timing = false;
  std::vector<ResultRow> rows;  // point-major, seeds in spec order
  std::vector<PointSummary> summary;

  bool any_feasible() const;
  int energy_columns() const;
};

/// Mean and standard error over feasible rows, one entry per sweep value in
/// first-appearance order.
std::vector<PointSummary> summarize(const std::vector<ResultRow>& rows);

/// Runs every (sweep value, seed) pair. Infeasible pairs become rows with
/// feasible = false. `on_row` is called after each row in run order.
ResultTable run_experiment(const ExperimentSpec& spec,
                           const std::function<void(const ResultRow&)>& on_row = {});

/// Relay: zero-pads or truncates node matrices; IRS: new elements reflect
/// with unit gain. Pairs beyond the target K are dropped, missing ones get
/// zero power. Subband counts must match.
Design embed_design(const Design& d, const SystemConfig& to);

/// CSV text: sweep,seed,status,min_rate,tau,energy_1..energy_K,iters,ms.
std::string results_csv(const ResultTable& table);
/// Aggregates as CSV: sweep,feasible,infeasible,mean,stderr.
std::string summary_csv(const ResultTable& table);

/// Writes <dir>/<name>.csv, <dir>/<name>_summary.csv and/or <dir>/<name>.json.
/// Throws std::invalid_argument on an empty table and std::runtime_error with
/// the path on I/O failure. Returns the written paths.
std::vector<std::string> emit_results(const ResultTable& table, const std::string& dir,
                                      const std::string& name, EmitFormat format);

struct ComplexityRow {
  std::string step;
  double base = 0.0;  // problem-size base
  double exponent = 3.5;
  double order = 0.0;  // base^exponent
  double measured_ms = -1.0;  // negative when not measured
};

/// Operation-count orders per step of one outer iteration (matrices,
/// waveforms, tau) for a variant, instantiated with cfg.
std::vector<ComplexityRow> complexity_report(const SystemConfig& cfg, Variant variant);

/// Adds wall times per step measured from one traced run.
void attach_measurements(std::vector<ComplexityRow>& rows, const RunTrace& trace);

std::string format_complexity(const std::vector<ComplexityRow>& rows);

}  // namespace wpc

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors
//
// Alternating MM over node matrices, waveforms/powers and the slot split.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wpc/subproblems.hpp"

namespace wpc {

enum class Variant { Full, TStatic, TFStatic, Baseline1, Baseline2 };
std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

enum class InitStrategy { Deterministic, Random };

struct OptimizerSettings {
  double eps_inner = 1e-4;
  double eps_outer = 1e-4;
  int max_inner = 30;
  int max_outer = 50;
  InitStrategy init_strategy = InitStrategy::Deterministic;
  std::uint64_t init_seed = 0;
  Variant variant = Variant::Full;
  C5Rule c5_rule = C5Rule::LogAffine;
  // After the run from the initial design, continue from the best final
  // design of the contained variants (see contained_variants) if it is ahead.
  bool nested_start = true;
  double beta_safety = 1.1;
  SolverSettings solver;

  void validate(Mode mode) const;
};

struct InnerResult {
  Design design;
  std::vector<double> alpha;  // min_k sum_n log2(1 + SINR), start value first
  int solves = 0;
  int newton_steps = 0;
  bool ok = true;
  std::string message;
};

InnerResult inner_loop_matrices(const ChannelSet& ch, const SystemConfig& cfg,
                                const Design& design, const OptimizerSettings& settings);

/// Throws std::invalid_argument when tau = T (no information slot).
InnerResult inner_loop_waveforms(const ChannelSet& ch, const SystemConfig& cfg,
                                 const Design& design, const OptimizerSettings& settings,
                                 bool optimize_s = true);

struct TauResult {
  bool feasible = false;
  double tau = 0.0;
  double lower = 0.0;  // largest lower bound (0 if none)
  double upper = 0.0;  // smallest upper bound (T if none)
  std::vector<double> v_bar;  // per-pair energy lower bounds
  std::vector<int> failed_conditions;  // feasibility conditions 1..5 that do not hold
  std::string message;
};

/// Smallest tau meeting C1-C4 with everything else fixed. C2 and C3 are
/// kept per instance, so every returned tau satisfies the original
/// constraints; when the feasibility conditions hold this equals max_k v_bar_k.
TauResult tau_closed_form(const ChannelSet& ch, const SystemConfig& cfg, const Design& design);

/// Moves tau while keeping the energy spent in each slot: s_E scales by
/// sqrt(tau / tau') and p_I by (T - tau) / (T - tau'). Candidates come from a
/// uniform grid plus local refinement. The information-slot node variables
/// (both slots when tied) shrink as needed to keep C3; only feasible
/// improvements are kept.
struct SlotRescaleResult {
  Design design;
  double min_rate = 0.0;
  bool improved = false;
};
Design rescale_slots(const SystemConfig& cfg, const Design& d, double tau);
SlotRescaleResult slot_rescale(const ChannelSet& ch, const SystemConfig& cfg, const Design& d,
                               bool tie_slots, bool tie_subbands, int grid = 200);

/// Feasible starting design, or std::runtime_error after the retry schedule.
Design initial_design(const ChannelSet& ch, const SystemConfig& cfg,
                      const OptimizerSettings& settings);

struct OuterRecord {
  double min_rate = 0.0;
  std::vector<double> alpha_matrices;
  std::vector<double> alpha_waveforms;
  double tau = 0.0;
  RVector energy;  // per pair, J
  int solves = 0;
  int newton_steps = 0;
  double wall_ms = 0.0;
  double ms_matrices = 0.0;
  double ms_waveforms = 0.0;
  double ms_tau = 0.0;
};

struct RunTrace {
  Variant variant = Variant::Full;
  double initial_min_rate = 0.0;
  double initial_tau = 0.0;
  std::vector<OuterRecord> outer;
  bool converged = false;
  std::vector<std::string> notes;

  double final_min_rate() const {
    return outer.empty() ? initial_min_rate : outer.back().min_rate;
  }
};

struct RunResult {
  Design design;
  RunTrace trace;
};

/// Variants with a feasible set inside that of v: full contains t_static and
/// both baselines, relay t_static contains t_f_static.
std::vector<Variant> contained_variants(Mode mode, Variant v);

/// Finished runs keyed by variant, for one channel set and configuration.
using VariantCache = std::map<Variant, RunResult>;

/// Algorithm 1 for settings.variant. Nested runs and the result itself are
/// stored in `cache` when given, so a caller running several variants on the
/// same channels pays for each one once.
RunResult algorithm1(const ChannelSet& ch, const SystemConfig& cfg,
                     const OptimizerSettings& settings, VariantCache* cache = nullptr);

/// Outer loop of settings.variant from a given feasible design, without
/// initialisation or nested starts. Throws std::invalid_argument when `start`
/// is infeasible.
RunResult algorithm1_from(const ChannelSet& ch, const SystemConfig& cfg,
                          const OptimizerSettings& settings, const Design& start);

/// Same as algorithm1; kept as the variant-dispatching entry point.
RunResult run_variant(const ChannelSet& ch, const SystemConfig& cfg,
                      const OptimizerSettings& settings, VariantCache* cache = nullptr);

/// Scales the node matrices (relay) or reflection vectors (IRS) by one common
/// factor per subband so that C3 holds at `fill` times the budget.
Design scale_node_to_budget(const ChannelSet& ch, const SystemConfig& cfg, const Design& d,
                            double fill, bool common_over_subbands);

}  // namespace wpc

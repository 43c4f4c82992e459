// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors
//
// Builders that turn one MM expansion point into a ConvexSubproblem, plus the
// inverse maps from a solver point back to a Design.
//
// Layout: z[0] is alpha. Matrix subproblems then hold var_E(n) and var_I(n)
// in real-composite form; tied variants reuse offsets. Waveform subproblems
// hold s_E,n (2K reals) and p_I,n (K reals) per subband.

#pragma once

#include <vector>

#include "wpc/solver.hpp"
#include "wpc/surrogates.hpp"

namespace wpc {

/// Which node variables share storage. Slots ties U_E to U_I (t-static);
/// SlotsAndSubbands additionally uses one matrix for every subband.
enum class Tying { None, Slots, SlotsAndSubbands };

/// Surrogate used for the rate constraint in the matrix step. LogAffine
/// linearises u^H B u inside the logarithm; Lemma1 uses the quadratic
/// majorizer with the isotropic curvature bound.
enum class C5Rule { LogAffine, Lemma1 };

/// MinRate is the MM step proper. MinEnergyRatio drops C4/C5 and maximises
/// min_k E_k / E_min,k through the concave energy bounds; it is used to
/// restore C4 when the starting point misses it.
enum class StepObjective { MinRate, MinEnergyRatio };

struct MatrixSubproblem {
  ConvexSubproblem sp;
  RVector start;
  std::vector<Index> e_offset;  // per n
  std::vector<Index> i_offset;
  double start_alpha = 0.0;  // objective at the expansion point
  std::vector<double> beta;  // per k

  Design unpack(const RVector& z, const Design& base) const;
};

MatrixSubproblem build_matrix_subproblem(const ChannelSet& ch, const SystemConfig& cfg,
                                         const Design& prev, Tying tying = Tying::None,
                                         C5Rule rule = C5Rule::LogAffine,
                                         double beta_safety = 1.1,
                                         StepObjective objective = StepObjective::MinRate);

/// Mode-checked entry points.
MatrixSubproblem build_relay_matrix_subproblem(const ChannelSet& ch, const SystemConfig& cfg,
                                               const Design& prev, Tying tying = Tying::None,
                                               C5Rule rule = C5Rule::LogAffine);
MatrixSubproblem build_irs_subproblem(const ChannelSet& ch, const SystemConfig& cfg,
                                      const Design& prev, Tying tying = Tying::None,
                                      C5Rule rule = C5Rule::LogAffine);

struct WaveformSubproblem {
  ConvexSubproblem sp;
  RVector start;
  std::vector<Index> s_offset;  // per n; -1 when s_E is held fixed
  std::vector<Index> p_offset;
  double start_alpha = 0.0;
  std::vector<double> beta;

  Design unpack(const RVector& z, const Design& base) const;
};

/// Waveform/power step at fixed node matrices and tau. With optimize_s false
/// the energy waveforms stay at prev.s_E and only p_I moves.
WaveformSubproblem build_waveform_subproblem(const ChannelSet& ch, const SystemConfig& cfg,
                                             const Design& prev, bool optimize_s = true,
                                             double beta_safety = 1.1,
                                             StepObjective objective = StepObjective::MinRate);

/// min_k sum_n log2(1 + SINR_{k,n}).
double min_log_rate_sum(const ChannelSet& ch, const SystemConfig& cfg, const Design& d);

/// min_k E_k / E_min,k over pairs with a positive target (+inf if none).
double min_energy_ratio(const ChannelSet& ch, const SystemConfig& cfg, const Design& d);

}  // namespace wpc

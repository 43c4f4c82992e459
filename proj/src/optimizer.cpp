// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors

#include "wpc/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wpc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Tying tying_for(Variant v) {
  switch (v) {
    case Variant::TStatic: return Tying::Slots;
    case Variant::TFStatic: return Tying::SlotsAndSubbands;
    default: return Tying::None;
  }
}

bool ties_subbands(const SystemConfig& cfg, Variant v) {
  return cfg.mode == Mode::ActiveIrs || v == Variant::TFStatic;
}

RVector pair_energies(const ChannelSet& ch, const SystemConfig& cfg, const Design& d) {
  RVector e(cfg.K);
  for (int k = 0; k < cfg.K; ++k) e(k) = harvested_energy(ch, cfg, d, k);
  return e;
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Full: return "full";
    case Variant::TStatic: return "t_static";
    case Variant::TFStatic: return "t_f_static";
    case Variant::Baseline1: return "baseline1";
    case Variant::Baseline2: return "baseline2";
  }
  return "unknown";
}

Variant variant_from_string(const std::string& name) {
  for (Variant v : {Variant::Full, Variant::TStatic, Variant::TFStatic, Variant::Baseline1,
                    Variant::Baseline2}) {
    if (to_string(v) == name) return v;
  }
  throw std::invalid_argument("unknown variant '" + name +
                              "' (expected full|t_static|t_f_static|baseline1|baseline2)");
}

void OptimizerSettings::validate(Mode mode) const {
  if (!(eps_inner > 0) || !(eps_outer > 0)) {
    throw std::invalid_argument("optimizer: eps_inner and eps_outer must be positive");
  }
  if (max_inner <= 0 || max_outer <= 0) {
    throw std::invalid_argument("optimizer: iteration limits must be positive");
  }
  if (variant == Variant::TFStatic && mode != Mode::Relay) {
    throw std::invalid_argument("optimizer: t_f_static is only defined for the relay");
  }
}

// ---- node scaling and initialisation -----------------------------------------------

Design scale_node_to_budget(const ChannelSet& ch, const SystemConfig& cfg, const Design& d,
                            double fill, bool common_over_subbands) {
  std::vector<double> c(cfg.N);
  for (int n = 0; n < cfg.N; ++n) {
    const double used = node_energy(ch, cfg, d, n);
    c[n] = used > 0 ? std::sqrt(fill * cfg.T * cfg.p_rf_node(n) / used) : kInf;
  }
  Design out = d;
  if (cfg.mode == Mode::ActiveIrs || common_over_subbands) {
    const double s = *std::min_element(c.begin(), c.end());
    if (cfg.mode == Mode::Relay) {
      for (int n = 0; n < cfg.N; ++n) {
        out.U_E[n] *= s;
        out.U_I[n] *= s;
      }
    } else {
      out.theta_E *= s;
      out.theta_I *= s;
    }
  } else {
    for (int n = 0; n < cfg.N; ++n) {
      out.U_E[n] *= c[n];
      out.U_I[n] *= c[n];
    }
  }
  return out;
}

namespace {

// Waveforms at `fraction` of C2 in the energy slot, the rest to p_I.
void set_waveforms(const SystemConfig& cfg, Design& d, double fraction, bool random_phase,
                   std::uint64_t seed) {
  const double r2 = 2.0 * cfg.rho();
  for (int n = 0; n < cfg.N; ++n) {
    SubstreamRng rng(seed, 21, std::uint64_t(n), 0);
    for (int k = 0; k < cfg.K; ++k) {
      const double budget = cfg.T * cfg.p_rf_tx(k, n);
      const double mag = std::sqrt(fraction * budget * r2 / d.tau);
      const double phase = random_phase ? 2.0 * std::numbers::pi * rng.uniform() : 0.0;
      d.s_E[n](k) = std::polar(mag, phase);
      d.p_I[n](k) = (1.0 - fraction) * budget * r2 / (cfg.T - d.tau);
    }
  }
}

void set_node_shape(const SystemConfig& cfg, Design& d, bool random, bool tie_subbands,
                    std::uint64_t seed) {
  if (cfg.mode == Mode::Relay) {
    for (int n = 0; n < cfg.N; ++n) {
      CMatrix u = CMatrix::Identity(cfg.M, cfg.M);
      if (random) {
        SubstreamRng rng(seed, 22, std::uint64_t(tie_subbands ? 0 : n), 0);
        for (Index j = 0; j < u.cols(); ++j) {
          for (Index i = 0; i < u.rows(); ++i) u(i, j) = rng.complex_gaussian();
        }
      }
      d.U_E[n] = u;
      d.U_I[n] = u;
    }
  } else {
    CVector t = CVector::Ones(cfg.M);
    if (random) {
      SubstreamRng rng(seed, 23, 0, 0);
      for (Index m = 0; m < t.size(); ++m) {
        t(m) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
      }
    }
    d.theta_E = t;
    d.theta_I = t;
  }
}

// Feasible for everything except possibly C4.
bool power_feasible(const ChannelSet& ch, const SystemConfig& cfg, const Design& d) {
  const FeasibilityReport r = feasibility_report(ch, cfg, d);
  return std::all_of(r.violated.begin(), r.violated.end(),
                     [](const std::string& v) { return v.rfind("C4", 0) == 0; });
}

// Raises min_k E_k / E_min,k by energy-ratio steps at fixed tau: node
// variables alone first, then alternating with the waveforms.
Design restore_energy(const ChannelSet& ch, const SystemConfig& cfg, Design d,
                      const OptimizerSettings& settings) {
  constexpr int kRounds = 12;
  constexpr double kTarget = 1.0 + 1e-3;
  const Tying tying = tying_for(settings.variant);
  double ratio = min_energy_ratio(ch, cfg, d);
  auto attempt = [&](auto sub) {
    const SolverReport rep = solve_barrier(sub.sp, sub.start, settings.solver);
    if (rep.status == SolverStatus::Infeasible) return;
    const Design cand = sub.unpack(rep.x, d);
    const double cr = min_energy_ratio(ch, cfg, cand);
    if (cr > ratio && power_feasible(ch, cfg, cand)) {
      d = cand;
      ratio = cr;
    }
  };
  for (int pass = 0; pass < 2; ++pass) {
    const bool waveforms = pass == 1 && settings.variant != Variant::Baseline1;
    if (pass == 1 && !waveforms) break;
    for (int r = 0; r < kRounds && ratio < kTarget; ++r) {
      const double before = ratio;
      if (settings.variant != Variant::Baseline2) {
        attempt(build_matrix_subproblem(ch, cfg, d, tying, settings.c5_rule,
                                        settings.beta_safety, StepObjective::MinEnergyRatio));
      }
      if (waveforms && ratio < kTarget) {
        attempt(build_waveform_subproblem(ch, cfg, d, true, settings.beta_safety,
                                          StepObjective::MinEnergyRatio));
      }
      if (ratio < before * (1.0 + 1e-6)) break;
    }
  }
  return d;
}

bool strictly_usable(const ChannelSet& ch, const SystemConfig& cfg, const Design& d) {
  const FeasibilityReport r = feasibility_report(ch, cfg, d);
  if (!r.feasible) return false;
  for (int k = 0; k < cfg.K; ++k) {
    if (cfg.e_min(k) > 0 && !(r.c4_slack(k) > 1e-6 * cfg.e_min(k))) return false;
  }
  if (cfg.mode == Mode::ActiveIrs && !(r.node_slack.minCoeff() > 1e-9)) return false;
  return true;
}

}  // namespace

Design initial_design(const ChannelSet& ch, const SystemConfig& cfg,
                      const OptimizerSettings& settings) {
  const bool random = settings.init_strategy == InitStrategy::Random;
  const bool tie_n = ties_subbands(cfg, settings.variant);
  constexpr double kFill = 0.99;
  const double taus[] = {0.5, 0.7, 0.9, 0.3, 0.1, 0.03, 0.01, 1e-3, 1e-4};
  const double fractions[] = {0.9, 0.99, 0.5};
  for (double tf : taus) {
    for (double frac : fractions) {
      Design d = Design::zeros(cfg);
      d.tau = tf * cfg.T;
      set_waveforms(cfg, d, frac, random, settings.init_seed);
      set_node_shape(cfg, d, random, tie_n, settings.init_seed);
      d = scale_node_to_budget(ch, cfg, d, kFill, tie_n);
      if (strictly_usable(ch, cfg, d)) return d;
    }
  }
  // No plain start meets C4; restore it from the default start at each tau.
  for (double tf : taus) {
    Design d = Design::zeros(cfg);
    d.tau = tf * cfg.T;
    set_waveforms(cfg, d, fractions[0], random, settings.init_seed);
    set_node_shape(cfg, d, random, tie_n, settings.init_seed);
    d = scale_node_to_budget(ch, cfg, d, kFill, tie_n);
    if (!power_feasible(ch, cfg, d)) continue;
    d = restore_energy(ch, cfg, d, settings);
    if (strictly_usable(ch, cfg, d)) return d;
  }
  throw std::runtime_error("initialisation: no feasible starting design found");
}

// ---- inner loops ----------------------------------------------------------------

namespace {

template <typename Build>
InnerResult inner_loop(const ChannelSet& ch, const SystemConfig& cfg, const Design& design,
                       const OptimizerSettings& settings, Build build) {
  InnerResult r;
  r.design = design;
  double alpha = min_log_rate_sum(ch, cfg, design);
  r.alpha.push_back(alpha);
  for (int it = 0; it < settings.max_inner; ++it) {
    auto sub = build(r.design);
    const SolverReport rep = solve_barrier(sub.sp, sub.start, settings.solver);
    ++r.solves;
    r.newton_steps += rep.iterations;
    if (rep.status == SolverStatus::Infeasible) {
      r.ok = false;
      r.message = "phase I found no strictly feasible point: " + rep.message;
      break;
    }
    const Design cand = sub.unpack(rep.x, r.design);
    const FeasibilityReport fr = feasibility_report(ch, cfg, cand);
    if (!fr.feasible) {
      r.ok = false;
      r.message = "subproblem point violates " + fr.violated.front();
      break;
    }
    const double a = min_log_rate_sum(ch, cfg, cand);
    if (a < alpha) break;  // within solver tolerance of a stationary point
    r.design = cand;
    r.alpha.push_back(a);
    const double step = a - alpha;
    alpha = a;
    if (step < settings.eps_inner) break;
  }
  return r;
}

}  // namespace

InnerResult inner_loop_matrices(const ChannelSet& ch, const SystemConfig& cfg,
                                const Design& design, const OptimizerSettings& settings) {
  const Tying tying = tying_for(settings.variant);
  return inner_loop(ch, cfg, design, settings, [&](const Design& d) {
    return build_matrix_subproblem(ch, cfg, d, tying, settings.c5_rule, settings.beta_safety);
  });
}

InnerResult inner_loop_waveforms(const ChannelSet& ch, const SystemConfig& cfg,
                                 const Design& design, const OptimizerSettings& settings,
                                 bool optimize_s) {
  if (!(design.tau < cfg.T)) {
    throw std::invalid_argument("inner_loop_waveforms: tau = T leaves no information slot");
  }
  return inner_loop(ch, cfg, design, settings, [&](const Design& d) {
    return build_waveform_subproblem(ch, cfg, d, optimize_s, settings.beta_safety);
  });
}

// ---- slot split -------------------------------------------------------------------

TauResult tau_closed_form(const ChannelSet& ch, const SystemConfig& cfg, const Design& design) {
  TauResult r;
  const double r2 = 2.0 * cfg.rho();
  double lower = 0.0;
  double upper = cfg.T;
  bool contradiction = false;
  // a tau <= b
  auto add = [&](double a, double b) {
    if (a > 0) {
      upper = std::min(upper, b / a);
    } else if (a < 0) {
      lower = std::max(lower, b / a);
    } else if (b < 0) {
      contradiction = true;
    }
  };

  r.v_bar.resize(cfg.K);
  double v_max = 0.0;
  for (int k = 0; k < cfg.K; ++k) {
    double v = 0.0;
    if (cfg.e_min(k) > 0) {
      const double shape = eh_shape(cfg.eh, harvester_input_power(ch, design, k));
      v = shape > 0 ? cfg.rho() * cfg.e_min(k) / shape : kInf;
    }
    r.v_bar[k] = v;
    v_max = std::max(v_max, v);
  }
  lower = std::max(lower, v_max);

  bool c2_neg = false, c3_neg = false, c2_cut = false, c3_cut = false;
  for (int n = 0; n < cfg.N; ++n) {
    for (int k = 0; k < cfg.K; ++k) {
      const double p = design.p_I[n](k);
      const double a = (std::norm(design.s_E[n](k)) - p) / r2;
      const double b = cfg.T * cfg.p_rf_tx(k, n) - cfg.T * p / r2;
      add(a, b);
      if (b < 0) c2_neg = true;
      if (a > 0 && b / a < v_max) c2_cut = true;
    }
    const CMatrix& H = ch.H[n];
    const CMatrix ue = design.amp_E(n);
    const CMatrix ui = design.amp_I(n);
    const double s2 = cfg.sigma2_node(n);
    const CMatrix v_i = H.adjoint() * ui.adjoint() * ui * H;
    const double x_e = quad_form(H.adjoint() * ue.adjoint() * ue * H, design.s_E[n]) +
                       s2 * ue.squaredNorm();
    double x_i = s2 * ui.squaredNorm();
    for (int k = 0; k < cfg.K; ++k) x_i += design.p_I[n](k) * v_i(k, k).real();
    const double a = (x_e - x_i) / r2;
    const double b = cfg.T * cfg.p_rf_node(n) - cfg.T * x_i / r2;
    add(a, b);
    if (b < 0) c3_neg = true;
    if (a > 0 && b / a < v_max) c3_cut = true;
  }

  if (v_max > cfg.T) r.failed_conditions.push_back(1);
  if (c2_neg) r.failed_conditions.push_back(2);
  if (c3_neg) r.failed_conditions.push_back(3);
  if (c2_cut) r.failed_conditions.push_back(4);
  if (c3_cut) r.failed_conditions.push_back(5);

  r.lower = lower;
  r.upper = upper;
  r.feasible = !contradiction && lower <= upper;
  if (r.feasible) {
    r.tau = lower;
  } else {
    r.tau = design.tau;
    r.message = "empty feasible set for tau";
    if (!r.failed_conditions.empty()) {
      r.message += "; feasibility condition(s)";
      for (int c : r.failed_conditions) r.message += " " + std::to_string(c);
      r.message += " violated";
    }
  }
  return r;
}

Design rescale_slots(const SystemConfig& cfg, const Design& d, double tau) {
  Design out = d;
  const double se = std::sqrt(d.tau / tau);
  const double si = (cfg.T - d.tau) / (cfg.T - tau);
  for (int n = 0; n < cfg.N; ++n) {
    out.s_E[n] *= se;
    out.p_I[n] *= si;
  }
  out.tau = tau;
  return out;
}

namespace {

void scale_node(const SystemConfig& cfg, Design& d, int n, double c, bool both_slots) {
  if (cfg.mode == Mode::Relay) {
    d.U_I[n] *= c;
    if (both_slots) d.U_E[n] *= c;
  } else {
    d.theta_I *= c;
    if (both_slots) d.theta_E *= c;
  }
}

// Shrinks the information-slot node variables (both slots when tied) until
// C3 holds with a small margin. Node energy is quadratic in the factor.
Design fit_node_budget(const ChannelSet& ch, const SystemConfig& cfg, Design d, bool tie_slots,
                       bool tie_subbands) {
  constexpr double kFill = 1.0 - 1e-9;
  std::vector<double> c(cfg.N, 1.0);
  for (int n = 0; n < cfg.N; ++n) {
    const double used = node_energy(ch, cfg, d, n);
    const double budget = kFill * cfg.T * cfg.p_rf_node(n);
    if (used <= budget) continue;
    Design zero = d;
    scale_node(cfg, zero, n, 0.0, tie_slots);
    const double fixed = node_energy(ch, cfg, zero, n);
    const double scaled = used - fixed;
    c[n] = (budget > fixed && scaled > 0) ? std::sqrt((budget - fixed) / scaled) : 0.0;
  }
  if (cfg.mode == Mode::ActiveIrs || tie_subbands) {
    const double m = *std::min_element(c.begin(), c.end());
    if (cfg.mode == Mode::ActiveIrs) {
      if (m < 1.0) scale_node(cfg, d, 0, m, tie_slots);
    } else {
      for (int n = 0; n < cfg.N; ++n) scale_node(cfg, d, n, m, tie_slots);
    }
  } else {
    for (int n = 0; n < cfg.N; ++n) scale_node(cfg, d, n, c[n], tie_slots);
  }
  return d;
}

}  // namespace

SlotRescaleResult slot_rescale(const ChannelSet& ch, const SystemConfig& cfg, const Design& d,
                               bool tie_slots, bool tie_subbands, int grid) {
  if (grid < 2) throw std::invalid_argument("slot_rescale: grid must be at least 2");
  SlotRescaleResult best{d, min_rate(ch, cfg, d), false};
  if (!(d.tau > 0.0 && d.tau < cfg.T)) return best;
  auto consider = [&](double tau) {
    if (!(tau > 0.0 && tau < cfg.T)) return;
    const Design cand =
        fit_node_budget(ch, cfg, rescale_slots(cfg, d, tau), tie_slots, tie_subbands);
    if (!feasibility_report(ch, cfg, cand).feasible) return;
    const double r = min_rate(ch, cfg, cand);
    if (r > best.min_rate) best = {cand, r, true};
  };
  for (int i = 1; i < grid; ++i) consider(cfg.T * double(i) / grid);
  // Local refinement around the best grid point.
  double h = cfg.T / grid;
  for (int pass = 0; pass < 30 && h > 1e-9 * cfg.T; ++pass) {
    const double c = best.design.tau;
    consider(c - h);
    consider(c + h);
    h *= 0.5;
  }
  return best;
}

// ---- Algorithm 1 ------------------------------------------------------------------

std::vector<Variant> contained_variants(Mode mode, Variant v) {
  if (v == Variant::Full) {
    return {Variant::TStatic, Variant::Baseline1, Variant::Baseline2};
  }
  if (v == Variant::TStatic && mode == Mode::Relay) return {Variant::TFStatic};
  return {};
}

namespace {

RunResult outer_loop(const ChannelSet& ch, const SystemConfig& cfg,
                     const OptimizerSettings& settings, Design d);

RunResult run_cached(const ChannelSet& ch, const SystemConfig& cfg,
                     const OptimizerSettings& settings, VariantCache& cache) {
  const auto hit = cache.find(settings.variant);
  if (hit != cache.end()) return hit->second;

  Design d0 = initial_design(ch, cfg, settings);
  if (settings.variant == Variant::Baseline2) {
    d0 = scale_node_to_budget(ch, cfg, d0, 1.0, ties_subbands(cfg, settings.variant));
  }
  RunResult res = outer_loop(ch, cfg, settings, d0);
  if (settings.nested_start) {
    const RunResult* best = nullptr;
    VariantCache::const_iterator it;
    for (Variant sub : contained_variants(cfg.mode, settings.variant)) {
      OptimizerSettings s = settings;
      s.variant = sub;
      run_cached(ch, cfg, s, cache);
      it = cache.find(sub);
      if (it->second.trace.final_min_rate() >
          (best ? best->trace.final_min_rate() : res.trace.final_min_rate())) {
        best = &it->second;
      }
    }
    if (best) {
      RunResult cont = outer_loop(ch, cfg, settings, best->design);
      cont.trace.notes.insert(cont.trace.notes.begin(),
                              "continued from the " + to_string(best->trace.variant) + " result");
      res = std::move(cont);
    }
  }
  cache.emplace(settings.variant, res);
  return res;
}

RunResult outer_loop(const ChannelSet& ch, const SystemConfig& cfg,
                     const OptimizerSettings& settings, Design d) {
  using Clock = std::chrono::steady_clock;
  RunResult res;
  RunTrace& tr = res.trace;
  tr.variant = settings.variant;
  tr.initial_min_rate = min_rate(ch, cfg, d);
  tr.initial_tau = d.tau;
  double rate = tr.initial_min_rate;

  for (int l = 0; l < settings.max_outer; ++l) {
    const auto t0 = Clock::now();
    auto since = [](Clock::time_point a) {
      return std::chrono::duration<double, std::milli>(Clock::now() - a).count();
    };
    OuterRecord rec;

    if (settings.variant == Variant::Baseline2) {
      const Design scaled =
          scale_node_to_budget(ch, cfg, d, 1.0, ties_subbands(cfg, settings.variant));
      const bool irs_ok = cfg.mode == Mode::Relay || (scaled.theta_E.cwiseAbs().minCoeff() >= 1.0);
      if (irs_ok && feasibility_report(ch, cfg, scaled).feasible &&
          min_rate(ch, cfg, scaled) >= min_rate(ch, cfg, d)) {
        d = scaled;
      }
      rec.alpha_matrices.push_back(min_log_rate_sum(ch, cfg, d));
    } else {
      InnerResult m = inner_loop_matrices(ch, cfg, d, settings);
      d = m.design;
      rec.alpha_matrices = m.alpha;
      rec.solves += m.solves;
      rec.newton_steps += m.newton_steps;
      if (!m.ok) tr.notes.push_back("outer " + std::to_string(l) + " matrices: " + m.message);
    }
    rec.ms_matrices = since(t0);
    const auto t1 = Clock::now();

    if (d.tau < cfg.T) {
      const bool optimize_s = settings.variant != Variant::Baseline1;
      InnerResult w = inner_loop_waveforms(ch, cfg, d, settings, optimize_s);
      d = w.design;
      rec.alpha_waveforms = w.alpha;
      rec.solves += w.solves;
      rec.newton_steps += w.newton_steps;
      if (!w.ok) tr.notes.push_back("outer " + std::to_string(l) + " waveforms: " + w.message);
    }
    rec.ms_waveforms = since(t1);
    const auto t2 = Clock::now();

    const TauResult t = tau_closed_form(ch, cfg, d);
    if (t.feasible) {
      Design cand = d;
      cand.tau = t.tau;
      if (feasibility_report(ch, cfg, cand).feasible &&
          min_rate(ch, cfg, cand) >= min_rate(ch, cfg, d)) {
        d = cand;
      }
    } else {
      tr.notes.push_back("outer " + std::to_string(l) + " tau: " + t.message);
    }
    const SlotRescaleResult sr = slot_rescale(
        ch, cfg, d, tying_for(settings.variant) != Tying::None,
        ties_subbands(cfg, settings.variant));
    if (sr.improved) d = sr.design;
    rec.ms_tau = since(t2);

    rec.tau = d.tau;
    rec.min_rate = min_rate(ch, cfg, d);
    rec.energy = pair_energies(ch, cfg, d);
    rec.wall_ms = since(t0);
    tr.outer.push_back(rec);
    const double change = rec.min_rate - rate;
    rate = rec.min_rate;
    if (std::abs(change) < settings.eps_outer * std::max(1.0, std::abs(rate))) {
      tr.converged = true;
      break;
    }
  }
  res.design = d;
  return res;
}

}  // namespace

RunResult algorithm1(const ChannelSet& ch, const SystemConfig& cfg,
                     const OptimizerSettings& settings, VariantCache* cache) {
  cfg.validate();
  settings.validate(cfg.mode);
  VariantCache local;
  return run_cached(ch, cfg, settings, cache ? *cache : local);
}

RunResult algorithm1_from(const ChannelSet& ch, const SystemConfig& cfg,
                          const OptimizerSettings& settings, const Design& start) {
  cfg.validate();
  settings.validate(cfg.mode);
  const FeasibilityReport fr = feasibility_report(ch, cfg, start);
  if (!fr.feasible) {
    throw std::invalid_argument("algorithm1_from: start violates " + fr.violated.front());
  }
  return outer_loop(ch, cfg, settings, start);
}

RunResult run_variant(const ChannelSet& ch, const SystemConfig& cfg,
                      const OptimizerSettings& settings, VariantCache* cache) {
  return algorithm1(ch, cfg, settings, cache);
}

}  // namespace wpc

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors

#include "wpc/subproblems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wpc {

namespace {

constexpr double kLog2e = std::numbers::log2e;

void add_quad(SmoothConstraint& c, Index offset, const CMatrix& a, double scale) {
  c.quad.push_back({offset, scale * real_embedding(hermitian_part(a)), {}});
}

void add_identity_quad(SmoothConstraint& c, Index offset, Index reals, double scale) {
  c.quad.push_back({offset, scale * RMatrix::Identity(reals, reals), {}});
}

// Adds scale * Re{f^H x} for x stored at `offset`.
void add_re_linear(SmoothConstraint& c, Index dim, Index offset, const CVector& f, double scale) {
  if (c.linear.size() == 0) c.linear = RVector::Zero(dim);
  c.linear.segment(offset, 2 * f.size()) += scale * to_real(f);
}

void add_linear(SmoothConstraint& c, Index dim, Index index, double coeff) {
  if (c.linear.size() == 0) c.linear = RVector::Zero(dim);
  c.linear(index) += coeff;
}

SmoothConstraint named(const std::string& name, ConstraintSense sense) {
  SmoothConstraint c;
  c.name = name;
  c.sense = sense;
  return c;
}

std::string idx(const std::string& base, int i) { return base + "[" + std::to_string(i) + "]"; }

// Energy steps stop pushing once every pair clears its target by this factor,
// which keeps the remaining variables away from their bounds.
constexpr double kEnergyRatioCap = 1.2;
// Fraction of the starting min rate that energy steps must preserve.
constexpr double kRateFloor = 0.5;

void add_ratio_cap(ConvexSubproblem& sp) {
  SmoothConstraint c = named("ratio_cap", ConstraintSense::ConvexLe);
  add_linear(c, sp.dim, 0, 1.0);
  c.constant = -kEnergyRatioCap;
  sp.constraints.push_back(std::move(c));
}

}  // namespace

double min_log_rate_sum(const ChannelSet& ch, const SystemConfig& cfg, const Design& d) {
  double r = log_rate_sum(ch, cfg, d, 0);
  for (int k = 1; k < cfg.K; ++k) r = std::min(r, log_rate_sum(ch, cfg, d, k));
  return r;
}

double min_energy_ratio(const ChannelSet& ch, const SystemConfig& cfg, const Design& d) {
  double r = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cfg.K; ++k) {
    if (cfg.e_min(k) > 0) r = std::min(r, harvested_energy(ch, cfg, d, k) / cfg.e_min(k));
  }
  return r;
}

// ---- matrix step --------------------------------------------------------------

MatrixSubproblem build_matrix_subproblem(const ChannelSet& ch, const SystemConfig& cfg,
                                         const Design& prev, Tying tying, C5Rule rule,
                                         double beta_safety, StepObjective objective) {
  const bool energy_step = objective == StepObjective::MinEnergyRatio;
  if (tying == Tying::SlotsAndSubbands && cfg.mode != Mode::Relay) {
    throw std::invalid_argument("subband tying is only defined for the relay");
  }
  if (!(prev.tau >= 0 && prev.tau < cfg.T)) {
    throw std::invalid_argument("matrix subproblem requires 0 <= tau < T");
  }
  if (prev.tau == 0 && (cfg.e_min.array() > 0).any()) {
    throw std::invalid_argument("matrix subproblem: tau = 0 cannot meet a positive E_min");
  }
  const bool relay = cfg.mode == Mode::Relay;
  const int K = cfg.K, N = cfg.N;
  const Index order = relay ? Index(cfg.M) * cfg.M : Index(cfg.M);
  const Index reals = 2 * order;
  const double r2 = 2.0 * cfg.rho();
  const double tau = prev.tau;

  MatrixSubproblem out;
  out.e_offset.resize(N);
  out.i_offset.resize(N);
  Index next = 1;
  // The IRS shares theta over subbands by construction.
  const bool shared_n = !relay || tying == Tying::SlotsAndSubbands;
  const bool shared_slot = tying != Tying::None;
  for (int n = 0; n < N; ++n) {
    if (shared_n && n > 0) {
      out.e_offset[n] = out.e_offset[0];
      out.i_offset[n] = out.i_offset[0];
      continue;
    }
    out.e_offset[n] = next;
    next += reals;
    if (shared_slot) {
      out.i_offset[n] = out.e_offset[n];
    } else {
      out.i_offset[n] = next;
      next += reals;
    }
  }
  ConvexSubproblem& sp = out.sp;
  sp.dim = next;
  sp.objective_index = 0;
  sp.blocks.push_back({"alpha", 0, 1});
  for (int n = 0; n < N; ++n) {
    if (shared_n && n > 0) break;
    sp.blocks.push_back({idx("u_E", n), out.e_offset[n], reals});
    if (!shared_slot) sp.blocks.push_back({idx("u_I", n), out.i_offset[n], reals});
  }

  out.start = RVector::Zero(sp.dim);
  for (int n = 0; n < N; ++n) {
    out.start.segment(out.e_offset[n], reals) = to_real(prev.var_E(n));
    out.start.segment(out.i_offset[n], reals) = to_real(prev.var_I(n));
  }

  const QuadraticForms qf = assemble_quadratic_forms(ch, cfg, prev);

  // C3 per subband.
  for (int n = 0; n < N; ++n) {
    SmoothConstraint c = named(idx("C3", n), ConstraintSense::ConvexLe);
    if (tau > 0) add_quad(c, out.e_offset[n], qf.A_tilde_E[n], tau / r2);
    add_quad(c, out.i_offset[n], qf.A_tilde_I[n], (cfg.T - tau) / r2);
    c.constant = -cfg.T * cfg.p_rf_node(n);
    c.scale_by(1.0 / (cfg.T * cfg.p_rf_node(n)));
    sp.constraints.push_back(std::move(c));
  }

  // C4 per pair: concave quadratic lower bound of E_k >= E_min,k.
  out.beta = tau > 0 ? beta_matrices(qf, prev, cfg, beta_safety) : std::vector<double>(K, 0.0);
  for (int k = 0; k < K; ++k) {
    if (!(cfg.e_min(k) > 0)) continue;
    std::vector<CVector> x0(N);
    for (int n = 0; n < N; ++n) x0[n] = prev.var_E(n);
    const C4Surrogate s = c4_surrogate(qf.A_bar[k], x0, out.beta[k], tau, cfg);
    SmoothConstraint c = named(idx(energy_step ? "E" : "C4", k), ConstraintSense::ConcaveGe);
    for (int n = 0; n < N; ++n) {
      if (s.beta > 0) add_identity_quad(c, out.e_offset[n], reals, 0.5 * s.beta);
      add_re_linear(c, sp.dim, out.e_offset[n], s.v[n], -1.0);
    }
    c.constant = (energy_step ? 0.0 : cfg.e_min(k)) - s.constant;
    c.scale_by(1.0 / cfg.e_min(k));
    if (energy_step) add_linear(c, sp.dim, 0, 1.0);
    sp.constraints.push_back(std::move(c));
  }

  // C5 per pair: alpha <= sum_n surrogate of log2(1 + SINR). Energy steps
  // replace alpha by a floor so the information variables stay useful.
  const double rate0 = min_log_rate_sum(ch, cfg, prev);
  out.start_alpha = energy_step ? min_energy_ratio(ch, cfg, prev) : rate0;
  auto rate_lhs = [&](SmoothConstraint& c) {
    if (energy_step) {
      c.constant += kRateFloor * rate0;
    } else {
      add_linear(c, sp.dim, 0, 1.0);
    }
  };
  if (rule == C5Rule::LogAffine) {
    const auto terms = c5_log_affine_surrogate(qf, prev, cfg);
    for (int k = 0; k < K; ++k) {
      SmoothConstraint c = named(idx("C5", k), ConstraintSense::ConcaveGe);
      rate_lhs(c);
      for (int n = 0; n < N; ++n) {
        const C5LogAffineTerm& t = terms[k][n];
        add_quad(c, out.i_offset[n], t.F, 1.0);
        c.constant -= t.constant;
        c.logs.push_back({1.0, out.i_offset[n], 2.0 * to_real(t.a), t.c});
      }
      sp.constraints.push_back(std::move(c));
    }
  } else {
    const auto terms = c5_surrogate(qf, prev, cfg);
    for (int k = 0; k < K; ++k) {
      SmoothConstraint c = named(idx("C5", k), ConstraintSense::ConcaveGe);
      rate_lhs(c);
      for (int n = 0; n < N; ++n) {
        // Expanded around u0: the curvature term is large next to the bound.
        const C5Term& t = terms[k][n];
        add_quad(c, out.i_offset[n], t.F, 1.0);
        c.quad.back().center = to_real(t.u0);
        add_re_linear(c, sp.dim, out.i_offset[n], t.slope, 1.0);
        c.constant += t.h0 - (t.slope.adjoint() * t.u0)(0).real();
      }
      sp.constraints.push_back(std::move(c));
    }
  }

  if (energy_step) add_ratio_cap(sp);

  // C_IRS: linear cuts Re{conj(theta_m) theta0_m / |theta0_m|} >= 1.
  if (!relay) {
    auto cuts = [&](const CVector& theta0, Index offset, const char* tag) {
      for (Index m = 0; m < theta0.size(); ++m) {
        const double mag = std::abs(theta0(m));
        if (!(mag > 0)) throw std::invalid_argument("IRS expansion point has a zero element");
        const Complex dir = theta0(m) / mag;
        SmoothConstraint c = named(std::string("C_IRS_") + tag + "[" + std::to_string(m) + "]",
                                   ConstraintSense::ConcaveGe);
        add_linear(c, sp.dim, offset + 2 * m, -dir.real());
        add_linear(c, sp.dim, offset + 2 * m + 1, -dir.imag());
        c.constant = 1.0;
        sp.constraints.push_back(std::move(c));
      }
    };
    cuts(prev.theta_E, out.e_offset[0], "E");
    if (!shared_slot) cuts(prev.theta_I, out.i_offset[0], "I");
  }

  out.start(0) = out.start_alpha - 1.0;
  return out;
}

Design MatrixSubproblem::unpack(const RVector& z, const Design& base) const {
  Design d = base;
  const int N = int(e_offset.size());
  if (d.mode == Mode::Relay) {
    const Index M = d.U_E.front().rows();
    for (int n = 0; n < N; ++n) {
      d.U_E[n] = unvec(to_complex(z.segment(e_offset[n], 2 * M * M)), M, M);
      d.U_I[n] = unvec(to_complex(z.segment(i_offset[n], 2 * M * M)), M, M);
    }
  } else {
    const Index M = d.theta_E.size();
    d.theta_E = to_complex(z.segment(e_offset[0], 2 * M));
    d.theta_I = to_complex(z.segment(i_offset[0], 2 * M));
  }
  return d;
}

MatrixSubproblem build_relay_matrix_subproblem(const ChannelSet& ch, const SystemConfig& cfg,
                                               const Design& prev, Tying tying, C5Rule rule) {
  if (cfg.mode != Mode::Relay) throw std::invalid_argument("relay builder called in IRS mode");
  return build_matrix_subproblem(ch, cfg, prev, tying, rule);
}

MatrixSubproblem build_irs_subproblem(const ChannelSet& ch, const SystemConfig& cfg,
                                      const Design& prev, Tying tying, C5Rule rule) {
  if (cfg.mode != Mode::ActiveIrs) throw std::invalid_argument("IRS builder called in relay mode");
  return build_matrix_subproblem(ch, cfg, prev, tying, rule);
}

// ---- waveform step ------------------------------------------------------------

WaveformSubproblem build_waveform_subproblem(const ChannelSet& ch, const SystemConfig& cfg,
                                             const Design& prev, bool optimize_s,
                                             double beta_safety, StepObjective objective) {
  const bool energy_step = objective == StepObjective::MinEnergyRatio;
  if (energy_step && !optimize_s) {
    throw std::invalid_argument("energy step needs the waveforms as variables");
  }
  if (!(prev.tau >= 0 && prev.tau < cfg.T)) {
    throw std::invalid_argument("waveform subproblem requires 0 <= tau < T");
  }
  if (prev.tau == 0 && (cfg.e_min.array() > 0).any()) {
    throw std::invalid_argument("waveform subproblem: tau = 0 cannot meet a positive E_min");
  }
  const int K = cfg.K, N = cfg.N;
  const double r2 = 2.0 * cfg.rho();
  const double tau = prev.tau;

  WaveformSubproblem out;
  out.s_offset.assign(N, -1);
  out.p_offset.resize(N);
  Index next = 1;
  ConvexSubproblem& sp = out.sp;
  sp.blocks.push_back({"alpha", 0, 1});
  for (int n = 0; n < N; ++n) {
    if (optimize_s) {
      out.s_offset[n] = next;
      sp.blocks.push_back({idx("s_E", n), next, 2 * K});
      next += 2 * K;
    }
    out.p_offset[n] = next;
    sp.blocks.push_back({idx("p_I", n), next, K});
    next += K;
  }
  sp.dim = next;
  sp.objective_index = 0;

  out.start = RVector::Zero(sp.dim);
  for (int n = 0; n < N; ++n) {
    if (optimize_s) out.start.segment(out.s_offset[n], 2 * K) = to_real(prev.s_E[n]);
    out.start.segment(out.p_offset[n], K) = prev.p_I[n];
  }

  // C2 and p >= 0.
  for (int n = 0; n < N; ++n) {
    for (int k = 0; k < K; ++k) {
      const double budget = cfg.T * cfg.p_rf_tx(k, n);
      SmoothConstraint c = named("C2[" + std::to_string(k) + "," + std::to_string(n) + "]",
                                 ConstraintSense::ConvexLe);
      if (optimize_s) {
        if (tau > 0) add_identity_quad(c, out.s_offset[n] + 2 * k, 2, tau / r2);
        c.constant = -budget;
      } else {
        c.constant = tau / r2 * std::norm(prev.s_E[n](k)) - budget;
      }
      add_linear(c, sp.dim, out.p_offset[n] + k, (cfg.T - tau) / r2);
      c.scale_by(1.0 / budget);
      sp.constraints.push_back(std::move(c));

      SmoothConstraint p = named("p>=0[" + std::to_string(k) + "," + std::to_string(n) + "]",
                                 ConstraintSense::ConcaveGe);
      add_linear(p, sp.dim, out.p_offset[n] + k, -1.0 / cfg.p_rf_tx(k, n));
      sp.constraints.push_back(std::move(p));
    }
  }

  // C3 with the node matrices fixed.
  for (int n = 0; n < N; ++n) {
    const CMatrix& H = ch.H[n];
    const CMatrix ue = prev.amp_E(n);
    const CMatrix ui = prev.amp_I(n);
    const CMatrix v_e = H.adjoint() * ue.adjoint() * ue * H;
    const CMatrix v_i = H.adjoint() * ui.adjoint() * ui * H;
    const double s2 = cfg.sigma2_node(n);
    const double budget = cfg.T * cfg.p_rf_node(n);
    SmoothConstraint c = named(idx("C3", n), ConstraintSense::ConvexLe);
    double constant = tau / r2 * s2 * ue.squaredNorm() + (cfg.T - tau) / r2 * s2 * ui.squaredNorm();
    if (optimize_s) {
      if (tau > 0) add_quad(c, out.s_offset[n], v_e, tau / r2);
    } else {
      constant += tau / r2 * quad_form(v_e, prev.s_E[n]);
    }
    for (int k = 0; k < K; ++k) {
      add_linear(c, sp.dim, out.p_offset[n] + k, (cfg.T - tau) / r2 * v_i(k, k).real());
    }
    c.constant = constant - budget;
    c.scale_by(1.0 / budget);
    sp.constraints.push_back(std::move(c));
  }

  // C4 only depends on s_E; with s_E fixed it is a constant already met.
  const QuadraticForms qf = assemble_quadratic_forms(ch, cfg, prev);
  out.beta = tau > 0 ? beta_waveforms(qf, prev, cfg, beta_safety) : std::vector<double>(K, 0.0);
  if (optimize_s) {
    for (int k = 0; k < K; ++k) {
      if (!(cfg.e_min(k) > 0)) continue;
      const C4Surrogate s = c4_surrogate(qf.Xi[k], prev.s_E, out.beta[k], tau, cfg);
      SmoothConstraint c = named(idx(energy_step ? "E" : "C4", k), ConstraintSense::ConcaveGe);
      for (int n = 0; n < N; ++n) {
        if (s.beta > 0) add_identity_quad(c, out.s_offset[n], 2 * K, 0.5 * s.beta);
        add_re_linear(c, sp.dim, out.s_offset[n], s.v[n], -1.0);
      }
      c.constant = (energy_step ? 0.0 : cfg.e_min(k)) - s.constant;
      c.scale_by(1.0 / cfg.e_min(k));
      if (energy_step) add_linear(c, sp.dim, 0, 1.0);
      sp.constraints.push_back(std::move(c));
    }
  }

  // C5 with the interference term linearised.
  const auto terms = c5_power_surrogate(ch, cfg, prev);
  const double rate0 = min_log_rate_sum(ch, cfg, prev);
  out.start_alpha = energy_step ? min_energy_ratio(ch, cfg, prev) : rate0;
  for (int k = 0; k < K; ++k) {
    SmoothConstraint c = named(idx("C5", k), ConstraintSense::ConcaveGe);
    if (energy_step) {
      c.constant += kRateFloor * rate0;
    } else {
      add_linear(c, sp.dim, 0, 1.0);
    }
    for (int n = 0; n < N; ++n) {
      const C5PowerTerm& t = terms[k][n];
      c.logs.push_back({1.0, out.p_offset[n], t.q, t.zeta});
      const double g = kLog2e / t.denom0;
      for (int j = 0; j < K; ++j) {
        if (t.b(j) != 0.0) add_linear(c, sp.dim, out.p_offset[n] + j, g * t.b(j));
      }
      c.constant += std::log2(t.denom0) - g * t.b.dot(t.p0);
    }
    sp.constraints.push_back(std::move(c));
  }
  if (energy_step) add_ratio_cap(sp);

  out.start(0) = out.start_alpha - 1.0;
  return out;
}

Design WaveformSubproblem::unpack(const RVector& z, const Design& base) const {
  Design d = base;
  const int N = int(p_offset.size());
  const Index K = d.p_I.front().size();
  for (int n = 0; n < N; ++n) {
    if (s_offset[n] >= 0) d.s_E[n] = to_complex(z.segment(s_offset[n], 2 * K));
    d.p_I[n] = z.segment(p_offset[n], K);
  }
  return d;
}

}  // namespace wpc

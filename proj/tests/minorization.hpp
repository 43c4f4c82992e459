// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors
//
// Touching and dominance checks for every surrogate on one random instance.
// Targets are evaluated through the model functions, not through the
// surrogate code.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "support.hpp"

namespace wpc::testing {

struct BoundStats {
  double touch = 0.0;      // largest relative gap at the expansion point
  double violation = 0.0;  // largest relative amount by which a bound crosses its target
  long samples = 0;
};

struct MinorizationReport {
  std::map<std::string, BoundStats> bounds;
  double gradient_error = 0.0;  // quadratic majorizer slope vs central differences

  void touch(const std::string& name, double surrogate, double target, double floor) {
    BoundStats& b = bounds[name];
    b.touch = std::max(b.touch, rel_diff_scaled(surrogate, target, floor));
  }
  // `below` true: surrogate must not exceed target.
  void sample(const std::string& name, double surrogate, double target, double floor,
              bool below) {
    BoundStats& b = bounds[name];
    const double excess = below ? surrogate - target : target - surrogate;
    if (std::isfinite(target) || std::isfinite(surrogate)) {
      b.violation = std::max(b.violation,
                             excess / std::max({std::abs(surrogate), std::abs(target), floor}));
    }
    ++b.samples;
  }
  double worst_touch() const {
    double w = 0.0;
    for (const auto& [_, b] : bounds) w = std::max(w, b.touch);
    return w;
  }
  double worst_violation() const {
    double w = 0.0;
    for (const auto& [_, b] : bounds) w = std::max(w, b.violation);
    return w;
  }
};

// Random point with x^H Q x = u * P, u uniform; every third draw stays near x0.
inline CVector sample_in_ellipsoid(SubstreamRng& rng, const CMatrix& Q, double P,
                                   const CVector& x0, int i) {
  CVector x = random_cvector(rng, x0.size());
  if (i % 3 == 0) x = x0 + (0.05 * rng.uniform()) * x0.norm() / x.norm() * x;
  const double q = quad_form(Q, x);
  const double target = rng.uniform() * P;
  if (q > target || i % 3 != 0) x *= std::sqrt(target / q);
  return x;
}

inline double log_rate_at(const QuadraticForms& qf, const SystemConfig& cfg, int k, int n,
                          const CVector& u) {
  const double zeta = cfg.delta2_rx(k, n) + cfg.sigma2_rx(k, n);
  const double num = quad_form(qf.A[k][n], u);
  const double den = quad_form(qf.A_hat[k][n], u) + zeta;
  return std::log2(1.0 + num / den);
}

inline void check_minorization(const Instance& in, int samples, std::uint64_t seed,
                               MinorizationReport& rep) {
  const SystemConfig& cfg = in.cfg;
  const Design& d = in.d;
  const QuadraticForms qf = assemble_quadratic_forms(in.ch, cfg, d);
  SubstreamRng rng(seed, 202, 0, 0);
  const int K = cfg.K, N = cfg.N;
  const double rho = cfg.rho();

  // Scalar log bound.
  for (int i = 0; i < samples; ++i) {
    const double x0 = std::exp(8.0 * rng.uniform() - 4.0);
    const double x = std::exp(12.0 * rng.uniform() - 6.0);
    rep.touch("log_affine", log_affine_minorizer(x0, x0), std::log2(x0), 1.0);
    rep.sample("log_affine", log_affine_minorizer(x, x0), std::log2(x), 1.0, false);
  }

  // Rate bounds over the information-slot node variable.
  const auto quadratic = c5_surrogate(qf, d, cfg);
  const auto affine = c5_log_affine_surrogate(qf, d, cfg);
  for (int n = 0; n < N; ++n) {
    const CVector u0 = d.var_I(n);
    const double P = 2.0 * rho * cfg.T * cfg.p_rf_node(n) / (cfg.T - d.tau);
    for (int k = 0; k < K; ++k) {
      const double r0 = log_rate_at(qf, cfg, k, n, u0);
      rep.touch("c5_quadratic", quadratic[k][n].value(u0), r0, 1.0);
      rep.touch("c5_log_affine", affine[k][n].value(u0), r0, 1.0);
      for (int i = 0; i < samples; ++i) {
        const CVector u = sample_in_ellipsoid(rng, qf.A_tilde_I[n], P, u0, i);
        const double r = log_rate_at(qf, cfg, k, n, u);
        rep.sample("c5_quadratic", quadratic[k][n].value(u), r, 1.0, true);
        rep.sample("c5_log_affine", affine[k][n].value(u), r, 1.0, true);
      }

      // The quadratic majorizer on its own, slope checked by central differences.
      const double zeta = cfg.delta2_rx(k, n) + cfg.sigma2_rx(k, n);
      const CMatrix& Tm = qf.A_hat[k][n];
      const QuadMajorizer mj = lemma1_majorizer(Tm, zeta, qf.A_tilde_I[n], P, u0);
      auto s = [&](const CVector& x) { return -std::log2(quad_form(Tm, x) + zeta); };
      rep.touch("quadratic_majorizer", mj.value(u0), s(u0), 1.0);
      for (int i = 0; i < samples; ++i) {
        const CVector u = sample_in_ellipsoid(rng, qf.A_tilde_I[n], P, u0, i);
        rep.sample("quadratic_majorizer", mj.value(u), s(u), 1.0, false);
      }
      for (int i = 0; i < 4; ++i) {
        CVector dir = random_cvector(rng, u0.size());
        dir *= u0.norm() / dir.norm();
        const double h = 1e-5;
        const double fd = (s(u0 + h * dir) - s(u0 - h * dir)) / (2.0 * h);
        const double slope = (mj.b.adjoint() * dir)(0).real();
        rep.gradient_error = std::max(
            rep.gradient_error, std::abs(fd - slope) / std::max(std::abs(slope), 1e-12 +
                                                                std::abs(fd)));
      }
    }
  }

  // Energy bounds: node variable block and waveform block.
  const std::vector<double> bm = beta_matrices(qf, d, cfg);
  const std::vector<double> bw = beta_waveforms(qf, d, cfg);
  for (int k = 0; k < K; ++k) {
    std::vector<CMatrix> am, aw;
    std::vector<CVector> xm0, xw0;
    for (int n = 0; n < N; ++n) {
      am.push_back(qf.A_bar[k][n]);
      aw.push_back(qf.Xi[k][n]);
      xm0.push_back(d.var_E(n));
      xw0.push_back(d.s_E[n]);
    }
    auto energy = [&](const std::vector<CMatrix>& a, const std::vector<CVector>& x) {
      double p = 0.0;
      for (int n = 0; n < N; ++n) p += 0.5 * quad_form(a[n], x[n]);
      return harvested_energy(cfg, d.tau, p);
    };
    const C4Surrogate cm = c4_surrogate(am, xm0, bm[k], d.tau, cfg);
    const C4Surrogate cw = c4_surrogate(aw, xw0, bw[k], d.tau, cfg);
    const double e0 = energy(am, xm0);
    rep.touch("c4_matrices", cm.value(xm0), e0, 0.0);
    rep.touch("c4_waveforms", cw.value(xw0), energy(aw, xw0), 0.0);
    for (int i = 0; i < samples; ++i) {
      std::vector<CVector> xm(N), xw(N);
      for (int n = 0; n < N; ++n) {
        xm[n] = sample_in_ellipsoid(rng, qf.A_tilde_E[n],
                                    2.0 * rho * cfg.T * cfg.p_rf_node(n) / d.tau, xm0[n], i);
        xw[n] = sample_in_ellipsoid(
            rng, CMatrix::Identity(K, K),
            2.0 * rho * cfg.T / d.tau * cfg.p_rf_tx.col(n).sum(), xw0[n], i);
      }
      rep.sample("c4_matrices", cm.value(xm), energy(am, xm), 1e-3 * e0, true);
      rep.sample("c4_waveforms", cw.value(xw), energy(aw, xw), 1e-3 * e0, true);
    }
  }

  // Information powers.
  const auto pw = c5_power_surrogate(in.ch, cfg, d);
  for (int n = 0; n < N; ++n) {
    for (int k = 0; k < K; ++k) {
      rep.touch("c5_power", pw[k][n].value(d.p_I[n]),
                std::log2(1.0 + sinr(in.ch, cfg, d, k, n)), 1.0);
      for (int i = 0; i < samples; ++i) {
        Design dp = d;
        for (int j = 0; j < K; ++j) {
          const double cap = 2.0 * rho * cfg.T * cfg.p_rf_tx(j, n) / (cfg.T - d.tau);
          dp.p_I[n](j) = i % 3 == 0 ? d.p_I[n](j) * (0.95 + 0.1 * rng.uniform())
                                    : cap * rng.uniform();
        }
        rep.sample("c5_power", pw[k][n].value(dp.p_I[n]),
                   std::log2(1.0 + sinr(in.ch, cfg, dp, k, n)), 1.0, true);
      }
    }
  }

  // Unit-modulus cut.
  if (cfg.mode == Mode::ActiveIrs) {
    for (Index m = 0; m < d.theta_E.size(); ++m) {
      const Complex t0 = d.theta_E(m);
      rep.touch("unit_modulus", unit_modulus_minorizer(t0, t0), std::abs(t0), 1.0);
      for (int i = 0; i < samples; ++i) {
        const Complex t = 3.0 * rng.complex_gaussian();
        rep.sample("unit_modulus", unit_modulus_minorizer(t, t0), std::abs(t), 1.0, true);
      }
    }
  }
}

}  // namespace wpc::testing

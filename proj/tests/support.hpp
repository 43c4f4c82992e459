// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors
//
// Random instances shared by the unit tests and the acceptance runner.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "wpc/optimizer.hpp"

namespace wpc::testing {

struct Instance {
  SystemConfig cfg;
  ChannelSet ch;
  Design d;
};

inline CVector random_cvector(SubstreamRng& rng, Index n) {
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.complex_gaussian();
  return v;
}

inline CMatrix random_cmatrix(SubstreamRng& rng, Index r, Index c) {
  CMatrix m(r, c);
  for (Index j = 0; j < c; ++j) {
    for (Index i = 0; i < r; ++i) m(i, j) = rng.complex_gaussian();
  }
  return m;
}

inline CMatrix random_hermitian_psd(SubstreamRng& rng, Index n) {
  const CMatrix g = random_cmatrix(rng, n, n);
  return g * g.adjoint();
}

/// Channels from the seeded simulator and a random design that meets C1-C3.
/// E_min is set to half the smallest harvested energy so C4 holds as well.
inline Instance random_instance(Mode mode, int K, int N, int M, std::uint64_t seed) {
  Instance in;
  in.cfg = default_config(mode, K, N, M, 0.0);
  in.ch = generate_scenario(in.cfg, ScenarioGeometry{}, seed);
  SubstreamRng rng(seed, 101, 0, 0);
  Design d = Design::zeros(in.cfg);
  d.tau = in.cfg.T * (0.2 + 0.6 * rng.uniform());
  const double r2 = 2.0 * in.cfg.rho();
  for (int n = 0; n < N; ++n) {
    for (int k = 0; k < K; ++k) {
      const double budget = in.cfg.T * in.cfg.p_rf_tx(k, n) * (0.3 + 0.6 * rng.uniform());
      const double frac = 0.2 + 0.6 * rng.uniform();
      const double mag = std::sqrt(frac * budget * r2 / d.tau);
      d.s_E[n](k) = std::polar(mag, 2.0 * std::numbers::pi * rng.uniform());
      d.p_I[n](k) = (1.0 - frac) * budget * r2 / (in.cfg.T - d.tau);
    }
  }
  if (mode == Mode::Relay) {
    for (int n = 0; n < N; ++n) {
      d.U_E[n] = random_cmatrix(rng, M, M);
      d.U_I[n] = random_cmatrix(rng, M, M);
    }
  } else {
    for (int m = 0; m < M; ++m) {
      d.theta_E(m) = std::polar(1.0 + rng.uniform(), 2.0 * std::numbers::pi * rng.uniform());
      d.theta_I(m) = std::polar(1.0 + rng.uniform(), 2.0 * std::numbers::pi * rng.uniform());
    }
  }
  d = scale_node_to_budget(in.ch, in.cfg, d, 0.3 + 0.6 * rng.uniform(), mode == Mode::ActiveIrs);
  double e = INFINITY;
  for (int k = 0; k < K; ++k) e = std::min(e, harvested_energy(in.ch, in.cfg, d, k));
  in.cfg.e_min = RVector::Constant(K, 0.5 * e);
  in.d = d;
  return in;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double rel_diff_scaled(double a, double b, double scale) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), scale});
}

/// Smallest tau on a uniform grid of `points` + 1 values in [0, T] meeting
/// C1-C4 with everything else fixed; negative when no grid point does.
inline double tau_grid_oracle(const Instance& in, int points) {
  Design d = in.d;
  const SystemConfig& cfg = in.cfg;
  for (int i = 0; i <= points; ++i) {
    d.tau = cfg.T * double(i) / points;
    bool ok = true;
    for (int n = 0; n < cfg.N && ok; ++n) {
      ok = node_energy_slack(in.ch, cfg, d, n) >= -1e-12 * cfg.T * cfg.p_rf_node(n);
      for (int k = 0; k < cfg.K && ok; ++k) {
        ok = tx_energy_slack(cfg, d, k, n) >= -1e-12 * cfg.T * cfg.p_rf_tx(k, n);
      }
    }
    for (int k = 0; k < cfg.K && ok; ++k) {
      ok = harvested_energy(in.ch, cfg, d, k) >= cfg.e_min(k) * (1.0 - 1e-12);
    }
    if (ok) return d.tau;
  }
  return -1.0;
}

}  // namespace wpc::testing

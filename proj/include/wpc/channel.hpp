// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors
//
// Seeded geometry and Rayleigh block-fading generation.
//
// Layout: the relay/IRS ground projection sits at the origin and the node is
// elevated by d3. Transmitters are drawn uniformly in a disk of radius r_T
// centred at (-d1, 0), receivers in a disk of radius r_R centred at (d2, 0).
// Each link distance is sqrt(horizontal^2 + d3^2).

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wpc/config.hpp"

namespace wpc {

struct ScenarioGeometry {
  double d1 = 10.0;
  double d2 = 10.0;
  double d3 = 10.0;
  double r_T = 5.0;
  double r_R = 5.0;
  double d0 = 1.0;
  double gamma_tilde = 3.0;

  void validate() const;
};

struct ChannelSet {
  std::vector<CMatrix> H;  // N entries, M x K (transmitters -> node)
  std::vector<CMatrix> G;  // N entries, K x M (node -> receivers)
  std::uint64_t seed = 0;
  RVector tx_distance;  // K, per-link distance transmitter -> node
  RVector rx_distance;  // K, per-link distance node -> receiver

  int pairs() const { return H.empty() ? 0 : int(H.front().cols()); }
  int subbands() const { return int(H.size()); }
  int elements() const { return H.empty() ? 0 : int(H.front().rows()); }

  /// h_{k,n}: k-th column of H_n.
  CVector h(int k, int n) const { return H[n].col(k); }
  /// g_{k,n}: k-th column of G_n^T, i.e. the k-th row of G_n as a column.
  CVector g(int k, int n) const { return G[n].row(k).transpose(); }
};

/// Independent random stream addressed by (seed, tag, a, b). Streams never
/// overlap, so adding nodes or subbands does not shift existing draws.
class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t seed, std::uint64_t tag, std::uint64_t a, std::uint64_t b);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Circularly-symmetric complex Gaussian with unit variance.
  Complex complex_gaussian();

 private:
  std::mt19937_64 engine_;
};

/// 0.1 (d/d0)^(-gamma/2): amplitude scale applied to unit-variance fading.
double path_loss_scale(double d, const ScenarioGeometry& geo);

/// Bit-reproducible in (seed, cfg.K, cfg.N, cfg.M, geo).
ChannelSet generate_scenario(const SystemConfig& cfg, const ScenarioGeometry& geo,
                             std::uint64_t seed);

}  // namespace wpc

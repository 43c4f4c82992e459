// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors

#include "wpc/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wpc {

namespace {

enum StreamTag : std::uint64_t {
  kTxPosition = 1,
  kRxPosition = 2,
  kTxFading = 3,
  kRxFading = 4,
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double disk_distance(SubstreamRng& rng, double centre, double radius, double height) {
  const double r = radius * std::sqrt(rng.uniform());
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double x = centre + r * std::cos(phi);
  const double y = r * std::sin(phi);
  return std::sqrt(x * x + y * y + height * height);
}

}  // namespace

void ScenarioGeometry::validate() const {
  if (!(d1 > 0 && d2 > 0 && d3 > 0 && d0 > 0)) {
    throw std::invalid_argument("geometry: d1, d2, d3 and d0 must be positive");
  }
  if (!(r_T >= 0 && r_R >= 0)) throw std::invalid_argument("geometry: radii must be >= 0");
  if (!(gamma_tilde >= 2.0)) throw std::invalid_argument("geometry: path-loss exponent < 2");
}

SubstreamRng::SubstreamRng(std::uint64_t seed, std::uint64_t tag, std::uint64_t a,
                           std::uint64_t b) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ tag);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  engine_.seed(h);
}

double SubstreamRng::uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

Complex SubstreamRng::complex_gaussian() {
  // Box-Muller; each quadrature has variance 1/2.
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

double path_loss_scale(double d, const ScenarioGeometry& geo) {
  if (!(d > 0)) throw std::invalid_argument("path_loss_scale: distance must be positive");
  return 0.1 * std::pow(d / geo.d0, -geo.gamma_tilde / 2.0);
}

ChannelSet generate_scenario(const SystemConfig& cfg, const ScenarioGeometry& geo,
                             std::uint64_t seed) {
  if (cfg.K <= 0 || cfg.N <= 0 || cfg.M <= 0) {
    throw std::invalid_argument("generate_scenario: K, N, M must be positive");
  }
  geo.validate();

  ChannelSet cs;
  cs.seed = seed;
  cs.tx_distance.resize(cfg.K);
  cs.rx_distance.resize(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    SubstreamRng tx(seed, kTxPosition, std::uint64_t(k), 0);
    SubstreamRng rx(seed, kRxPosition, std::uint64_t(k), 0);
    cs.tx_distance(k) = disk_distance(tx, -geo.d1, geo.r_T, geo.d3);
    cs.rx_distance(k) = disk_distance(rx, geo.d2, geo.r_R, geo.d3);
  }

  cs.H.assign(cfg.N, CMatrix(cfg.M, cfg.K));
  cs.G.assign(cfg.N, CMatrix(cfg.K, cfg.M));
  for (int n = 0; n < cfg.N; ++n) {
    for (int k = 0; k < cfg.K; ++k) {
      const double sh = path_loss_scale(cs.tx_distance(k), geo);
      const double sg = path_loss_scale(cs.rx_distance(k), geo);
      SubstreamRng hf(seed, kTxFading, std::uint64_t(k), std::uint64_t(n));
      SubstreamRng gf(seed, kRxFading, std::uint64_t(k), std::uint64_t(n));
      for (int m = 0; m < cfg.M; ++m) cs.H[n](m, k) = sh * hf.complex_gaussian();
      for (int m = 0; m < cfg.M; ++m) cs.G[n](k, m) = sg * gf.complex_gaussian();
    }
  }
  return cs;
}

}  // namespace wpc

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors

#include <cmath>

#include "doctest.h"
#include "support.hpp"

using namespace wpc;
using namespace wpc::testing;

TEST_SUITE("channel") {

TEST_CASE("same seed gives identical channels") {
  const SystemConfig cfg = default_config(Mode::Relay, 3, 2, 4, 0.0);
  const ChannelSet a = generate_scenario(cfg, ScenarioGeometry{}, 11);
  const ChannelSet b = generate_scenario(cfg, ScenarioGeometry{}, 11);
  const ChannelSet c = generate_scenario(cfg, ScenarioGeometry{}, 12);
  for (int n = 0; n < 2; ++n) {
    CHECK((a.H[n] - b.H[n]).norm() == 0.0);
    CHECK((a.G[n] - b.G[n]).norm() == 0.0);
    CHECK((a.H[n] - c.H[n]).norm() > 0.0);
  }
  CHECK(a.pairs() == 3);
  CHECK(a.subbands() == 2);
  CHECK(a.elements() == 4);
}

TEST_CASE("growing a dimension keeps existing draws") {
  const ChannelSet small = generate_scenario(default_config(Mode::Relay, 2, 2, 3, 0.0), {}, 5);
  const ChannelSet big = generate_scenario(default_config(Mode::Relay, 3, 3, 5, 0.0), {}, 5);
  for (int n = 0; n < 2; ++n) {
    CHECK((big.H[n].topLeftCorner(3, 2) - small.H[n]).norm() == 0.0);
    CHECK((big.G[n].topLeftCorner(2, 3) - small.G[n]).norm() == 0.0);
  }
  CHECK(big.tx_distance(1) == small.tx_distance(1));
}

TEST_CASE("distances respect the layout") {
  ScenarioGeometry geo;
  const SystemConfig cfg = default_config(Mode::ActiveIrs, 3, 1, 2, 0.0);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const ChannelSet ch = generate_scenario(cfg, geo, seed);
    for (int k = 0; k < 3; ++k) {
      const double hi_t = std::hypot(geo.d1 + geo.r_T, geo.d3);
      const double lo_t = std::hypot(std::max(0.0, geo.d1 - geo.r_T), geo.d3);
      CHECK(ch.tx_distance(k) <= hi_t);
      CHECK(ch.tx_distance(k) >= lo_t);
      CHECK(ch.rx_distance(k) <= std::hypot(geo.d2 + geo.r_R, geo.d3));
      CHECK(ch.rx_distance(k) >= std::hypot(geo.d2 - geo.r_R, geo.d3));
    }
  }
}

TEST_CASE("path loss amplitude") {
  ScenarioGeometry geo;
  CHECK(path_loss_scale(1.0, geo) == doctest::Approx(0.1));
  CHECK(path_loss_scale(100.0, geo) == doctest::Approx(0.1 * std::pow(100.0, -1.5)));
  CHECK_THROWS_AS(path_loss_scale(0.0, geo), std::invalid_argument);
}

TEST_CASE("fading has unit variance") {
  SubstreamRng rng(3, 9, 0, 0);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) sum += std::norm(rng.complex_gaussian());
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("invalid inputs are rejected") {
  ScenarioGeometry geo;
  geo.r_T = -1.0;
  CHECK_THROWS_AS(geo.validate(), std::invalid_argument);
  CHECK_THROWS_AS(generate_scenario(default_config(Mode::Relay, 0, 1, 1, 0.0), {}, 1),
                  std::invalid_argument);
}

}  // TEST_SUITE

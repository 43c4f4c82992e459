// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors

#include <cmath>

#include "doctest.h"
#include "support.hpp"

using namespace wpc;
using namespace wpc::testing;

TEST_SUITE("model") {

TEST_CASE("config constants") {
  CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0));
  CHECK(dbm_to_watt(28.0) == doctest::Approx(0.630957).epsilon(1e-5));
  const SystemConfig relay = default_config(Mode::Relay, 2, 3, 4, 1e-6);
  CHECK(relay.rho() == 2.0);
  CHECK(relay.p_rf_node(0) == doctest::Approx(dbm_to_watt(28.0)));
  const SystemConfig irs = default_config(Mode::ActiveIrs, 2, 3, 4, 1e-6);
  CHECK(irs.rho() == 1.0);
  CHECK(irs.p_rf_node(2) == doctest::Approx(0.1));
  CHECK(irs.sigma2_node(0) == doctest::Approx(1e-13));
  CHECK(mode_from_string(to_string(Mode::ActiveIrs)) == Mode::ActiveIrs);
  CHECK_THROWS_AS(mode_from_string("mirror"), std::invalid_argument);
}

TEST_CASE("rectifier curve") {
  const EhCurve eh;
  const double p = 1e-4;
  const double L = std::log(p);
  CHECK(eh_shape(eh, p) == doctest::Approx(std::exp(-0.11 * L * L - 1.17 * L - 12.0)));
  CHECK(eh_shape(eh, 0.0) == 0.0);
  for (double q : {1e-6, 1e-4, 3e-3, 0.1}) {
    const double h = 1e-6 * q;
    const double fd1 = (eh_shape(eh, q + h) - eh_shape(eh, q - h)) / (2 * h);
    const double fd2 = (eh_shape_d1(eh, q + h) - eh_shape_d1(eh, q - h)) / (2 * h);
    CHECK(eh_shape_d1(eh, q) == doctest::Approx(fd1).epsilon(1e-6));
    CHECK(eh_shape_d2(eh, q) == doctest::Approx(fd2).epsilon(1e-5));
  }
  const SystemConfig cfg = default_config(Mode::Relay, 1, 1, 1, 0.0);
  CHECK(harvested_energy(cfg, 0.4, p) == doctest::Approx(0.2 * eh_shape(eh, p)));
}

TEST_CASE("scalar relay SINR by hand") {
  SystemConfig cfg = default_config(Mode::Relay, 1, 1, 1, 0.0);
  ChannelSet ch;
  ch.H = {CMatrix::Constant(1, 1, Complex(0.3, 0.4))};
  ch.G = {CMatrix::Constant(1, 1, Complex(0.0, 2.0))};
  Design d = Design::zeros(cfg);
  d.tau = 0.5;
  d.p_I[0](0) = 0.1;
  d.U_I[0](0, 0) = Complex(3.0, 0.0);
  d.U_E[0](0, 0) = Complex(1.0, 0.0);
  d.s_E[0](0) = Complex(2.0, 0.0);
  const double gain = 0.25 * 4.0 * 9.0;  // |h|^2 |g|^2 |u|^2
  const double expect = 0.1 * gain / (1e-11 * 36.0 + 2e-11);
  CHECK(sinr(ch, cfg, d, 0, 0) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(pair_rate(ch, cfg, d, 0) ==
        doctest::Approx(0.25 * std::log2(1.0 + expect)).epsilon(1e-12));
  const QuadraticForms qf = assemble_quadratic_forms(ch, cfg, d);
  CHECK(sinr_vectorized(qf, cfg, d, 0, 0) == doctest::Approx(expect).epsilon(1e-12));
  // p_E = 1/2 |s|^2 |g u_E h|^2
  CHECK(harvester_input_power(ch, d, 0) == doctest::Approx(0.5 * 4.0 * 0.25 * 4.0));
}

TEST_CASE("physical and vectorized paths agree") {
  for (Mode mode : {Mode::Relay, Mode::ActiveIrs}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Instance in = random_instance(mode, 3, 2, 3, seed);
      const QuadraticForms qf = assemble_quadratic_forms(in.ch, in.cfg, in.d);
      for (int k = 0; k < 3; ++k) {
        CHECK(rel_diff(harvester_input_power(in.ch, in.d, k),
                       harvester_input_power_vectorized(qf, in.d, k)) < 1e-10);
        for (int n = 0; n < 2; ++n) {
          CHECK(rel_diff(sinr(in.ch, in.cfg, in.d, k, n),
                         sinr_vectorized(qf, in.cfg, in.d, k, n)) < 1e-10);
        }
      }
      for (int n = 0; n < 2; ++n) {
        CHECK(rel_diff(node_energy(in.ch, in.cfg, in.d, n),
                       node_energy_vectorized(qf, in.cfg, in.d, n)) < 1e-10);
      }
    }
  }
}

TEST_CASE("xi matrix gives the harvester input") {
  const Instance in = random_instance(Mode::Relay, 2, 2, 2, 3);
  double p = 0.0;
  for (int n = 0; n < 2; ++n) p += 0.5 * quad_form(xi_matrix(in.ch, in.d, 1, n), in.d.s_E[n]);
  CHECK(rel_diff(p, harvester_input_power(in.ch, in.d, 1)) < 1e-12);
}

TEST_CASE("feasibility report") {
  Instance in = random_instance(Mode::Relay, 2, 2, 2, 4);
  FeasibilityReport ok = feasibility_report(in.ch, in.cfg, in.d);
  CHECK(ok.feasible);
  CHECK(ok.violated.empty());
  in.d.p_I[1](0) *= 100.0;
  FeasibilityReport bad = feasibility_report(in.ch, in.cfg, in.d);
  CHECK_FALSE(bad.feasible);
  CHECK(bad.c2_slack(0, 1) < 0.0);
  in = random_instance(Mode::Relay, 2, 2, 2, 4);
  in.cfg.e_min *= 10.0;
  CHECK(feasibility_report(in.ch, in.cfg, in.d).c4_slack.minCoeff() < 0.0);
}

TEST_CASE("IRS designs use diagonal reflection") {
  const Instance in = random_instance(Mode::ActiveIrs, 2, 2, 3, 2);
  const CMatrix u = in.d.amp_I(1);
  CHECK(u.rows() == 3);
  CHECK(u(0, 1) == Complex(0, 0));
  CHECK(u(2, 2) == in.d.theta_I(2));
  CHECK((in.d.var_E(0) - in.d.theta_E).norm() == 0.0);
}

}  // TEST_SUITE

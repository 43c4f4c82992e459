// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors

#pragma once

#include <string>

#include "wpc/linalg.hpp"

namespace wpc {

enum class Mode { Relay, ActiveIrs };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

/// Rectifier curve fit E = (tau/rho) exp(a ln^2 p) p^b exp(c). Natural log.
struct EhCurve {
  double a = -0.11;
  double b = -1.17;
  double c = -12.0;
};

/// Scenario constants. All powers in W, energies in J, durations normalised.
struct SystemConfig {
  int K = 0;  // transmitter/receiver pairs
  int N = 0;  // subbands
  int M = 0;  // relay antennas or IRS elements
  Mode mode = Mode::Relay;
  double T = 1.0;

  RMatrix p_rf_tx;      // K x N, transmitter budget per subband
  RVector p_rf_node;    // N, relay budget per subband or the IRS total budget per n
  RVector sigma2_node;  // N, relay/IRS noise
  RMatrix sigma2_rx;    // K x N, receiver antenna noise
  RMatrix delta2_rx;    // K x N, receiver baseband noise
  EhCurve eh;
  RVector e_min;  // K

  /// Timeline factor: 2 for the two-hop relay, 1 for the IRS.
  double rho() const { return mode == Mode::Relay ? 2.0 : 1.0; }

  /// Throws std::invalid_argument naming the first broken invariant.
  void validate() const;
};

double dbm_to_watt(double dbm);

/// Simulation constants used for the numerical examples: 28 dBm transmitter
/// and relay budgets, 20 dBm IRS budget, -80 dBm relay/receiver noise,
/// -100 dBm IRS noise, T = 1 and the (-0.11, -1.17, -12) rectifier fit.
SystemConfig default_config(Mode mode, int K, int N, int M, double e_min);

}  // namespace wpc

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors
//
// Physical-layer model: power usage, SINR, rate and rectifier output, in both
// the "physical" form (products of channel vectors and node matrices) and the
// vectorized quadratic-form form over u = vec(U) (relay, Kronecker assembly)
// or theta (IRS, Hadamard assembly).

#pragma once

#include <string>
#include <vector>

#include "wpc/channel.hpp"
#include "wpc/config.hpp"

namespace wpc {

/// Full decision variable set. Relay designs carry U_E/U_I per subband; IRS
/// designs carry the reflection vectors, shared by all subbands.
struct Design {
  Mode mode = Mode::Relay;
  double tau = 0.0;
  std::vector<CVector> s_E;  // N, each K: energy waveform coefficients
  std::vector<RVector> p_I;  // N, each K: information powers
  std::vector<CMatrix> U_E;  // relay: N, each M x M
  std::vector<CMatrix> U_I;
  CVector theta_E;  // IRS: M
  CVector theta_I;

  /// U_{E,n}: the relay matrix or Diag(theta_E).
  CMatrix amp_E(int n) const;
  CMatrix amp_I(int n) const;
  /// Optimisation variable: vec(U_{E,n}) for the relay, theta_E for the IRS.
  CVector var_E(int n) const;
  CVector var_I(int n) const;

  /// Zero design with the right shapes.
  static Design zeros(const SystemConfig& cfg);
};

/// Matrices of the vectorized model for one (s_E, p_I, U_E) operating point.
/// Order is M^2 for the relay and M for the IRS, except Xi which is K x K.
struct QuadraticForms {
  Mode mode = Mode::Relay;
  std::vector<CMatrix> A_tilde_E;             // [n]
  std::vector<CMatrix> A_tilde_I;             // [n]
  std::vector<std::vector<CMatrix>> A;        // [k][n] desired signal
  std::vector<std::vector<CMatrix>> A_hat;    // [k][n] interference + relayed noise
  std::vector<std::vector<CMatrix>> A_bar;    // [k][n] harvester input
  std::vector<std::vector<CMatrix>> Xi;       // [k][n] harvester input in s_E
  std::vector<std::vector<CMatrix>> B;        // [k][n] A_hat + A
};

QuadraticForms assemble_quadratic_forms(const ChannelSet& ch, const SystemConfig& cfg,
                                        const Design& d);

/// Xi_{k,n} = H^H U_E^H g^* g^T U_E H.
CMatrix xi_matrix(const ChannelSet& ch, const Design& d, int k, int n);

// ---- SINR and rate ------------------------------------------------------

double psi(const ChannelSet& ch, const Design& d, int k, int j, int n);
double psi_tilde(const ChannelSet& ch, const Design& d, int k, int n);

/// SINR from psi coefficients.
double sinr(const ChannelSet& ch, const SystemConfig& cfg, const Design& d, int k, int n);
/// SINR from the vectorized quadratic forms over var_I(n).
double sinr_vectorized(const QuadraticForms& qf, const SystemConfig& cfg, const Design& d,
                       int k, int n);

/// sum_n log2(1 + SINR_{k,n}), the rate without the time prefactor.
double log_rate_sum(const ChannelSet& ch, const SystemConfig& cfg, const Design& d, int k);
/// R_k = (T - tau)/(rho T) sum_n log2(1 + SINR_{k,n}).
double pair_rate(const ChannelSet& ch, const SystemConfig& cfg, const Design& d, int k);
double min_rate(const ChannelSet& ch, const SystemConfig& cfg, const Design& d);

// ---- energy harvesting --------------------------------------------------

/// p_{E,k} = 1/2 sum_n s_n^H Xi_{k,n} s_n.
double harvester_input_power(const ChannelSet& ch, const Design& d, int k);
/// Same quantity from A_bar and var_E(n).
double harvester_input_power_vectorized(const QuadraticForms& qf, const Design& d, int k);

/// exp(a ln^2 p) p^b exp(c), i.e. harvested energy per unit tau/rho. Zero at p = 0.
double eh_shape(const EhCurve& eh, double p);
/// First and second derivatives of eh_shape in p.
double eh_shape_d1(const EhCurve& eh, double p);
double eh_shape_d2(const EhCurve& eh, double p);

double harvested_energy(const SystemConfig& cfg, double tau, double p_e);
double harvested_energy(const ChannelSet& ch, const SystemConfig& cfg, const Design& d, int k);

// ---- power constraints ---------------------------------------------------

/// T p_rf_{k,n} - tau/(2 rho)|s_{E,k,n}|^2 - (T - tau)/(2 rho) p_{I,k,n}.
double tx_energy_slack(const SystemConfig& cfg, const Design& d, int k, int n);

/// Node energy used on subband n, from V_E, V_I and the noise trace terms.
double node_energy(const ChannelSet& ch, const SystemConfig& cfg, const Design& d, int n);
/// Same quantity from A_tilde_E, A_tilde_I and var_E/var_I.
double node_energy_vectorized(const QuadraticForms& qf, const SystemConfig& cfg,
                              const Design& d, int n);
/// T p_rf_n - node_energy.
double node_energy_slack(const ChannelSet& ch, const SystemConfig& cfg, const Design& d, int n);

// ---- feasibility -----------------------------------------------------------

struct FeasibilityReport {
  double c1_slack = 0.0;        // min(tau, T - tau)
  RMatrix c2_slack;             // K x N
  double p_nonneg_slack = 0.0;  // min p_{I,k,n}
  RVector c3_slack;             // N
  RVector c4_slack;             // K, E_k - E_min,k
  RVector node_slack;           // IRS: |theta| - 1 for theta_E then theta_I; empty for relay
  bool feasible = false;
  std::vector<std::string> violated;
};

/// Slacks of C1-C4 and C_R/C_IRS. A constraint passes when its slack is at
/// least -tol times the magnitude of its right-hand side (1 when that is 0).
FeasibilityReport feasibility_report(const ChannelSet& ch, const SystemConfig& cfg,
                                     const Design& d, double tol = 1e-8);

}  // namespace wpc

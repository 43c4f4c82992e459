// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors
//
// MM surrogates: every bound touches its target at the expansion point and
// lies on the correct side of it elsewhere.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wpc/model.hpp"

namespace wpc {

/// log2(x0) + log2(e) (x - x0)/x0, an upper bound of log2(x). Throws if x0 <= 0.
double log_affine_minorizer(double x, double x0);

/// Quadratic upper bound of s(x) = -log2(x^H T x + nu):
/// s(x0) + Re{b^H (x - x0)} + (x - x0)^H D (x - x0).
struct QuadMajorizer {
  CVector x0;
  double s0 = 0.0;
  CVector b;
  CMatrix D;

  double value(const CVector& x) const;
};

/// b = -2 log2(e) T x0 / (x0^H T x0 + nu), D = 4P / (w^H Q w) I with w the
/// principal eigenvector of T. Throws when w^H Q w = 0.
QuadMajorizer lemma1_majorizer(const CMatrix& Tm, double nu, const CMatrix& Q, double P,
                               const CVector& x0);

/// Per-subband bound log2(1 + SINR) >= -(u^H F u + Re{f^H u} + d).
/// value() expands around u0, since u0^H D u0 can dwarf the bound itself.
struct C5Term {
  CMatrix F;
  CVector f;
  double d = 0.0;
  CVector u0;
  CVector slope;  // 2 F u0 + f
  double h0 = 0.0;  // -log2(1 + SINR) at u0

  double value(const CVector& u) const;
};

/// Builds the [k][n] terms at the design's information variables. The
/// curvature term uses the C3 bound on u_I with P = 2 rho T p_rf / (T - tau).
std::vector<std::vector<C5Term>> c5_surrogate(const QuadraticForms& qf, const Design& prev,
                                              const SystemConfig& cfg);

/// Concave per-subband bound
///   log2(1 + SINR) >= log2(2 Re{a^H u} + c) - u^H F u + constant
/// obtained by linearising the convex u^H B u inside the first logarithm and
/// applying the log inequality to the second.
struct C5LogAffineTerm {
  CVector a;  // B u0
  double c = 0.0;  // zeta - u0^H B u0
  CMatrix F;  // log2(e) A_hat / (u0^H A_hat u0 + zeta)
  double constant = 0.0;

  double value(const CVector& u) const;
};

std::vector<std::vector<C5LogAffineTerm>> c5_log_affine_surrogate(const QuadraticForms& qf,
                                                                  const Design& prev,
                                                                  const SystemConfig& cfg);

// ---- energy constraint ----------------------------------------------------

/// Concave lower bound of E(x) = (tau/rho) phi(1/2 sum_n x_n^H A_n x_n):
///   constant + sum_n Re{v_n^H x_n} - beta/2 sum_n |x_n|^2
/// with v_n = (vartheta_n)^H = beta x0_n + (tau/rho) phi'(omega) A_n x0_n.
struct C4Surrogate {
  double beta = 0.0;
  double omega = 0.0;
  double energy0 = 0.0;
  std::vector<CVector> v;
  double constant = 0.0;
  bool degenerate = false;  // omega == 0

  double value(const std::vector<CVector>& x) const;
};

C4Surrogate c4_surrogate(const std::vector<CMatrix>& A, const std::vector<CVector>& x0,
                         double beta, double tau, const SystemConfig& cfg);

/// Smallest beta_0 with E(x) + beta_0/2 |x|^2 convex for every x whose
/// harvester input stays in (0, p_max], given lambda = max_n lambda_max(A_n).
/// The supremum of the negative curvature is taken on a log-spaced grid.
double curvature_bound(double lambda, double p_max, double tau, const SystemConfig& cfg);

/// beta for the matrix block: x_n = var_E(n), A_n = A_bar[k][n]. Returns K
/// values (one per pair, shared over n), each the bound times `safety`.
std::vector<double> beta_matrices(const QuadraticForms& qf, const Design& d,
                                  const SystemConfig& cfg, double safety = 1.1);

/// beta for the waveform block: x_n = s_E,n, A_n = Xi[k][n].
std::vector<double> beta_waveforms(const QuadraticForms& qf, const Design& d,
                                   const SystemConfig& cfg, double safety = 1.1);

/// Range of harvester input power over which E >= e_min at the given tau,
/// i.e. the roots of a L^2 + b L = ln(rho e_min / (tau e^c)) in L = ln p.
/// Empty when the discriminant is negative (the target is unreachable).
std::optional<std::pair<double, double>> eh_power_window(const SystemConfig& cfg, double tau,
                                                         double e_min);

/// Smallest eigenvalue of the real Hessian of E(x) + beta/2 |x|^2 at x.
double convexified_min_eigenvalue(const std::vector<CMatrix>& A, const std::vector<CVector>& x,
                                  double beta, double tau, const SystemConfig& cfg);

// ---- IRS and waveform bounds -------------------------------------------------

/// Re{conj(theta) theta0 / |theta0|}, a lower bound of |theta|. Throws if theta0 = 0.
double unit_modulus_minorizer(Complex theta, Complex theta0);

/// Per (k, n): log2(1 + SINR) >= log2(q^T p + zeta) - log2(b^T p0 + zeta)
///                                - log2(e) b^T (p - p0) / (b^T p0 + zeta).
struct C5PowerTerm {
  RVector q;
  RVector b;
  double zeta = 0.0;
  double denom0 = 0.0;  // b^T p0 + zeta
  RVector p0;

  double value(const RVector& p) const;
};

std::vector<std::vector<C5PowerTerm>> c5_power_surrogate(const ChannelSet& ch,
                                                         const SystemConfig& cfg,
                                                         const Design& prev);

}  // namespace wpc

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors

#include "wpc/surrogates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wpc {

namespace {

constexpr double kLog2e = std::numbers::log2e;

double zeta_a(const SystemConfig& cfg, int k, int n) {
  return cfg.sigma2_rx(k, n) + cfg.delta2_rx(k, n);
}

double re_dot(const CVector& a, const CVector& b) { return a.dot(b).real(); }

}  // namespace

double log_affine_minorizer(double x, double x0) {
  if (!(x0 > 0)) throw std::invalid_argument("log_affine_minorizer: x0 must be positive");
  return std::log2(x0) + kLog2e * (x - x0) / x0;
}

// ---- quadratic majorizer -----------------------------------------------------

double QuadMajorizer::value(const CVector& x) const {
  const CVector dx = x - x0;
  return s0 + re_dot(b, dx) + quad_form(D, dx);
}

QuadMajorizer lemma1_majorizer(const CMatrix& Tm, double nu, const CMatrix& Q, double P,
                               const CVector& x0) {
  if (!(P > 0)) throw std::invalid_argument("lemma1_majorizer: P must be positive");
  if (nu < 0) throw std::invalid_argument("lemma1_majorizer: nu must be non-negative");
  const double q0 = quad_form(Tm, x0) + nu;
  if (!(q0 > 0)) throw std::invalid_argument("lemma1_majorizer: x0^H T x0 + nu must be positive");
  const EigenPair w = principal_eigenpair(hermitian_part(Tm));
  const double wqw = quad_form(Q, w.vector);
  if (!(wqw > 0)) {
    throw std::domain_error("lemma1_majorizer: w^H Q w = 0, curvature bound is unbounded");
  }
  QuadMajorizer out;
  out.x0 = x0;
  out.s0 = -std::log2(q0);
  out.b = (-2.0 * kLog2e / q0) * (Tm * x0);
  const Index n = x0.size();
  out.D = (4.0 * P / wqw) * CMatrix::Identity(n, n);
  return out;
}

// ---- C5 ---------------------------------------------------------------------

double C5Term::value(const CVector& u) const {
  const CVector du = u - u0;
  return -(h0 + re_dot(slope, du) + quad_form(F, du));
}

std::vector<std::vector<C5Term>> c5_surrogate(const QuadraticForms& qf, const Design& prev,
                                              const SystemConfig& cfg) {
  if (!(prev.tau < cfg.T)) throw std::invalid_argument("c5_surrogate: requires tau < T");
  const double P_coeff = 2.0 * cfg.rho() * cfg.T / (cfg.T - prev.tau);
  std::vector<std::vector<C5Term>> out(cfg.K, std::vector<C5Term>(cfg.N));
  for (int n = 0; n < cfg.N; ++n) {
    const CVector u0 = prev.var_I(n);
    const double P = P_coeff * cfg.p_rf_node(n);
    for (int k = 0; k < cfg.K; ++k) {
      const double z = zeta_a(cfg, k, n);
      const CMatrix& Ah = qf.A_hat[k][n];
      const double qa = quad_form(Ah, u0) + z;
      const double qb = quad_form(qf.B[k][n], u0) + z;
      const QuadMajorizer mj = lemma1_majorizer(qf.B[k][n], z, qf.A_tilde_I[n], P, u0);
      C5Term& t = out[k][n];
      t.F = (kLog2e / qa) * Ah + mj.D;
      t.f = mj.b - 2.0 * (mj.D * u0);
      t.d = std::log2(qa / qb) - re_dot(mj.b, u0) + quad_form(mj.D, u0) -
            kLog2e * (qa - z) / qa;
      t.u0 = u0;
      t.slope = (2.0 * kLog2e / qa) * (Ah * u0) + mj.b;
      t.h0 = std::log2(qa / qb);
    }
  }
  return out;
}

double C5LogAffineTerm::value(const CVector& u) const {
  const double arg = 2.0 * re_dot(a, u) + c;
  if (!(arg > 0)) return -std::numeric_limits<double>::infinity();
  return std::log2(arg) - quad_form(F, u) + constant;
}

std::vector<std::vector<C5LogAffineTerm>> c5_log_affine_surrogate(const QuadraticForms& qf,
                                                                  const Design& prev,
                                                                  const SystemConfig& cfg) {
  std::vector<std::vector<C5LogAffineTerm>> out(cfg.K, std::vector<C5LogAffineTerm>(cfg.N));
  for (int n = 0; n < cfg.N; ++n) {
    const CVector u0 = prev.var_I(n);
    for (int k = 0; k < cfg.K; ++k) {
      const double z = zeta_a(cfg, k, n);
      const CMatrix& Ah = qf.A_hat[k][n];
      const double ah0 = quad_form(Ah, u0);
      const double qa = ah0 + z;
      C5LogAffineTerm& t = out[k][n];
      t.a = qf.B[k][n] * u0;
      t.c = z - quad_form(qf.B[k][n], u0);
      t.F = (kLog2e / qa) * Ah;
      t.constant = -std::log2(qa) + kLog2e * ah0 / qa;
    }
  }
  return out;
}

// ---- C4 ---------------------------------------------------------------------

double C4Surrogate::value(const std::vector<CVector>& x) const {
  double s = constant;
  for (std::size_t n = 0; n < x.size(); ++n) {
    s += re_dot(v[n], x[n]) - 0.5 * beta * x[n].squaredNorm();
  }
  return s;
}

C4Surrogate c4_surrogate(const std::vector<CMatrix>& A, const std::vector<CVector>& x0,
                         double beta, double tau, const SystemConfig& cfg) {
  if (A.size() != x0.size()) throw std::invalid_argument("c4_surrogate: size mismatch");
  if (beta < 0) throw std::invalid_argument("c4_surrogate: beta must be non-negative");
  C4Surrogate s;
  s.beta = beta;
  double omega = 0.0;
  for (std::size_t n = 0; n < A.size(); ++n) omega += quad_form(A[n], x0[n]);
  omega *= 0.5;
  s.omega = omega;
  s.degenerate = !(omega > 0);
  s.energy0 = harvested_energy(cfg, tau, omega);
  const double slope = tau / cfg.rho() * eh_shape_d1(cfg.eh, omega);
  s.constant = s.energy0;
  s.v.resize(A.size());
  for (std::size_t n = 0; n < A.size(); ++n) {
    s.v[n] = beta * x0[n] + slope * (A[n] * x0[n]);
    s.constant += 0.5 * beta * x0[n].squaredNorm() - re_dot(s.v[n], x0[n]);
  }
  return s;
}

double curvature_bound(double lambda, double p_max, double tau, const SystemConfig& cfg) {
  if (!(lambda > 0) || !(p_max > 0) || !(tau > 0)) return 0.0;
  const double scale = tau / cfg.rho();
  // The shape decays faster than any power as ln p -> -inf, so a floor far
  // below any physical input power loses nothing.
  const double lo = std::log(std::min(1e-40, p_max));
  const double hi = std::log(p_max);
  constexpr int kGrid = 4000;
  double worst = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double p = std::exp(lo + (hi - lo) * double(i) / kGrid);
    const double d1 = eh_shape_d1(cfg.eh, p);
    const double d2 = eh_shape_d2(cfg.eh, p);
    const double need = -std::min(0.0, d1) * lambda - std::min(0.0, d2) * 2.0 * p * lambda;
    worst = std::max(worst, need);
  }
  return scale * worst;
}

namespace {

std::vector<double> beta_common(const std::vector<std::vector<CMatrix>>& mats,
                                const std::vector<double>& norm2_max, double tau,
                                const SystemConfig& cfg, double safety) {
  std::vector<double> out(cfg.K, 0.0);
  for (int k = 0; k < cfg.K; ++k) {
    double lambda = 0.0;
    double p_max = 0.0;
    for (int n = 0; n < cfg.N; ++n) {
      const double l = std::max(0.0, max_eigenvalue(mats[k][n]));
      lambda = std::max(lambda, l);
      p_max += 0.5 * l * norm2_max[n];
    }
    out[k] = safety * curvature_bound(lambda, p_max, tau, cfg);
  }
  return out;
}

}  // namespace

std::vector<double> beta_matrices(const QuadraticForms& qf, const Design& d,
                                  const SystemConfig& cfg, double safety) {
  if (!(d.tau > 0)) throw std::invalid_argument("beta_matrices: requires tau > 0");
  // C3 with A_tilde_E >= sigma^2 I bounds |u_E,n|^2 by 2 rho T p_rf / (tau sigma^2).
  std::vector<double> norm2(cfg.N);
  for (int n = 0; n < cfg.N; ++n) {
    const double floor = std::max(cfg.sigma2_node(n), min_eigenvalue(qf.A_tilde_E[n]));
    norm2[n] = floor > 0 ? 2.0 * cfg.rho() * cfg.T * cfg.p_rf_node(n) / (d.tau * floor)
                         : std::numeric_limits<double>::infinity();
  }
  return beta_common(qf.A_bar, norm2, d.tau, cfg, safety);
}

std::vector<double> beta_waveforms(const QuadraticForms& qf, const Design& d,
                                   const SystemConfig& cfg, double safety) {
  if (!(d.tau > 0)) throw std::invalid_argument("beta_waveforms: requires tau > 0");
  // C2 bounds |s_n|^2 by 2 rho T / tau sum_k p_rf_{k,n}.
  std::vector<double> norm2(cfg.N);
  for (int n = 0; n < cfg.N; ++n) {
    norm2[n] = 2.0 * cfg.rho() * cfg.T / d.tau * cfg.p_rf_tx.col(n).sum();
  }
  return beta_common(qf.Xi, norm2, d.tau, cfg, safety);
}

std::optional<std::pair<double, double>> eh_power_window(const SystemConfig& cfg, double tau,
                                                         double e_min) {
  if (!(tau > 0) || !(e_min > 0)) return std::nullopt;
  const double a = cfg.eh.a, b = cfg.eh.b;
  const double target = std::log(cfg.rho() * e_min / (tau * std::exp(cfg.eh.c)));
  const double disc = b * b + 4.0 * a * target;
  if (disc < 0) return std::nullopt;
  const double r = std::sqrt(disc);
  return std::make_pair(std::exp((-b + r) / (2.0 * a)), std::exp((-b - r) / (2.0 * a)));
}

double convexified_min_eigenvalue(const std::vector<CMatrix>& A, const std::vector<CVector>& x,
                                  double beta, double tau, const SystemConfig& cfg) {
  Index dim = 0;
  for (const auto& xn : x) dim += 2 * xn.size();
  RMatrix M = RMatrix::Zero(dim, dim);
  RVector z(dim);
  Index off = 0;
  for (std::size_t n = 0; n < A.size(); ++n) {
    const Index s = 2 * x[n].size();
    M.block(off, off, s, s) = real_embedding(hermitian_part(A[n]));
    z.segment(off, s) = to_real(x[n]);
    off += s;
  }
  const double omega = 0.5 * z.dot(M * z);
  const RVector grad = M * z;
  const double scale = tau / cfg.rho();
  RMatrix hess = scale * (eh_shape_d2(cfg.eh, omega) * grad * grad.transpose() +
                          eh_shape_d1(cfg.eh, omega) * M);
  hess.diagonal().array() += beta;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(hess, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// ---- IRS and waveforms --------------------------------------------------------

double unit_modulus_minorizer(Complex theta, Complex theta0) {
  const double m = std::abs(theta0);
  if (!(m > 0)) throw std::invalid_argument("unit_modulus_minorizer: theta0 must be nonzero");
  return (std::conj(theta) * theta0).real() / m;
}

double C5PowerTerm::value(const RVector& p) const {
  return std::log2(q.dot(p) + zeta) - std::log2(denom0) - kLog2e * b.dot(p - p0) / denom0;
}

std::vector<std::vector<C5PowerTerm>> c5_power_surrogate(const ChannelSet& ch,
                                                         const SystemConfig& cfg,
                                                         const Design& prev) {
  std::vector<std::vector<C5PowerTerm>> out(cfg.K, std::vector<C5PowerTerm>(cfg.N));
  for (int n = 0; n < cfg.N; ++n) {
    if ((prev.p_I[n].array() < 0).any()) {
      throw std::invalid_argument("c5_power_surrogate: powers must be non-negative");
    }
    for (int k = 0; k < cfg.K; ++k) {
      C5PowerTerm& t = out[k][n];
      t.b = RVector::Zero(cfg.K);
      for (int j = 0; j < cfg.K; ++j) {
        if (j != k) t.b(j) = psi(ch, prev, k, j, n);
      }
      t.q = t.b;
      t.q(k) = psi(ch, prev, k, k, n);
      t.zeta = cfg.sigma2_node(n) * psi_tilde(ch, prev, k, n) + zeta_a(cfg, k, n);
      t.p0 = prev.p_I[n];
      t.denom0 = t.b.dot(t.p0) + t.zeta;
    }
  }
  return out;
}

}  // namespace wpc

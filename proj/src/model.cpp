// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors

#include "wpc/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wpc {

// ---- config -------------------------------------------------------------------

std::string to_string(Mode mode) { return mode == Mode::Relay ? "relay" : "irs"; }

Mode mode_from_string(const std::string& name) {
  if (name == "relay") return Mode::Relay;
  if (name == "irs") return Mode::ActiveIrs;
  throw std::invalid_argument("unknown mode '" + name + "' (expected relay|irs)");
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

void SystemConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  if (K <= 0 || N <= 0 || M <= 0) fail("K, N, M must be positive");
  if (!(T > 0)) fail("T must be positive");
  if (p_rf_tx.rows() != K || p_rf_tx.cols() != N) fail("p_rf_tx must be K x N");
  if (p_rf_node.size() != N) fail("p_rf_node must have N entries");
  if (sigma2_node.size() != N) fail("sigma2_node must have N entries");
  if (sigma2_rx.rows() != K || sigma2_rx.cols() != N) fail("sigma2_rx must be K x N");
  if (delta2_rx.rows() != K || delta2_rx.cols() != N) fail("delta2_rx must be K x N");
  if (e_min.size() != K) fail("e_min must have K entries");
  if ((p_rf_tx.array() < 0).any() || (p_rf_node.array() < 0).any() ||
      (sigma2_node.array() < 0).any() || (sigma2_rx.array() < 0).any() ||
      (delta2_rx.array() < 0).any() || (e_min.array() < 0).any()) {
    fail("powers, noises and energy targets must be non-negative");
  }
  if (((sigma2_rx + delta2_rx).array() <= 0).any()) fail("receiver noise must be positive");
  if (!(eh.a < 0 && eh.b < 0)) fail("rectifier fit requires a < 0 and b < 0");
}

SystemConfig default_config(Mode mode, int K, int N, int M, double e_min) {
  SystemConfig cfg;
  cfg.K = K;
  cfg.N = N;
  cfg.M = M;
  cfg.mode = mode;
  cfg.T = 1.0;
  cfg.p_rf_tx = RMatrix::Constant(K, N, dbm_to_watt(28.0));
  const double node_budget = mode == Mode::Relay ? dbm_to_watt(28.0) : dbm_to_watt(20.0);
  cfg.p_rf_node = RVector::Constant(N, node_budget);
  const double node_noise = mode == Mode::Relay ? dbm_to_watt(-80.0) : dbm_to_watt(-100.0);
  cfg.sigma2_node = RVector::Constant(N, node_noise);
  cfg.sigma2_rx = RMatrix::Constant(K, N, dbm_to_watt(-80.0));
  cfg.delta2_rx = RMatrix::Constant(K, N, dbm_to_watt(-80.0));
  cfg.e_min = RVector::Constant(K, e_min);
  return cfg;
}

// ---- design -------------------------------------------------------------------

CMatrix Design::amp_E(int n) const {
  if (mode == Mode::Relay) return U_E[n];
  return theta_E.asDiagonal();
}

CMatrix Design::amp_I(int n) const {
  if (mode == Mode::Relay) return U_I[n];
  return theta_I.asDiagonal();
}

CVector Design::var_E(int n) const { return mode == Mode::Relay ? vec(U_E[n]) : theta_E; }
CVector Design::var_I(int n) const { return mode == Mode::Relay ? vec(U_I[n]) : theta_I; }

Design Design::zeros(const SystemConfig& cfg) {
  Design d;
  d.mode = cfg.mode;
  d.s_E.assign(cfg.N, CVector::Zero(cfg.K));
  d.p_I.assign(cfg.N, RVector::Zero(cfg.K));
  if (cfg.mode == Mode::Relay) {
    d.U_E.assign(cfg.N, CMatrix::Zero(cfg.M, cfg.M));
    d.U_I.assign(cfg.N, CMatrix::Zero(cfg.M, cfg.M));
  } else {
    d.theta_E = CVector::Zero(cfg.M);
    d.theta_I = CVector::Zero(cfg.M);
  }
  return d;
}

// ---- quadratic forms ----------------------------------------------------------

namespace {

CMatrix outer(const CVector& x) { return x * x.adjoint(); }

}  // namespace

CMatrix xi_matrix(const ChannelSet& ch, const Design& d, int k, int n) {
  const CVector w = ch.H[n].adjoint() * d.amp_E(n).adjoint() * ch.g(k, n).conjugate();
  return outer(w);
}

QuadraticForms assemble_quadratic_forms(const ChannelSet& ch, const SystemConfig& cfg,
                                        const Design& d) {
  const bool relay = cfg.mode == Mode::Relay;
  const int K = cfg.K, N = cfg.N, M = cfg.M;
  const Index order = relay ? Index(M) * M : Index(M);
  const CMatrix eye_m = CMatrix::Identity(M, M);
  auto combine = [relay](const CMatrix& x, const CMatrix& y) {
    return relay ? kron(x, y) : hadamard(x, y);
  };

  QuadraticForms qf;
  qf.mode = cfg.mode;
  qf.A_tilde_E.resize(N);
  qf.A_tilde_I.resize(N);
  auto grid = [&] { return std::vector<std::vector<CMatrix>>(K, std::vector<CMatrix>(N)); };
  qf.A = grid();
  qf.A_hat = grid();
  qf.A_bar = grid();
  qf.Xi = grid();
  qf.B = grid();

  for (int n = 0; n < N; ++n) {
    const CMatrix& H = ch.H[n];
    const double s2 = cfg.sigma2_node(n);
    const CMatrix x_e = outer(H * d.s_E[n]);                               // H s s^H H^H
    const CMatrix x_i = H * d.p_I[n].cast<Complex>().asDiagonal() * H.adjoint();  // H Q H^H
    const CMatrix noise = s2 * CMatrix::Identity(order, order);
    qf.A_tilde_E[n] = hermitian_part(combine(x_e.transpose(), eye_m) + noise);
    qf.A_tilde_I[n] = hermitian_part(combine(x_i.transpose(), eye_m) + noise);

    for (int k = 0; k < K; ++k) {
      const CVector g = ch.g(k, n);
      const CMatrix gg = g.conjugate() * g.transpose();  // g^* g^T
      const CVector h = ch.h(k, n);
      // sum_{j != k} p_j h_j h_j^H + sigma^2 I; the noise term shares the g^* g^T factor.
      CMatrix interference = x_i - d.p_I[n](k) * outer(h) + s2 * eye_m;
      qf.A[k][n] = hermitian_part(combine((d.p_I[n](k) * outer(h)).transpose(), gg));
      qf.A_hat[k][n] = hermitian_part(combine(interference.transpose(), gg));
      qf.A_bar[k][n] = hermitian_part(combine(x_e.transpose(), gg));
      qf.B[k][n] = qf.A_hat[k][n] + qf.A[k][n];
      qf.Xi[k][n] = xi_matrix(ch, d, k, n);
    }
  }
  return qf;
}

// ---- SINR and rate ------------------------------------------------------------

double psi(const ChannelSet& ch, const Design& d, int k, int j, int n) {
  const Complex v = ch.g(k, n).transpose() * d.amp_I(n) * ch.h(j, n);
  return std::norm(v);
}

double psi_tilde(const ChannelSet& ch, const Design& d, int k, int n) {
  const CVector w = ch.g(k, n).transpose() * d.amp_I(n);
  return w.squaredNorm();
}

double sinr(const ChannelSet& ch, const SystemConfig& cfg, const Design& d, int k, int n) {
  double interference = 0.0;
  for (int j = 0; j < cfg.K; ++j) {
    if (j != k) interference += d.p_I[n](j) * psi(ch, d, k, j, n);
  }
  const double denom = interference + cfg.sigma2_node(n) * psi_tilde(ch, d, k, n) +
                       cfg.delta2_rx(k, n) + cfg.sigma2_rx(k, n);
  return d.p_I[n](k) * psi(ch, d, k, k, n) / denom;
}

double sinr_vectorized(const QuadraticForms& qf, const SystemConfig& cfg, const Design& d,
                       int k, int n) {
  const CVector u = d.var_I(n);
  const double num = quad_form(qf.A[k][n], u);
  const double den = quad_form(qf.A_hat[k][n], u) + cfg.delta2_rx(k, n) + cfg.sigma2_rx(k, n);
  return num / den;
}

double log_rate_sum(const ChannelSet& ch, const SystemConfig& cfg, const Design& d, int k) {
  double sum = 0.0;
  for (int n = 0; n < cfg.N; ++n) sum += std::log2(1.0 + sinr(ch, cfg, d, k, n));
  return sum;
}

double pair_rate(const ChannelSet& ch, const SystemConfig& cfg, const Design& d, int k) {
  return (cfg.T - d.tau) / (cfg.rho() * cfg.T) * log_rate_sum(ch, cfg, d, k);
}

double min_rate(const ChannelSet& ch, const SystemConfig& cfg, const Design& d) {
  double r = pair_rate(ch, cfg, d, 0);
  for (int k = 1; k < cfg.K; ++k) r = std::min(r, pair_rate(ch, cfg, d, k));
  return r;
}

// ---- energy harvesting --------------------------------------------------------

double harvester_input_power(const ChannelSet& ch, const Design& d, int k) {
  double p = 0.0;
  for (int n = 0; n < ch.subbands(); ++n) {
    // s^H Xi s = |g^T U_E H s|^2
    const Complex v = ch.g(k, n).transpose() * d.amp_E(n) * ch.H[n] * d.s_E[n];
    p += std::norm(v);
  }
  return 0.5 * p;
}

double harvester_input_power_vectorized(const QuadraticForms& qf, const Design& d, int k) {
  double p = 0.0;
  for (std::size_t n = 0; n < qf.A_bar[k].size(); ++n) {
    p += quad_form(qf.A_bar[k][n], d.var_E(int(n)));
  }
  return 0.5 * p;
}

double eh_shape(const EhCurve& eh, double p) {
  if (!(p > 0)) return 0.0;
  const double l = std::log(p);
  return std::exp(eh.a * l * l + eh.b * l + eh.c);
}

double eh_shape_d1(const EhCurve& eh, double p) {
  if (!(p > 0)) return 0.0;
  const double l = std::log(p);
  return eh_shape(eh, p) * (2.0 * eh.a * l + eh.b) / p;
}

double eh_shape_d2(const EhCurve& eh, double p) {
  if (!(p > 0)) return 0.0;
  const double l = std::log(p);
  const double g = 2.0 * eh.a * l + eh.b;
  return eh_shape(eh, p) * (g * g - g + 2.0 * eh.a) / (p * p);
}

double harvested_energy(const SystemConfig& cfg, double tau, double p_e) {
  return tau / cfg.rho() * eh_shape(cfg.eh, p_e);
}

double harvested_energy(const ChannelSet& ch, const SystemConfig& cfg, const Design& d, int k) {
  return harvested_energy(cfg, d.tau, harvester_input_power(ch, d, k));
}

// ---- power constraints ----------------------------------------------------------

double tx_energy_slack(const SystemConfig& cfg, const Design& d, int k, int n) {
  const double r2 = 2.0 * cfg.rho();
  return cfg.T * cfg.p_rf_tx(k, n) - d.tau / r2 * std::norm(d.s_E[n](k)) -
         (cfg.T - d.tau) / r2 * d.p_I[n](k);
}

double node_energy(const ChannelSet& ch, const SystemConfig& cfg, const Design& d, int n) {
  const CMatrix& H = ch.H[n];
  const CMatrix ue = d.amp_E(n);
  const CMatrix ui = d.amp_I(n);
  const CMatrix v_e = H.adjoint() * ue.adjoint() * ue * H;
  const CMatrix v_i = H.adjoint() * ui.adjoint() * ui * H;
  const double s2 = cfg.sigma2_node(n);
  const double eh_power = quad_form(v_e, d.s_E[n]) + s2 * ue.squaredNorm();
  double tr_qv = 0.0;
  for (int k = 0; k < cfg.K; ++k) tr_qv += d.p_I[n](k) * v_i(k, k).real();
  const double id_power = tr_qv + s2 * ui.squaredNorm();
  const double r2 = 2.0 * cfg.rho();
  return d.tau / r2 * eh_power + (cfg.T - d.tau) / r2 * id_power;
}

double node_energy_vectorized(const QuadraticForms& qf, const SystemConfig& cfg,
                              const Design& d, int n) {
  const double r2 = 2.0 * cfg.rho();
  return d.tau / r2 * quad_form(qf.A_tilde_E[n], d.var_E(n)) +
         (cfg.T - d.tau) / r2 * quad_form(qf.A_tilde_I[n], d.var_I(n));
}

double node_energy_slack(const ChannelSet& ch, const SystemConfig& cfg, const Design& d, int n) {
  return cfg.T * cfg.p_rf_node(n) - node_energy(ch, cfg, d, n);
}

// ---- feasibility ------------------------------------------------------------------

FeasibilityReport feasibility_report(const ChannelSet& ch, const SystemConfig& cfg,
                                     const Design& d, double tol) {
  FeasibilityReport r;
  auto check = [&](double slack, double rhs, const std::string& name) {
    const double scale = std::abs(rhs) > 0 ? std::abs(rhs) : 1.0;
    if (!(slack >= -tol * scale)) r.violated.push_back(name);
  };

  r.c1_slack = std::min(d.tau, cfg.T - d.tau);
  check(r.c1_slack, cfg.T, "C1");

  r.c2_slack.resize(cfg.K, cfg.N);
  double p_min = 0.0;
  bool first = true;
  for (int k = 0; k < cfg.K; ++k) {
    for (int n = 0; n < cfg.N; ++n) {
      r.c2_slack(k, n) = tx_energy_slack(cfg, d, k, n);
      check(r.c2_slack(k, n), cfg.T * cfg.p_rf_tx(k, n),
            "C2[" + std::to_string(k) + "," + std::to_string(n) + "]");
      p_min = first ? d.p_I[n](k) : std::min(p_min, d.p_I[n](k));
      first = false;
    }
  }
  r.p_nonneg_slack = p_min;
  check(p_min, cfg.p_rf_tx.maxCoeff(), "C2[p>=0]");

  r.c3_slack.resize(cfg.N);
  for (int n = 0; n < cfg.N; ++n) {
    r.c3_slack(n) = node_energy_slack(ch, cfg, d, n);
    check(r.c3_slack(n), cfg.T * cfg.p_rf_node(n), "C3[" + std::to_string(n) + "]");
  }

  r.c4_slack.resize(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    r.c4_slack(k) = harvested_energy(ch, cfg, d, k) - cfg.e_min(k);
    check(r.c4_slack(k), cfg.e_min(k), "C4[" + std::to_string(k) + "]");
  }

  if (cfg.mode == Mode::ActiveIrs) {
    r.node_slack.resize(2 * cfg.M);
    for (int m = 0; m < cfg.M; ++m) {
      r.node_slack(m) = std::abs(d.theta_E(m)) - 1.0;
      r.node_slack(cfg.M + m) = std::abs(d.theta_I(m)) - 1.0;
      check(r.node_slack(m), 1.0, "C_IRS[E," + std::to_string(m) + "]");
      check(r.node_slack(cfg.M + m), 1.0, "C_IRS[I," + std::to_string(m) + "]");
    }
  }
  r.feasible = r.violated.empty();
  return r;
}

}  // namespace wpc

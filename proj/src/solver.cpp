// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors

#include "wpc/solver.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace wpc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLn2 = std::log(2.0);

double log_arg(const LogTerm& t, const RVector& z) {
  return t.a.dot(z.segment(t.offset, t.a.size())) + t.c;
}

struct CoreResult {
  RVector x;
  int iterations = 0;
  double gap = kInf;
  bool converged = false;
  bool stopped_early = false;
};

// Barrier value t * (-z[obj]) - sum log(-g_i); +inf when infeasible.
double barrier_value(const ConvexSubproblem& sp, const RVector& z, double t) {
  double f = -t * z(sp.objective_index);
  for (const auto& c : sp.constraints) {
    const double g = c.value(z);
    if (!(g < 0.0)) return kInf;
    f -= std::log(-g);
  }
  return f;
}

// Buffers reused across Newton steps; the dense matrices are large enough
// that fresh allocations dominate the run time.
struct NewtonWorkspace {
  RVector grad, gi, d, rhs, y, dx, zn;
  RMatrix hess, scaled;
  Eigen::LLT<RMatrix> llt;
};

void barrier_derivatives(const ConvexSubproblem& sp, const RVector& z, double t,
                         NewtonWorkspace& w) {
  const Index n = sp.dim;
  w.grad.setZero(n);
  w.hess.setZero(n, n);
  w.gi.resize(n);
  w.grad(sp.objective_index) = -t;
  for (const auto& c : sp.constraints) {
    const double g = c.value(z);
    const double inv = -1.0 / g;  // > 0
    w.gi.setZero();
    c.add_gradient(z, w.gi);
    w.grad.noalias() += inv * w.gi;
    w.hess.selfadjointView<Eigen::Lower>().rankUpdate(w.gi, inv * inv);
    c.add_hessian(z, inv, w.hess);
  }
  w.hess.triangularView<Eigen::StrictlyUpper>() = w.hess.transpose();
}

// Solves hess * dx = -grad with Jacobi scaling and escalating regularisation.
bool newton_direction(NewtonWorkspace& w, const SolverSettings& st) {
  const Index n = w.grad.size();
  w.d.resize(n);
  for (Index i = 0; i < n; ++i) {
    const double h = w.hess(i, i);
    w.d(i) = h > 0.0 ? 1.0 / std::sqrt(h) : 1.0;
  }
  w.rhs = -(w.d.array() * w.grad.array()).matrix();
  for (double reg = st.reg_initial; reg <= st.reg_max * (1.0 + 1e-12); reg *= 10.0) {
    w.scaled.noalias() = w.d.asDiagonal() * w.hess * w.d.asDiagonal();
    w.scaled.diagonal().array() += reg;
    w.llt.compute(w.scaled);
    if (w.llt.info() != Eigen::Success) continue;
    w.y = w.llt.solve(w.rhs);
    if (!w.y.allFinite()) continue;
    w.dx = (w.d.array() * w.y.array()).matrix();
    if (w.grad.dot(w.dx) < 0.0) return true;
  }
  return false;
}

CoreResult barrier_path(const ConvexSubproblem& sp, RVector z, const SolverSettings& st,
                        const std::function<bool(const RVector&)>& stop_early,
                        const char* stage) {
  CoreResult out;
  const double m = double(sp.constraints.size());
  if (m == 0) throw std::invalid_argument("solve_barrier: no constraints");
  double t = st.t0;
  NewtonWorkspace w;
  for (int outer = 0; outer < st.max_outer; ++outer) {
    for (int it = 0; it < st.max_newton; ++it) {
      barrier_derivatives(sp, z, t, w);
      if (!newton_direction(w, st)) break;
      const double slope = w.grad.dot(w.dx);
      if (-slope / 2.0 <= 1e-10) break;
      const double f0 = barrier_value(sp, z, t);
      double step = 1.0;
      bool accepted = false;
      while (step > 1e-14) {
        w.zn = z + step * w.dx;
        const double fn = barrier_value(sp, w.zn, t);
        if (fn <= f0 + st.armijo * step * slope) {
          z.swap(w.zn);
          accepted = true;
          break;
        }
        step *= st.shrink;
      }
      if (!accepted) break;
      const bool stalled = f0 - barrier_value(sp, z, t) <= 1e-14 * std::max(1.0, std::abs(f0));
      ++out.iterations;
      if (st.trace) {
        *st.trace << stage << ',' << outer << ',' << out.iterations << ','
                  << z(sp.objective_index) << ',' << m / t << '\n';
      }
      if (stop_early && stop_early(z)) {
        out.x = z;
        out.gap = m / t;
        out.stopped_early = true;
        return out;
      }
      if (stalled) break;
    }
    out.gap = m / t;
    if (out.gap <= st.tol) {
      out.converged = true;
      break;
    }
    t *= st.mu;
  }
  out.x = z;
  return out;
}

RVector block_point(const QuadBlock& b, const RVector& z) {
  if (b.center.size() == 0) return z.segment(b.offset, b.P.rows());
  return z.segment(b.offset, b.P.rows()) - b.center;
}

}  // namespace

double SmoothConstraint::value(const RVector& z) const {
  double v = constant;
  for (const auto& b : quad) {
    const RVector zb = block_point(b, z);
    v += zb.dot(b.P * zb);
  }
  if (linear.size() > 0) v += linear.dot(z);
  for (const auto& t : logs) {
    const double arg = log_arg(t, z);
    if (!(arg > 0.0)) return kInf;
    v -= t.weight * std::log2(arg);
  }
  return v;
}

void SmoothConstraint::add_gradient(const RVector& z, RVector& grad) const {
  for (const auto& b : quad) {
    grad.segment(b.offset, b.P.rows()).noalias() += 2.0 * (b.P * block_point(b, z));
  }
  if (linear.size() > 0) grad += linear;
  for (const auto& t : logs) {
    const double arg = log_arg(t, z);
    grad.segment(t.offset, t.a.size()) -= (t.weight / (arg * kLn2)) * t.a;
  }
}

void SmoothConstraint::add_hessian(const RVector& z, double scale, RMatrix& hess) const {
  for (const auto& b : quad) {
    const Index s = b.P.rows();
    hess.block(b.offset, b.offset, s, s) += (2.0 * scale) * b.P;
  }
  for (const auto& t : logs) {
    const double arg = log_arg(t, z);
    const Index s = t.a.size();
    hess.block(t.offset, t.offset, s, s).noalias() +=
        (scale * t.weight / (arg * arg * kLn2)) * t.a * t.a.transpose();
  }
}

void SmoothConstraint::scale_by(double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("scale_by: factor must be positive");
  for (auto& b : quad) b.P *= factor;
  if (linear.size() > 0) linear *= factor;
  constant *= factor;
  for (auto& t : logs) t.weight *= factor;
}

double ConvexSubproblem::max_violation(const RVector& z) const {
  double worst = -kInf;
  for (const auto& c : constraints) worst = std::max(worst, c.value(z));
  return worst;
}

std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Optimal: return "optimal";
    case SolverStatus::Infeasible: return "infeasible";
    case SolverStatus::MaxIter: return "max_iter";
  }
  return "unknown";
}

PhaseOneResult phase1_feasible(const ConvexSubproblem& sp, const RVector& start,
                               const SolverSettings& settings) {
  if (start.size() != sp.dim) throw std::invalid_argument("phase1_feasible: start has wrong size");
  PhaseOneResult res;
  const double g0 = sp.max_violation(start);
  if (!std::isfinite(g0)) {
    throw std::invalid_argument("phase1_feasible: start outside the log domain");
  }
  if (g0 < 0.0) {
    res.feasible = true;
    res.x = start;
    res.max_violation = g0;
    return res;
  }

  // Variables (z, s'), maximise s' subject to g_i(z) + s' <= 0, s' <= 1 and
  // a large ball around the start keeping the problem bounded.
  const Index n = sp.dim;
  ConvexSubproblem p1;
  p1.dim = n + 1;
  p1.objective_index = n;
  for (const auto& c : sp.constraints) {
    SmoothConstraint e = c;
    RVector lin = RVector::Zero(n + 1);
    if (c.linear.size() > 0) lin.head(n) = c.linear;
    lin(n) = 1.0;
    e.linear = lin;
    p1.constraints.push_back(std::move(e));
  }
  SmoothConstraint cap;
  cap.name = "phase1_cap";
  cap.linear = RVector::Zero(n + 1);
  cap.linear(n) = 1.0;
  cap.constant = -1.0;
  p1.constraints.push_back(cap);
  const double radius2 = 1e4 * (1.0 + start.squaredNorm());
  SmoothConstraint ball;
  ball.name = "phase1_ball";
  ball.quad.push_back({0, RMatrix::Identity(n, n), {}});
  ball.linear = RVector::Zero(n + 1);
  ball.linear.head(n) = -2.0 * start;
  ball.constant = start.squaredNorm() - radius2;
  p1.constraints.push_back(ball);

  RVector z(n + 1);
  z.head(n) = start;
  z(n) = -g0 - std::max(1.0, std::abs(g0));

  constexpr double kMargin = 1e-3;
  auto deep_enough = [&](const RVector& w) {
    return sp.max_violation(w.head(n)) <= -kMargin;
  };
  SolverSettings st = settings;
  st.tol = std::min(settings.tol, 1e-9);
  const CoreResult core = barrier_path(p1, z, st, deep_enough, "phase1");
  res.iterations = core.iterations;
  res.x = core.x.head(n);
  res.max_violation = sp.max_violation(res.x);
  res.feasible = res.max_violation < 0.0;
  return res;
}

SolverReport solve_barrier(const ConvexSubproblem& sp, const RVector& start,
                           const SolverSettings& settings) {
  SolverReport rep;
  const PhaseOneResult p1 = phase1_feasible(sp, start, settings);
  rep.iterations = p1.iterations;
  if (!p1.feasible) {
    rep.status = SolverStatus::Infeasible;
    rep.x = p1.x;
    rep.message = "phase I ended with max violation " + std::to_string(p1.max_violation);
    return rep;
  }
  const CoreResult core = barrier_path(sp, p1.x, settings, {}, "barrier");
  rep.iterations += core.iterations;
  rep.x = core.x;
  rep.gap = core.gap;
  rep.objective = core.x(sp.objective_index);
  rep.slacks.resize(Index(sp.constraints.size()));
  for (std::size_t i = 0; i < sp.constraints.size(); ++i) {
    rep.slacks(Index(i)) = -sp.constraints[i].value(core.x);
  }
  rep.status = core.converged ? SolverStatus::Optimal : SolverStatus::MaxIter;
  if (rep.slacks.size() > 0 && rep.slacks.minCoeff() < -settings.tol_feas) {
    rep.message = "final point violates a constraint";
  }
  return rep;
}

}  // namespace wpc

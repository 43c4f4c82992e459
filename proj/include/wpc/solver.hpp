// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors
//
// Log-barrier interior-point solver for the convex subproblems built at each
// MM step. Every constraint is brought to the canonical convex form
//
//   g(z) = sum_b z_b^T P_b z_b + q^T z + r - sum_i w_i log2(a_i^T z_i + c_i) <= 0
//
// with P_b PSD and w_i >= 0, which covers the convex quadratic power
// constraints, the concave quadratic energy surrogates, the log-affine rate
// surrogates and linear cuts. The objective is always "maximize one scalar".

#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "wpc/linalg.hpp"

namespace wpc {

/// (x - center)^T P (x - center) with x = z[offset .. offset + P.rows()).
/// An empty center means zero.
struct QuadBlock {
  Index offset = 0;
  RMatrix P;
  RVector center;
};

/// weight * log2(a^T z[offset .. offset + a.size()) + c)
struct LogTerm {
  double weight = 0.0;
  Index offset = 0;
  RVector a;
  double c = 0.0;
};

enum class ConstraintSense { ConvexLe, ConcaveGe };

struct SmoothConstraint {
  std::string name;
  ConstraintSense sense = ConstraintSense::ConvexLe;
  std::vector<QuadBlock> quad;
  RVector linear;  // empty or full dimension
  double constant = 0.0;
  std::vector<LogTerm> logs;  // subtracted

  /// g(z); +infinity outside the log domain.
  double value(const RVector& z) const;
  /// Adds grad g(z) to `grad`.
  void add_gradient(const RVector& z, RVector& grad) const;
  /// Adds scale * hess g(z) to `hess`.
  void add_hessian(const RVector& z, double scale, RMatrix& hess) const;
  /// Multiplies g by a positive factor (normalises constraint magnitudes).
  void scale_by(double factor);
};

/// One variable block for diagnostics and unpacking.
struct VariableBlock {
  std::string name;
  Index offset = 0;
  Index size = 0;  // real entries
};

struct ConvexSubproblem {
  Index dim = 0;
  Index objective_index = 0;  // maximise z[objective_index]
  std::vector<VariableBlock> blocks;
  std::vector<SmoothConstraint> constraints;

  /// Largest g_i(z); strictly feasible iff negative.
  double max_violation(const RVector& z) const;
};

struct SolverSettings {
  double mu = 10.0;
  double t0 = 1.0;
  double tol = 1e-7;        // barrier gap m/t at exit
  double tol_feas = 1e-8;
  double armijo = 0.01;
  double shrink = 0.5;
  int max_newton = 80;      // per centering step
  int max_outer = 40;
  double reg_initial = 1e-10;
  double reg_max = 1e-4;
  std::ostream* trace = nullptr;  // CSV: stage,outer,newton,objective,gap
};

enum class SolverStatus { Optimal, Infeasible, MaxIter };
std::string to_string(SolverStatus s);

struct SolverReport {
  SolverStatus status = SolverStatus::MaxIter;
  double objective = -std::numeric_limits<double>::infinity();
  int iterations = 0;  // Newton steps, phase I included
  double gap = std::numeric_limits<double>::infinity();
  RVector x;
  RVector slacks;  // -g_i(x)
  std::string message;
};

struct PhaseOneResult {
  bool feasible = false;
  RVector x;
  double max_violation = 0.0;
  int iterations = 0;
};

/// Returns `start` untouched when it is already strictly feasible; otherwise
/// minimises the largest violation s over a large ball around `start` and
/// stops as soon as s < 0. `start` must lie in the domain of every log term.
PhaseOneResult phase1_feasible(const ConvexSubproblem& sp, const RVector& start,
                               const SolverSettings& settings = {});

/// Path-following barrier method; runs phase I first when needed.
SolverReport solve_barrier(const ConvexSubproblem& sp, const RVector& start,
                           const SolverSettings& settings = {});

}  // namespace wpc

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors
//
// Dense complex linear algebra used throughout the optimizer: Kronecker and
// Hadamard assembly, column-stacking, Hermitian quadratic forms, principal
// eigenpairs and the real-composite embedding consumed by the barrier solver.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace wpc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

struct EigenPair {
  double value = 0.0;
  CVector vector;  // unit 2-norm
};

/// Standard Kronecker product, (ra*rb) x (ca*cb).
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Entrywise product. Throws std::invalid_argument on shape mismatch.
CMatrix hadamard(const CMatrix& a, const CMatrix& b);

/// Column-stacking vec(.) and its inverse.
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, Index rows, Index cols);

/// (A + A^H) / 2.
CMatrix hermitian_part(const CMatrix& a);

/// Real value of x^H A x evaluated on the Hermitian part of A.
double quad_form(const CMatrix& a, const CVector& x);

/// Largest eigenvalue and eigenvector of a Hermitian PSD matrix. Uses power
/// iteration (at most `max_iter` sweeps) and falls back to a dense
/// eigendecomposition when the residual |Av - lv| <= tol*|A| is not reached.
EigenPair principal_eigenpair(const CMatrix& a, double tol = 1e-10, int max_iter = 200);

/// Principal eigenpair of V^H V, the Gram form used when T = V V^H.
EigenPair gram_principal_eigenpair(const CMatrix& v, double tol = 1e-10);

/// Largest and smallest eigenvalues of the Hermitian part of `a`.
double max_eigenvalue(const CMatrix& a);
double min_eigenvalue(const CMatrix& a);

/// Largest eigenvalue of the product a*b for Hermitian PSD a and b. The
/// spectrum of a*b equals that of a^{1/2} b a^{1/2}, which is evaluated instead.
double max_eig_product(const CMatrix& a, const CMatrix& b);

// Real-composite embedding. A complex vector x of length n maps to a real
// vector z of length 2n with z[2i] = Re x_i and z[2i+1] = Im x_i. For Hermitian
// A the embedding M satisfies z^T M z = x^H A x, so the gradient of x^H A x with
// respect to z is 2 M z = interleave(2 Re(Ax), 2 Im(Ax)) and the Hessian is 2M.

RMatrix real_embedding(const CMatrix& a);
RVector to_real(const CVector& x);
CVector to_complex(const RVector& z);

}  // namespace wpc

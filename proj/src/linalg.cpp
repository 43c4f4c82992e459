// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors

#include "wpc/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wpc {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix hadamard(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("hadamard: shape mismatch " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()));
  }
  return a.cwiseProduct(b);
}

CVector vec(const CMatrix& m) {
  // Eigen storage is column-major, so a reshaped view is column stacking.
  return m.reshaped();
}

CMatrix unvec(const CVector& v, Index rows, Index cols) {
  if (rows <= 0 || cols <= 0 || v.size() != rows * cols) {
    throw std::invalid_argument("unvec: length " + std::to_string(v.size()) +
                                " does not match " + std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
  return v.reshaped(rows, cols);
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

double quad_form(const CMatrix& a, const CVector& x) {
  return (x.adjoint() * hermitian_part(a) * x)(0, 0).real();
}

namespace {

EigenPair dense_principal(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a));
  const Index last = a.rows() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last).normalized()};
}

}  // namespace

EigenPair principal_eigenpair(const CMatrix& a, double tol, int max_iter) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument("principal_eigenpair: matrix must be square and non-empty");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("principal_eigenpair: tol must be positive");

  const CMatrix h = hermitian_part(a);
  const double scale = h.norm();
  if (scale == 0.0) {
    CVector e = CVector::Zero(a.rows());
    e(0) = 1.0;
    return {0.0, e};
  }

  // Start from the column of largest norm so a diagonal dominant direction is
  // picked up immediately; add a small ramp to avoid starting orthogonal to it.
  Index best = 0;
  h.colwise().norm().maxCoeff(&best);
  CVector v = h.col(best);
  for (Index i = 0; i < v.size(); ++i) v(i) += Complex(1e-3 * scale / double(i + 1), 0.0);
  v.normalize();

  for (int it = 0; it < max_iter; ++it) {
    CVector w = h * v;
    const double lambda = v.dot(w).real();
    const double residual = (w - lambda * v).norm();
    if (residual <= tol * scale) return {lambda, v};
    const double wn = w.norm();
    if (wn == 0.0) break;
    v = w / wn;
  }
  return dense_principal(h);
}

EigenPair gram_principal_eigenpair(const CMatrix& v, double tol) {
  return principal_eigenpair(v.adjoint() * v, tol);
}

double max_eigenvalue(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(a.rows() - 1);
}

double min_eigenvalue(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eig_product(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument("max_eig_product: operands must be square of equal order");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a));
  const RVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix sqrt_a = es.eigenvectors() * root.cast<Complex>().asDiagonal() *
                         es.eigenvectors().adjoint();
  return max_eigenvalue(sqrt_a * hermitian_part(b) * sqrt_a);
}

RMatrix real_embedding(const CMatrix& a) {
  const Index n = a.rows();
  RMatrix m(2 * n, 2 * a.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < n; ++i) {
      const Complex c = a(i, j);
      m(2 * i, 2 * j) = c.real();
      m(2 * i, 2 * j + 1) = -c.imag();
      m(2 * i + 1, 2 * j) = c.imag();
      m(2 * i + 1, 2 * j + 1) = c.real();
    }
  }
  return m;
}

RVector to_real(const CVector& x) {
  RVector z(2 * x.size());
  for (Index i = 0; i < x.size(); ++i) {
    z(2 * i) = x(i).real();
    z(2 * i + 1) = x(i).imag();
  }
  return z;
}

CVector to_complex(const RVector& z) {
  if (z.size() % 2 != 0) throw std::invalid_argument("to_complex: odd length");
  CVector x(z.size() / 2);
  for (Index i = 0; i < x.size(); ++i) x(i) = Complex(z(2 * i), z(2 * i + 1));
  return x;
}

}  // namespace wpc

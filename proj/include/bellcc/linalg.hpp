#pragma once

// Small dense complex linear algebra on top of Eigen: tensor products,
// partial traces, Hermitian spectral helpers and Haar-random unitaries.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "bellcc/errors.hpp"
#include "bellcc/random.hpp"

namespace bellcc {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Tr_B of an operator on C^da (x) C^db.
inline Matrix partial_trace_second(const Matrix& m, int da, int db) {
  Matrix out = Matrix::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  return out;
}

// Tr_A of an operator on C^da (x) C^db.
inline Matrix partial_trace_first(const Matrix& m, int da, int db) {
  Matrix out = Matrix::Zero(db, db);
  for (int k = 0; k < db; ++k)
    for (int l = 0; l < db; ++l)
      for (int i = 0; i < da; ++i) out(k, l) += m(i * db + k, i * db + l);
  return out;
}

inline Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

inline double hermitian_defect(const Matrix& m) {
  return m.rows() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Re Tr[a b] without forming the product.
inline double trace_product(const Matrix& a, const Matrix& b) {
  return (a.transpose().cwiseProduct(b)).sum().real();
}

inline RealVector eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double min_eigenvalue(const Matrix& h) { return eigenvalues(h).minCoeff(); }
inline double max_eigenvalue(const Matrix& h) { return eigenvalues(h).maxCoeff(); }

// (h + ridge)^{-1/2} for a positive semidefinite h; negative round-off
// eigenvalues are clipped to zero first.
inline Matrix inverse_sqrt_psd(const Matrix& h, double ridge) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  RealVector s = es.eigenvalues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = 1.0 / std::sqrt(std::max(s(i), 0.0) + ridge);
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

inline Matrix projector(const Vector& v) { return v * v.adjoint(); }

struct TopEigen {
  double value;
  Vector vector;
  int multiplicity;
};

// Largest eigenvalue of a Hermitian matrix and a reproducible unit
// eigenvector. The eigenvector is the normalised projection of the first
// basis vector e_j with a non-negligible component in the top eigenspace,
// so its first nonzero entry is real and positive. Degenerate eigenspaces
// therefore resolve identically regardless of solver internals.
inline TopEigen top_eigenvector(const Matrix& h, double degeneracy_tol = 1e-9) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  const RealVector& ev = es.eigenvalues();
  const Eigen::Index n = ev.size();
  const double top = ev(n - 1);
  const double tol = degeneracy_tol * std::max(1.0, std::abs(top));
  Eigen::Index first = n - 1;
  while (first > 0 && top - ev(first - 1) <= tol) --first;
  const Matrix basis = es.eigenvectors().rightCols(n - first);
  const Matrix proj = basis * basis.adjoint();
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector col = proj.col(j);
    const double norm = col.norm();
    if (norm > 1e-8) return {top, col / norm, static_cast<int>(n - first)};
  }
  return {top, basis.col(basis.cols() - 1), static_cast<int>(n - first)};
}

// Haar-distributed unitary from the QR decomposition of a complex Ginibre
// matrix, with the phases of R's diagonal absorbed.
inline Matrix haar_unitary(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = std::complex<double>(normal(rng), normal(rng));
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const std::complex<double> diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0) q.col(j) *= diag / mag;
  }
  return q;
}

}  // namespace bellcc

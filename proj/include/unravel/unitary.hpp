#pragma once

// Unitary matrices from unconstrained real parameters.
//
// N^2 reals fill an anti-Hermitian generator A: the first N give the
// imaginary diagonal i*p_j, then each upper-triangle pair (j < k) in row-major
// order gives A_jk = p_re + i p_im with A_kj = -conj(A_jk). U = exp(A) is
// computed through the Hermitian matrix K = -iA, U = V diag(e^{i lambda}) V^dagger.

#include <cmath>
#include <span>

#include "unravel/qstate.hpp"
#include "unravel/random.hpp"

namespace unravel {

inline std::size_t generator_parameter_count(int n) { return static_cast<std::size_t>(n) * n; }

inline Matrix anti_hermitian_generator(std::span<const double> params, int n) {
  if (params.size() != generator_parameter_count(n)) {
    throw Error("generator needs " + std::to_string(generator_parameter_count(n)) +
                " parameters, got " + std::to_string(params.size()));
  }
  Matrix a = Matrix::Zero(n, n);
  std::size_t p = 0;
  for (int j = 0; j < n; ++j) a(j, j) = Complex(0.0, params[p++]);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      a(j, k) = Complex(params[p], params[p + 1]);
      a(k, j) = -std::conj(a(j, k));
      p += 2;
    }
  }
  return a;
}

inline Matrix exp_anti_hermitian(const Matrix& a) {
  const Matrix k = -kI * a;
  const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (k + k.adjoint()));
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<Complex>() * kI).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline Matrix unitary_from_parameters(std::span<const double> params, int n) {
  if (n == 0) return Matrix(0, 0);
  return exp_anti_hermitian(anti_hermitian_generator(params, n));
}

inline double unitarity_defect(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
inline Matrix random_unitary(int n, Rng& rng) {
  Matrix z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) z(i, j) = Complex(standard_normal(rng), standard_normal(rng)) / std::sqrt(2.0);
  }
  const Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Random single-qubit unitary on each qubit, tensored together.
inline Operator random_local_unitary(int n_qubits, Rng& rng) {
  Operator u(random_unitary(2, rng));
  for (int k = 1; k < n_qubits; ++k) u = tensor(u, Operator(random_unitary(2, rng)));
  return u;
}

}  // namespace unravel

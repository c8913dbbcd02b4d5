#pragma once

#include <cmath>
#include <initializer_list>
#include <string_view>
#include <utility>

#include "unravel/qstate.hpp"
#include "unravel/random.hpp"

namespace testing_helpers {

using namespace unravel;

inline StateVector ket(std::initializer_list<std::pair<std::string_view, Complex>> terms) {
  const int n = static_cast<int>(terms.begin()->first.size());
  Vector v = Vector::Zero(Eigen::Index{1} << n);
  for (const auto& [bits, a] : terms) v += a * StateVector::basis(bits).amplitudes();
  return normalize(StateVector(v)).state;
}

inline StateVector phi_plus() { return ket({{"00", 1.0}, {"11", 1.0}}); }
inline StateVector phi_minus() { return ket({{"00", 1.0}, {"11", -1.0}}); }
inline StateVector ghz3() { return ket({{"000", 1.0}, {"111", 1.0}}); }
inline StateVector w3() { return ket({{"001", 1.0}, {"010", 1.0}, {"100", 1.0}}); }

inline StateVector random_state(int n_qubits, Rng& rng) {
  Vector v(Eigen::Index{1} << n_qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(standard_normal(rng), standard_normal(rng));
  return normalize(StateVector(v)).state;
}

// Random full-rank state: G G^+ / tr, G Ginibre.
inline DensityMatrix random_density(int n_qubits, Rng& rng, Eigen::Index rank = -1) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  const Eigen::Index r = rank < 0 ? d : rank;
  Matrix g(d, r);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) g(i, j) = Complex(standard_normal(rng), standard_normal(rng));
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

inline Matrix projector(const StateVector& s) { return s.amplitudes() * s.amplitudes().adjoint(); }

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// |<a|b>| = 1 up to a global phase.
inline double overlap(const StateVector& a, const StateVector& b) {
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace testing_helpers

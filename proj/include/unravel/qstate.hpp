#pragma once

// Dense complex linear algebra for small multi-qubit systems.
//
// Qubit 0 is the leftmost tensor factor: basis index i encodes the bit string
// |q0 q1 ... q_{n-1}> big-endian, so |01> is index 1 and |10> is index 2.
// Single-qubit basis: |0> = (1,0), |1> = (0,1); sigma_minus = |0><1|.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <bit>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unravel/error.hpp"

namespace unravel {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Default validation tolerances; every checking entry point takes an override.
struct Tolerances {
  double norm = 1e-10;
  double hermitian = 1e-10;
  double trace = 1e-8;
  double eigenvalue = 1e-8;
};

namespace detail {

inline int qubits_for_dimension(Eigen::Index dim) {
  if (dim < 2 || !std::has_single_bit(static_cast<std::size_t>(dim))) {
    throw Error("dimension " + std::to_string(dim) + " is not 2^n with n >= 1");
  }
  return std::countr_zero(static_cast<std::size_t>(dim));
}

inline double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Amplitude vector over n qubits. May be unnormalized (e.g. L|psi> before
/// renormalization); callers that need a unit vector check is_normalized().
class StateVector {
 public:
  explicit StateVector(Vector amplitudes)
      : amplitudes_(std::move(amplitudes)),
        n_qubits_(detail::qubits_for_dimension(amplitudes_.size())) {}

  StateVector(std::initializer_list<Complex> amplitudes)
      : StateVector(Vector::Map(std::data(amplitudes),
                                static_cast<Eigen::Index>(amplitudes.size()))) {}

  /// Computational basis state from a bit string such as "011".
  static StateVector basis(std::string_view bits) {
    if (bits.empty()) throw Error("empty basis label");
    Vector v = Vector::Zero(Eigen::Index{1} << bits.size());
    Eigen::Index index = 0;
    for (char c : bits) {
      if (c != '0' && c != '1') throw Error("basis label must be binary: " + std::string(bits));
      index = (index << 1) | (c == '1' ? 1 : 0);
    }
    v(index) = 1.0;
    return StateVector(std::move(v));
  }

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_(i); }

  double norm_squared() const { return amplitudes_.squaredNorm(); }
  bool is_normalized(double tol = Tolerances{}.norm) const {
    return std::abs(norm_squared() - 1.0) <= tol;
  }

  friend StateVector operator*(Complex a, const StateVector& s) {
    return StateVector(a * s.amplitudes_);
  }
  friend StateVector operator+(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw Error("state dimension mismatch");
    return StateVector(a.amplitudes_ + b.amplitudes_);
  }

 private:
  Vector amplitudes_;
  int n_qubits_;
};

/// Square 2^n x 2^n complex matrix acting on n qubits.
class Operator {
 public:
  explicit Operator(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw Error("operator must be square");
    n_qubits_ = detail::qubits_for_dimension(entries_.rows());
  }

  static Operator identity(int n_qubits) {
    return Operator(Matrix::Identity(Eigen::Index{1} << n_qubits, Eigen::Index{1} << n_qubits));
  }
  static Operator zero(int n_qubits) {
    return Operator(Matrix::Zero(Eigen::Index{1} << n_qubits, Eigen::Index{1} << n_qubits));
  }

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

  Operator adjoint() const { return Operator(entries_.adjoint()); }
  bool is_hermitian(double tol = Tolerances{}.hermitian) const {
    return detail::hermiticity_defect(entries_) <= tol;
  }

  StateVector apply(const StateVector& s) const {
    if (s.dim() != dim()) throw Error("operator/state dimension mismatch");
    return StateVector(entries_ * s.amplitudes());
  }

  friend Operator operator*(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) throw Error("operator dimension mismatch");
    return Operator(a.entries_ * b.entries_);
  }
  friend Operator operator+(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) throw Error("operator dimension mismatch");
    return Operator(a.entries_ + b.entries_);
  }
  friend Operator operator-(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) throw Error("operator dimension mismatch");
    return Operator(a.entries_ - b.entries_);
  }
  friend Operator operator*(Complex s, const Operator& a) { return Operator(s * a.entries_); }

 private:
  Matrix entries_;
  int n_qubits_ = 0;
};

/// Hermitian, positive semidefinite, unit-trace matrix. Validated on construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries, const Tolerances& tol = {}) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw Error("density matrix must be square");
    n_qubits_ = detail::qubits_for_dimension(entries_.rows());
    if (!entries_.allFinite()) throw NumericalError("density matrix has non-finite entries");
    const double herm = detail::hermiticity_defect(entries_);
    if (herm > tol.hermitian) {
      throw Error("density matrix not Hermitian (defect " + std::to_string(herm) + ")");
    }
    const double tr = entries_.trace().real();
    if (std::abs(tr - 1.0) > tol.trace) {
      throw Error("density matrix trace " + std::to_string(tr) + " != 1");
    }
    const Matrix h = 0.5 * (entries_ + entries_.adjoint());
    const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly)
                               .eigenvalues()
                               .minCoeff();
    if (min_eig < -tol.eigenvalue) {
      throw Error("density matrix not positive (min eigenvalue " + std::to_string(min_eig) + ")");
    }
  }

  static DensityMatrix pure(const StateVector& psi, const Tolerances& tol = {}) {
    if (!psi.is_normalized(tol.norm)) throw Error("pure state projector needs a normalized state");
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint(), tol);
  }

  static DensityMatrix maximally_mixed(int n_qubits) {
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
  }

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

  double purity() const { return (entries_ * entries_).trace().real(); }

  /// Eigenvalues in ascending order (of the Hermitian part).
  Eigen::VectorXd eigenvalues() const {
    const Matrix h = 0.5 * (entries_ + entries_.adjoint());
    return Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
  }

 private:
  Matrix entries_;
  int n_qubits_ = 0;
};

namespace pauli {

inline Operator identity() { return Operator::identity(1); }
inline Operator x() { return Operator(Matrix{{0.0, 1.0}, {1.0, 0.0}}); }
inline Operator y() { return Operator(Matrix{{0.0, -kI}, {kI, 0.0}}); }
inline Operator z() { return Operator(Matrix{{1.0, 0.0}, {0.0, -1.0}}); }
/// |0><1|: lowers the excited state |1> to |0>.
inline Operator minus() { return Operator(Matrix{{0.0, 1.0}, {0.0, 0.0}}); }
inline Operator plus() { return Operator(Matrix{{0.0, 0.0}, {1.0, 0.0}}); }
/// sigma_plus sigma_minus = |1><1|.
inline Operator excited_projector() { return Operator(Matrix{{0.0, 0.0}, {0.0, 1.0}}); }

}  // namespace pauli

inline Operator tensor(const Operator& a, const Operator& b) {
  return Operator(Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval());
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  return StateVector(Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes()).eval());
}

/// Single-qubit `op` on `target_qubit`, identity on the other qubits.
inline Operator embed(const Operator& op, int target_qubit, int n_qubits) {
  if (op.n_qubits() != 1) throw Error("embed expects a single-qubit operator");
  if (n_qubits < 1 || target_qubit < 0 || target_qubit >= n_qubits) {
    throw Error("embed: qubit index " + std::to_string(target_qubit) + " out of range for " +
                std::to_string(n_qubits) + " qubits");
  }
  const Eigen::Index left = Eigen::Index{1} << target_qubit;
  const Eigen::Index right = Eigen::Index{1} << (n_qubits - target_qubit - 1);
  Matrix m = Eigen::kroneckerProduct(
      Matrix::Identity(left, left),
      Eigen::kroneckerProduct(op.matrix(), Matrix::Identity(right, right)).eval());
  return Operator(std::move(m));
}

struct Normalized {
  StateVector state;
  double norm_squared;
};

inline Normalized normalize(const StateVector& psi) {
  const double n2 = psi.norm_squared();
  if (!(n2 > 0.0)) throw Error("null state");
  return {StateVector(psi.amplitudes() / std::sqrt(n2)), n2};
}

namespace detail {

// Splits a basis index into (kept, traced) sub-indices for the given kept
// qubits (sorted ascending, big-endian bit order).
struct SubsystemSplit {
  std::vector<int> keep;
  std::vector<int> trace_out;
  int n_qubits;

  SubsystemSplit(std::span<const int> keep_qubits, int n) : n_qubits(n) {
    if (keep_qubits.empty()) throw Error("partial trace: empty keep set");
    keep.assign(keep_qubits.begin(), keep_qubits.end());
    std::sort(keep.begin(), keep.end());
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
      throw Error("partial trace: duplicate qubit index");
    }
    if (keep.front() < 0 || keep.back() >= n) throw Error("partial trace: qubit index out of range");
    for (int q = 0; q < n; ++q) {
      if (!std::binary_search(keep.begin(), keep.end(), q)) trace_out.push_back(q);
    }
  }

  static Eigen::Index gather(Eigen::Index index, std::span<const int> qubits, int n) {
    Eigen::Index out = 0;
    for (int q : qubits) out = (out << 1) | ((index >> (n - 1 - q)) & 1);
    return out;
  }
  Eigen::Index kept_index(Eigen::Index i) const { return gather(i, keep, n_qubits); }
  Eigen::Index traced_index(Eigen::Index i) const { return gather(i, trace_out, n_qubits); }
};

}  // namespace detail

/// Reduced matrix on `keep` (no validation of the input; used on raw matrices).
inline Matrix partial_trace(const Matrix& rho, std::span<const int> keep) {
  const int n = detail::qubits_for_dimension(rho.rows());
  const detail::SubsystemSplit split(keep, n);
  const Eigen::Index dk = Eigen::Index{1} << split.keep.size();
  Matrix out = Matrix::Zero(dk, dk);
  const Eigen::Index d = rho.rows();
  std::vector<Eigen::Index> kept(d), traced(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    kept[i] = split.kept_index(i);
    traced[i] = split.traced_index(i);
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (traced[i] == traced[j]) out(kept[i], kept[j]) += rho(i, j);
    }
  }
  return out;
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  return DensityMatrix(partial_trace(rho.matrix(), keep));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep) {
  return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

/// Reduced matrix of the pure state |psi><psi| on `keep`, computed as M M^dagger
/// with M the (kept x traced) reshaping of the amplitudes.
inline Matrix reduced_density(const StateVector& psi, std::span<const int> keep) {
  const detail::SubsystemSplit split(keep, psi.n_qubits());
  const Eigen::Index dk = Eigen::Index{1} << split.keep.size();
  const Eigen::Index dt = psi.dim() / dk;
  Matrix m = Matrix::Zero(dk, dt);
  for (Eigen::Index i = 0; i < psi.dim(); ++i) m(split.kept_index(i), split.traced_index(i)) = psi[i];
  return m * m.adjoint();
}

/// Half the trace norm of the difference.
inline double trace_distance(const Matrix& a, const Matrix& b) {
  const Matrix diff = a - b;
  const Matrix h = 0.5 * (diff + diff.adjoint());
  return 0.5 *
         Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().sum();
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw Error("trace distance: dimension mismatch");
  return trace_distance(a.matrix(), b.matrix());
}

}  // namespace unravel

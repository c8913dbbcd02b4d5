#pragma once

#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "unravel/qstate.hpp"

namespace unravel {

/// One decay channel: rate * D[jump].
struct Channel {
  double rate;
  Operator jump;
};

/// Hamiltonian (hbar = 1) plus independent decay channels.
class LindbladModel {
 public:
  LindbladModel(Operator hamiltonian, std::vector<Channel> channels,
                const Tolerances& tol = {})
      : hamiltonian_(std::move(hamiltonian)), channels_(std::move(channels)) {
    if (!hamiltonian_.is_hermitian(tol.hermitian)) throw Error("hamiltonian is not Hermitian");
    for (const Channel& c : channels_) {
      if (!(c.rate >= 0.0)) throw Error("channel rate must be >= 0");
      if (c.jump.n_qubits() != hamiltonian_.n_qubits()) {
        throw Error("jump operator dimension does not match the model");
      }
    }
  }

  int n_qubits() const { return hamiltonian_.n_qubits(); }
  Eigen::Index dim() const { return hamiltonian_.dim(); }
  const Operator& hamiltonian() const { return hamiltonian_; }
  std::span<const Channel> channels() const { return channels_; }

 private:
  Operator hamiltonian_;
  std::vector<Channel> channels_;
};

namespace detail {

inline void check_rate(double gamma) {
  if (!(gamma >= 0.0)) throw Error("decay rate must be >= 0, got " + std::to_string(gamma));
}

inline std::vector<Channel> local_channels(int n_qubits, double gamma,
                                           std::initializer_list<Operator> ops) {
  std::vector<Channel> out;
  for (int k = 0; k < n_qubits; ++k) {
    for (const Operator& op : ops) out.push_back({gamma, embed(op, k, n_qubits)});
  }
  return out;
}

}  // namespace detail

/// Amplitude damping on every qubit: J_k = sigma_minus^(k), rate gamma.
inline LindbladModel zero_temperature(int n_qubits, double gamma) {
  detail::check_rate(gamma);
  return LindbladModel(Operator::zero(n_qubits),
                       detail::local_channels(n_qubits, gamma, {pauli::minus()}));
}

/// Pure dephasing: J_k = sigma_plus^(k) sigma_minus^(k) = |1><1|_k.
inline LindbladModel dephasing(int n_qubits, double gamma) {
  detail::check_rate(gamma);
  return LindbladModel(Operator::zero(n_qubits),
                       detail::local_channels(n_qubits, gamma, {pauli::excited_projector()}));
}

/// Infinite-temperature bath: per qubit sigma_minus then sigma_plus, both at rate gamma.
inline LindbladModel infinite_temperature(int n_qubits, double gamma) {
  detail::check_rate(gamma);
  return LindbladModel(Operator::zero(n_qubits),
                       detail::local_channels(n_qubits, gamma, {pauli::minus(), pauli::plus()}));
}

/// Generator of a CNOT (control qubit 0, target qubit 1) completed at t_gate:
/// H = pi/(2 t_gate) |1><1| (x) (I - sigma_x). exp(-i H t_gate) = CNOT because
/// (I - sigma_x) has eigenvalues 0 and 2, giving phases 1 and e^{-i pi} = -1.
inline Operator cnot_generator(double t_gate) {
  if (!(t_gate > 0.0)) throw Error("gate time must be > 0");
  const Operator block = pauli::identity() - pauli::x();
  return Complex(std::numbers::pi / (2.0 * t_gate)) * tensor(pauli::excited_projector(), block);
}

/// Two qubits driven by the CNOT generator under concurrent dephasing(2, gamma).
inline LindbladModel cnot_drive(double t_gate, double gamma) {
  detail::check_rate(gamma);
  return LindbladModel(cnot_generator(t_gate),
                       detail::local_channels(2, gamma, {pauli::excited_projector()}));
}

}  // namespace unravel

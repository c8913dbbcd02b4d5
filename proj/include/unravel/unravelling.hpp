#pragma once

// Unravelling transformations of a set of jump operators.
//
// Given channels (G, J_i), a unitary mixing U and shifts mu_k, the transformed
// channels are the pairs
//     L_{k,+-} = (mu_k 1 +- sum_i U_ki J_i) / sqrt(2),   each with rate G.
// The +- pairing cancels the cross terms mu* J rho and rho J^+ mu, so the
// dissipator (and thus the averaged dynamics) is unchanged.

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "unravel/models.hpp"
#include "unravel/unitary.hpp"

namespace unravel {

class Unravelling {
 public:
  Unravelling(Matrix mixing, std::vector<Complex> shifts, double unitarity_tol = 1e-10)
      : mixing_(std::move(mixing)), shifts_(std::move(shifts)) {
    if (mixing_.rows() != mixing_.cols()) throw Error("mixing matrix must be square");
    if (static_cast<std::size_t>(mixing_.rows()) != shifts_.size()) {
      throw Error("mixing matrix size and shift count differ");
    }
    if (mixing_.rows() > 0 && unitarity_defect(mixing_) > unitarity_tol) {
      throw Error("mixing matrix is not unitary");
    }
  }

  /// U = I, mu = 0: the original jump operators (split into +- halves).
  static Unravelling identity(std::size_t n) {
    return Unravelling(Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)),
                       std::vector<Complex>(n, 0.0));
  }

  static Unravelling with_shift(Matrix mixing, Complex shift) {
    const auto n = static_cast<std::size_t>(mixing.rows());
    return Unravelling(std::move(mixing), std::vector<Complex>(n, shift));
  }

  std::size_t size() const { return shifts_.size(); }
  const Matrix& mixing() const { return mixing_; }
  std::span<const Complex> shifts() const { return shifts_; }

 private:
  Matrix mixing_;
  std::vector<Complex> shifts_;
};

/// 2N channels ordered (L_{0,+}, L_{0,-}, L_{1,+}, ...).
struct TransformedChannels {
  std::vector<Channel> channels;
};

inline TransformedChannels transform(const Unravelling& u, const LindbladModel& model) {
  const auto chans = model.channels();
  if (u.size() != chans.size()) {
    throw Error("unravelling has " + std::to_string(u.size()) + " channels, model has " +
                std::to_string(chans.size()));
  }
  const bool mixes = !u.mixing().isIdentity(1e-14);
  for (const Channel& c : chans) {
    if (mixes && c.rate != chans.front().rate) throw Error("mixing requires equal rates");
  }
  const Matrix id = Matrix::Identity(model.dim(), model.dim());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  TransformedChannels out;
  out.channels.reserve(2 * chans.size());
  for (std::size_t k = 0; k < chans.size(); ++k) {
    Matrix mixed = Matrix::Zero(model.dim(), model.dim());
    for (std::size_t i = 0; i < chans.size(); ++i) {
      mixed += u.mixing()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) * chans[i].jump.matrix();
    }
    const Matrix shift = u.shifts()[k] * id;
    out.channels.push_back({chans[k].rate, Operator(inv_sqrt2 * (shift + mixed))});
    out.channels.push_back({chans[k].rate, Operator(inv_sqrt2 * (shift - mixed))});
  }
  return out;
}

/// Matrix of rho -> sum_c (G_c/2)(2 L rho L^+ - L^+L rho - rho L^+L) acting on
/// column-stacked vec(rho): vec(A rho B) = (B^T (x) A) vec(rho).
inline Matrix reconstruct_dissipator(std::span<const Channel> channels, int n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  const Matrix id = Matrix::Identity(d, d);
  Matrix super = Matrix::Zero(d * d, d * d);
  for (const Channel& c : channels) {
    const Matrix& l = c.jump.matrix();
    if (l.rows() != d) throw Error("reconstruct_dissipator: dimension mismatch");
    const Matrix ldl = l.adjoint() * l;
    super += c.rate * Eigen::kroneckerProduct(l.conjugate(), l).eval();
    super -= (0.5 * c.rate) * Eigen::kroneckerProduct(id, ldl).eval();
    super -= (0.5 * c.rate) * Eigen::kroneckerProduct(ldl.transpose(), id).eval();
  }
  return super;
}

enum class ShiftLayout {
  per_channel,  // one complex shift per channel: N^2 + 2N parameters
  shared,       // one complex shift for all channels: N^2 + 2 parameters
};

inline std::size_t unravelling_parameter_count(std::size_t n, ShiftLayout layout = ShiftLayout::per_channel) {
  return n * n + (layout == ShiftLayout::shared ? 2 : 2 * n);
}

/// Unconstrained real vector -> (U = exp(A), mu). Layout: N^2 generator
/// entries (see unitary.hpp), then (Re mu_k, Im mu_k) pairs.
inline Unravelling parametrize(std::span<const double> params, std::size_t n,
                               ShiftLayout layout = ShiftLayout::per_channel) {
  if (params.size() != unravelling_parameter_count(n, layout)) {
    throw Error("parametrize: expected " + std::to_string(unravelling_parameter_count(n, layout)) +
                " parameters, got " + std::to_string(params.size()));
  }
  const int ni = static_cast<int>(n);
  Matrix u = unitary_from_parameters(params.first(n * n), ni);
  const auto tail = params.subspan(n * n);
  std::vector<Complex> mu(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t off = layout == ShiftLayout::shared ? 0 : 2 * k;
    mu[k] = Complex(tail[off], tail[off + 1]);
  }
  return Unravelling(std::move(u), std::move(mu));
}

}  // namespace unravel

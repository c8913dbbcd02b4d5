#pragma once

// Entanglement measures: two-qubit concurrence and entanglement of formation
// (pure and mixed), multipartite concurrence C_N of pure states, and a
// numerical convex-roof estimator used as an independent oracle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unravel/nelder_mead.hpp"
#include "unravel/parallel.hpp"
#include "unravel/qstate.hpp"
#include "unravel/random.hpp"
#include "unravel/unitary.hpp"

namespace unravel {

namespace detail {

inline void require_two_qubits(int n, const char* what) {
  if (n != 2) throw Error(std::string(what) + " is defined for two qubits, got " + std::to_string(n));
}

inline void require_normalized(const StateVector& psi, double tol) {
  if (!psi.is_normalized(tol)) throw Error("measure expects a normalized state");
}

}  // namespace detail

/// |<psi| sigma_y (x) sigma_y |psi*>| = 2 |a d - b c| for a|00>+b|01>+c|10>+d|11>.
inline double concurrence_pure(const StateVector& psi, double norm_tol = 1e-8) {
  detail::require_two_qubits(psi.n_qubits(), "concurrence");
  detail::require_normalized(psi, norm_tol);
  return std::min(1.0, 2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]));
}

/// Shannon entropy in bits of a two-outcome distribution (p, 1-p).
inline double binary_entropy(double p) {
  auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  return term(p) + term(1.0 - p);
}

inline double eof_from_concurrence(double c) {
  constexpr double slack = 1e-12;
  if (!(c >= -slack && c <= 1.0 + slack)) {
    throw Error("concurrence " + std::to_string(c) + " outside [0, 1]");
  }
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

/// Wootters: max(0, l1 - l2 - l3 - l4), l_i the decreasing square roots of the
/// eigenvalues of rho (sy x sy) rho* (sy x sy). With rho = W W^+ these are the
/// singular values of W^T (sy x sy) W; unlike sqrt(rho) rho~ sqrt(rho), the
/// near-zero part of the spectrum then enters only at second order.
inline double wootters_concurrence(const DensityMatrix& rho) {
  detail::require_two_qubits(rho.n_qubits(), "Wootters concurrence");
  const Matrix yy = tensor(pauli::y(), pauli::y()).matrix();
  const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho.matrix() + rho.matrix().adjoint()));
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix w = es.eigenvectors() * root.cast<Complex>().asDiagonal();
  const Eigen::VectorXd lam = Eigen::JacobiSVD<Matrix>(w.transpose() * yy * w).singularValues();  // decreasing
  return std::clamp(lam(0) - lam(1) - lam(2) - lam(3), 0.0, 1.0);
}

/// C_N = 2^{1-N/2} sqrt((2^N - 2) - sum_gamma tr rho_gamma^2), summing over all
/// nonempty proper subsets gamma of the qubits.
inline double multipartite_concurrence_pure(const StateVector& psi, double norm_tol = 1e-8) {
  const int n = psi.n_qubits();
  if (n < 2) throw Error("multipartite concurrence needs at least two qubits");
  detail::require_normalized(psi, norm_tol);
  const std::uint32_t full = (1u << n) - 1;
  double purity_sum = 0.0;
  std::vector<int> keep;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    keep.clear();
    for (int q = 0; q < n; ++q) {
      if (mask & (1u << q)) keep.push_back(q);
    }
    const Matrix red = reduced_density(psi, keep);
    purity_sum += red.cwiseAbs2().sum();  // tr(rho^2) for Hermitian rho
  }
  const double inner = std::max(0.0, static_cast<double>(full - 1) - purity_sum);
  return std::pow(2.0, 1.0 - 0.5 * n) * std::sqrt(inner);
}

enum class MeasureKind { concurrence, entanglement_of_formation, multipartite_concurrence };

/// A pure-state entanglement measure with an optional closed-form mixed extension.
class Measure {
 public:
  constexpr explicit Measure(MeasureKind kind) : kind_(kind) {}

  static constexpr Measure concurrence() { return Measure(MeasureKind::concurrence); }
  static constexpr Measure eof() { return Measure(MeasureKind::entanglement_of_formation); }
  static constexpr Measure multipartite_concurrence() {
    return Measure(MeasureKind::multipartite_concurrence);
  }

  static Measure from_name(std::string_view name) {
    if (name == "concurrence") return concurrence();
    if (name == "eof") return eof();
    if (name == "cn") return multipartite_concurrence();
    throw Error("unknown measure '" + std::string(name) + "'");
  }

  constexpr MeasureKind kind() const { return kind_; }

  std::string_view name() const {
    switch (kind_) {
      case MeasureKind::concurrence: return "concurrence";
      case MeasureKind::entanglement_of_formation: return "eof";
      case MeasureKind::multipartite_concurrence: return "cn";
    }
    return "?";
  }

  bool supports(int n_qubits) const {
    return kind_ == MeasureKind::multipartite_concurrence ? n_qubits >= 2 : n_qubits == 2;
  }

  double operator()(const StateVector& psi) const {
    switch (kind_) {
      case MeasureKind::concurrence: return concurrence_pure(psi);
      case MeasureKind::entanglement_of_formation: return eof_from_concurrence(concurrence_pure(psi));
      case MeasureKind::multipartite_concurrence: return multipartite_concurrence_pure(psi);
    }
    return 0.0;
  }

  bool has_mixed_closed_form(int n_qubits) const {
    return n_qubits == 2 && kind_ != MeasureKind::multipartite_concurrence;
  }

  /// Closed-form mixed-state value; throws ReferenceUnavailable where none exists.
  double mixed(const DensityMatrix& rho) const {
    if (!has_mixed_closed_form(rho.n_qubits())) {
      throw ReferenceUnavailable("reference unavailable: no closed-form mixed-state " +
                                 std::string(name()) + " for " + std::to_string(rho.n_qubits()) +
                                 " qubits; use convex_roof_estimate");
    }
    const double c = wootters_concurrence(rho);
    return kind_ == MeasureKind::concurrence ? c : eof_from_concurrence(c);
  }

  friend bool operator==(Measure a, Measure b) { return a.kind_ == b.kind_; }

 private:
  MeasureKind kind_;
};

/// rho = sum_i p_i |psi_i><psi_i|.
struct Decomposition {
  std::vector<double> weights;
  std::vector<StateVector> states;

  Matrix density() const {
    Matrix rho = Matrix::Zero(states.front().dim(), states.front().dim());
    for (std::size_t i = 0; i < states.size(); ++i) {
      rho += weights[i] * states[i].amplitudes() * states[i].amplitudes().adjoint();
    }
    return rho;
  }

  double average(const Measure& m) const {
    double s = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) s += weights[i] * m(states[i]);
    return s;
  }
};

struct ConvexRoofOptions {
  std::size_t size = 0;  // decomposition size m; 0 means 2 * rank
  std::size_t restarts = 32;
  std::size_t evaluations_per_restart = 4000;
  std::uint64_t seed = 0x5eed;
  unsigned workers = 1;
  double rank_tolerance = 1e-10;
};

struct ConvexRoofResult {
  double value;
  Decomposition decomposition;
};

namespace detail {

// Eigen-split of rho: columns w_i = sqrt(lambda_i) e_i for the nonzero spectrum.
inline Matrix weighted_eigenvectors(const DensityMatrix& rho, double rank_tol) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho.matrix() + rho.matrix().adjoint()));
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
    if (es.eigenvalues()(i) > rank_tol) cols.push_back(i);
  }
  Matrix w(rho.dim(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    w.col(static_cast<Eigen::Index>(j)) = std::sqrt(es.eigenvalues()(cols[j])) * es.eigenvectors().col(cols[j]);
  }
  return w;
}

// Decomposition generated by the left isometry formed from the first r
// columns of a unitary V (m x m): |psi~_j> = sum_i V_ji w_i.
inline Decomposition decomposition_from_isometry(const Matrix& w, const Matrix& v) {
  Decomposition d;
  const Matrix unnormalized = w * v.leftCols(w.cols()).transpose();  // column j = psi~_j
  for (Eigen::Index j = 0; j < unnormalized.cols(); ++j) {
    const double p = unnormalized.col(j).squaredNorm();
    if (p <= 1e-300) continue;
    d.weights.push_back(p);
    d.states.emplace_back(Vector(unnormalized.col(j) / std::sqrt(p)));
  }
  return d;
}

}  // namespace detail

/// Numerical upper estimate of the convex roof inf sum p_i M(psi_i) over
/// decompositions of size m. Restart 0 starts from the eigen-decomposition;
/// the rest from random parameter vectors. Each restart runs repeated
/// simplex searches until one stops improving.
inline ConvexRoofResult convex_roof_estimate(const DensityMatrix& rho, const Measure& measure,
                                             const ConvexRoofOptions& opt = {}) {
  if (!measure.supports(rho.n_qubits())) throw Error("measure does not support this system size");
  const Matrix w = detail::weighted_eigenvectors(rho, opt.rank_tolerance);
  const auto rank = static_cast<std::size_t>(w.cols());
  const std::size_t m = opt.size == 0 ? 2 * rank : opt.size;
  if (m < rank) {
    throw Error("decomposition size " + std::to_string(m) + " below rank " + std::to_string(rank));
  }
  const int mi = static_cast<int>(m);

  auto objective = [&](const std::vector<double>& x) {
    return detail::decomposition_from_isometry(w, unitary_from_parameters(x, mi)).average(measure);
  };

  const std::size_t restarts = std::max<std::size_t>(1, opt.restarts);
  std::vector<NelderMeadResult> results(restarts);
  parallel_for(restarts, opt.workers, [&](std::size_t r) {
    std::vector<double> x(generator_parameter_count(mi), 0.0);
    if (r > 0) {
      Rng rng = make_stream(opt.seed, r);
      for (double& v : x) v = uniform(rng, -std::numbers::pi, std::numbers::pi);
    }
    NelderMeadResult best{x, objective(x), 1};
    while (best.evaluations < opt.evaluations_per_restart) {
      NelderMeadOptions nm;
      nm.initial_step = 0.3;
      nm.max_evaluations = opt.evaluations_per_restart - best.evaluations;
      NelderMeadResult next = nelder_mead(objective, best.x, nm);
      const std::size_t used = best.evaluations + next.evaluations;
      const bool improved = next.value < best.value - 1e-12;
      if (next.value < best.value) best = std::move(next);
      best.evaluations = used;
      if (!improved) break;
    }
    results[r] = std::move(best);
  });

  const auto best = std::min_element(results.begin(), results.end(), [](const auto& a, const auto& b) {
    return a.value < b.value;
  });
  Decomposition d = detail::decomposition_from_isometry(w, unitary_from_parameters(best->x, mi));
  return {d.average(measure), std::move(d)};
}

}  // namespace unravel

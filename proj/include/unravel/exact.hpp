#pragma once

// Deterministic density-matrix propagation under the Lindblad equation with a
// fixed-step classical Runge-Kutta scheme.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unravel/curve.hpp"
#include "unravel/entmeas.hpp"
#include "unravel/models.hpp"
#include "unravel/time_grid.hpp"

namespace unravel {

/// rho_dot = -i[H, rho] + sum_k (G_k/2)(2 J rho J^+ - J^+J rho - rho J^+J).
inline Matrix lindblad_apply(const LindbladModel& model, const Matrix& rho) {
  if (rho.rows() != model.dim() || rho.cols() != model.dim()) {
    throw Error("lindblad_apply: dimension mismatch");
  }
  const Matrix& h = model.hamiltonian().matrix();
  Matrix out = -kI * (h * rho - rho * h);
  for (const Channel& c : model.channels()) {
    const Matrix& j = c.jump.matrix();
    const Matrix jdj = j.adjoint() * j;
    out += (0.5 * c.rate) * (2.0 * j * rho * j.adjoint() - jdj * rho - rho * jdj);
  }
  return out;
}

inline Matrix lindblad_apply(const LindbladModel& model, const DensityMatrix& rho) {
  return lindblad_apply(model, rho.matrix());
}

/// Precomputed generator in the form rho_dot = -i(K rho - rho K^+) + sum G J rho J^+,
/// with K = H - (i/2) sum G J^+J.
class LindbladGenerator {
 public:
  explicit LindbladGenerator(const LindbladModel& model) {
    k_ = model.hamiltonian().matrix();
    for (const Channel& c : model.channels()) {
      const Matrix& j = c.jump.matrix();
      k_ -= (0.5 * c.rate) * kI * (j.adjoint() * j);
      jumps_.push_back(std::sqrt(c.rate) * j);
    }
  }

  Matrix operator()(const Matrix& rho) const {
    Matrix out = -kI * (k_ * rho);
    out += out.adjoint().eval();
    for (const Matrix& j : jumps_) out.noalias() += j * rho * j.adjoint();
    return out;
  }

 private:
  Matrix k_;
  std::vector<Matrix> jumps_;
};

struct DensitySample {
  double time;
  DensityMatrix rho;
};

struct PropagationResult {
  std::vector<DensitySample> samples;
  std::size_t renormalizations = 0;  // steps where trace drift exceeded 1e-12
};

inline PropagationResult evolve_density(const LindbladModel& model, const DensityMatrix& rho0,
                                        double t_final, double dt,
                                        std::span<const double> sample_times) {
  if (rho0.dim() != model.dim()) throw Error("evolve_density: dimension mismatch");
  const TimeGrid grid(dt, t_final, sample_times);
  const LindbladGenerator f(model);
  PropagationResult out;
  Matrix rho = rho0.matrix();
  std::size_t next = 0;
  for (std::size_t s = 0; s <= grid.steps; ++s) {
    while (next < grid.sample_steps.size() && grid.sample_steps[next] == s) {
      out.samples.push_back({grid.time_at(s), DensityMatrix(rho)});
      ++next;
    }
    if (s == grid.steps) break;
    const Matrix k1 = f(rho);
    const Matrix k2 = f(rho + (0.5 * dt) * k1);
    const Matrix k3 = f(rho + (0.5 * dt) * k2);
    const Matrix k4 = f(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!rho.allFinite()) {
      throw NumericalError("evolve_density: non-finite entries at t = " + std::to_string(grid.time_at(s + 1)));
    }
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > 1e-12) {
      rho /= tr;
      ++out.renormalizations;
    }
  }
  return out;
}

inline PropagationResult evolve_density(const LindbladModel& model, const DensityMatrix& rho0,
                                        double t_final, double dt,
                                        std::initializer_list<double> sample_times) {
  return evolve_density(model, rho0, t_final, dt,
                        std::span<const double>(sample_times.begin(), sample_times.size()));
}

struct ExactOptions {
  double dt = 1e-3;
  /// When set, mixed values without a closed form come from convex_roof_estimate.
  std::optional<ConvexRoofOptions> convex_roof;
};

/// M(rho(t_i)) on the requested grid. Deterministic points carry n = 0.
inline MeasureCurve exact_measure_curve(const LindbladModel& model, const DensityMatrix& rho0,
                                        const Measure& measure, std::span<const double> times,
                                        const ExactOptions& opt = {}) {
  if (!measure.supports(model.n_qubits())) throw Error("measure does not support this system size");
  if (!measure.has_mixed_closed_form(model.n_qubits()) && !opt.convex_roof) {
    throw ReferenceUnavailable("reference unavailable: no exact mixed-state " + std::string(measure.name()) +
                               " for " + std::to_string(model.n_qubits()) +
                               " qubits; enable the convex-roof oracle");
  }
  const double t_final = times.empty() ? 0.0 : times.back();
  const PropagationResult prop = evolve_density(model, rho0, t_final, opt.dt, times);
  MeasureCurve curve;
  curve.points.resize(prop.samples.size());
  auto value = [&](const DensityMatrix& rho) {
    return measure.has_mixed_closed_form(rho.n_qubits()) ? measure.mixed(rho)
                                                          : convex_roof_estimate(rho, measure, *opt.convex_roof).value;
  };
  for (std::size_t i = 0; i < prop.samples.size(); ++i) {
    curve.points[i] = {prop.samples[i].time, value(prop.samples[i].rho), 0.0, 0};
  }
  return curve;
}

}  // namespace unravel

#pragma once

// Quantum-jump Monte Carlo wave-function engine.
//
// One step of length dt from a normalized |psi>:
//   dp_c = G_c dt <psi|L_c^+ L_c|psi>,  one uniform u per step;
//   u in channel c's cumulative bin -> |psi> = L_c|psi> / ||.||   (jump c)
//   otherwise                       -> |psi> = (1 - i H_eff dt)|psi> / ||.||
// with H_eff = H - (i/2) sum_c G_c L_c^+ L_c. Since <psi|H|psi> is real,
// sum_c dp_c = -2 dt Im <psi|H_eff|psi>, so a step costs one matrix-vector
// product unless a jump is drawn.
//
// Trajectory i draws from make_stream(seed, i) and nothing else, so results
// do not depend on the number of workers or their scheduling.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "unravel/curve.hpp"
#include "unravel/entmeas.hpp"
#include "unravel/models.hpp"
#include "unravel/parallel.hpp"
#include "unravel/random.hpp"
#include "unravel/time_grid.hpp"
#include "unravel/unravelling.hpp"

namespace unravel {

struct TrajectoryConfig {
  double dt = 1e-3;
  double t_final = 3.0;
  std::uint64_t seed = 1;
  std::size_t n_trajectories = 1000;
  std::vector<double> sample_times;
  unsigned workers = 0;  // 0 = all hardware threads
  double max_jump_probability = 0.1;
};

struct TrajectorySample {
  double time;
  StateVector state;
  std::size_t jump_count;
  std::optional<std::size_t> last_jump_channel;
};

struct StepResult {
  StateVector state;
  std::optional<std::size_t> jump;
};

inline Operator effective_hamiltonian(const Operator& hamiltonian, std::span<const Channel> channels) {
  Matrix h = hamiltonian.matrix();
  for (const Channel& c : channels) {
    if (c.jump.dim() != hamiltonian.dim()) throw Error("effective_hamiltonian: dimension mismatch");
    h -= (0.5 * c.rate) * kI * (c.jump.matrix().adjoint() * c.jump.matrix());
  }
  return Operator(std::move(h));
}

namespace detail {

inline constexpr std::size_t kNoJump = static_cast<std::size_t>(-1);

[[noreturn]] inline void step_too_large(double total, double limit) {
  throw NumericalError("time step too large: total jump probability " + std::to_string(total) +
                       " exceeds " + std::to_string(limit));
}

template <int D>
class JumpKernel {
 public:
  using Vec = Eigen::Matrix<Complex, D, 1>;
  using Mat = Eigen::Matrix<Complex, D, D>;

  JumpKernel(const Operator& hamiltonian, std::span<const Channel> channels)
      : h_eff_(effective_hamiltonian(hamiltonian, channels).matrix()) {
    for (const Channel& c : channels) {
      jumps_.push_back(Mat(std::sqrt(c.rate) * c.jump.matrix()));
    }
  }

  Eigen::Index dim() const { return h_eff_.rows(); }

  /// Advances psi in place; returns the channel index or kNoJump.
  std::size_t advance(Vec& psi, Vec& work, double dt, double u, double max_p) const {
    work.noalias() = h_eff_ * psi;
    const double total = -2.0 * dt * psi.dot(work).imag();  // dot conjugates psi
    if (total > max_p) step_too_large(total, max_p);
    if (u < total) {
      double cumulative = 0.0;
      for (std::size_t c = 0; c < jumps_.size(); ++c) {
        work.noalias() = jumps_[c] * psi;
        const double p = dt * work.squaredNorm();
        cumulative += p;
        if (u < cumulative && p > 0.0) {
          psi = work / std::sqrt(work.squaredNorm());
          return c;
        }
      }
      // u fell in the rounding gap between the two ways of summing; treat as no jump.
      work.noalias() = h_eff_ * psi;
    }
    psi -= Complex(0.0, dt) * work;
    psi /= std::sqrt(psi.squaredNorm());
    return kNoJump;
  }

 private:
  Mat h_eff_;
  std::vector<Mat> jumps_;
};

using AnyKernel = std::variant<JumpKernel<2>, JumpKernel<4>, JumpKernel<8>, JumpKernel<16>,
                               JumpKernel<Eigen::Dynamic>>;

inline AnyKernel make_kernel(const Operator& h, std::span<const Channel> channels) {
  switch (h.dim()) {
    case 2: return JumpKernel<2>(h, channels);
    case 4: return JumpKernel<4>(h, channels);
    case 8: return JumpKernel<8>(h, channels);
    case 16: return JumpKernel<16>(h, channels);
    default: return JumpKernel<Eigen::Dynamic>(h, channels);
  }
}

}  // namespace detail

/// Hamiltonian plus the channels that define the monitoring scheme.
class JumpProcess {
 public:
  JumpProcess(Operator hamiltonian, std::vector<Channel> channels)
      : hamiltonian_(std::move(hamiltonian)), channels_(std::move(channels)),
        kernel_(detail::make_kernel(hamiltonian_, channels_)) {
    if (!hamiltonian_.is_hermitian()) throw Error("jump process: hamiltonian is not Hermitian");
    for (const Channel& c : channels_) {
      if (c.jump.dim() != hamiltonian_.dim()) throw Error("jump process: dimension mismatch");
      if (!(c.rate >= 0.0)) throw Error("jump process: negative rate");
    }
  }

  /// Original jump operators of the model.
  explicit JumpProcess(const LindbladModel& model)
      : JumpProcess(model.hamiltonian(), {model.channels().begin(), model.channels().end()}) {}

  /// Transformed channels L_{k,+-} of an unravelling.
  JumpProcess(const LindbladModel& model, const Unravelling& u)
      : JumpProcess(model.hamiltonian(), transform(u, model).channels) {}

  int n_qubits() const { return hamiltonian_.n_qubits(); }
  Eigen::Index dim() const { return hamiltonian_.dim(); }
  const Operator& hamiltonian() const { return hamiltonian_; }
  std::span<const Channel> channels() const { return channels_; }

  /// Runs one trajectory on `grid`, calling on_sample(sample_index, state,
  /// jump_count, last_channel) at each sample step before stepping.
  template <class OnSample>
  void simulate(const StateVector& psi0, const TimeGrid& grid, Rng& rng, double max_jump_probability,
                OnSample&& on_sample) const {
    if (psi0.dim() != dim()) throw Error("initial state dimension mismatch");
    if (!psi0.is_normalized(1e-8)) throw Error("initial state must be normalized");
    std::visit(
        [&](const auto& kernel) {
          using K = std::decay_t<decltype(kernel)>;
          typename K::Vec psi = psi0.amplitudes();
          typename K::Vec work = psi;
          std::size_t jumps = 0;
          std::optional<std::size_t> last;
          std::size_t next = 0;
          for (std::size_t s = 0;; ++s) {
            while (next < grid.sample_steps.size() && grid.sample_steps[next] == s) {
              on_sample(next, Vector(psi), jumps, last);
              ++next;
            }
            if (s >= grid.steps) break;
            const std::size_t c = kernel.advance(psi, work, grid.dt, uniform01(rng), max_jump_probability);
            if (c != detail::kNoJump) {
              ++jumps;
              last = c;
            }
          }
        },
        kernel_);
  }

  StepResult step(const StateVector& psi, double dt, Rng& rng, double max_jump_probability = 0.1) const {
    if (psi.dim() != dim()) throw Error("state dimension mismatch");
    return std::visit(
        [&](const auto& kernel) {
          using K = std::decay_t<decltype(kernel)>;
          typename K::Vec v = psi.amplitudes();
          typename K::Vec work = v;
          const std::size_t c = kernel.advance(v, work, dt, uniform01(rng), max_jump_probability);
          return StepResult{StateVector(Vector(v)),
                            c == detail::kNoJump ? std::nullopt : std::optional<std::size_t>(c)};
        },
        kernel_);
  }

 private:
  Operator hamiltonian_;
  std::vector<Channel> channels_;
  detail::AnyKernel kernel_;
};

/// Single step with the given Hamiltonian and channels.
inline StepResult step(const StateVector& psi, const Operator& hamiltonian, std::span<const Channel> channels,
                       double dt, Rng& rng, double max_jump_probability = 0.1) {
  if (!psi.is_normalized(1e-8)) throw Error("step expects a normalized state");
  return JumpProcess(hamiltonian, {channels.begin(), channels.end()}).step(psi, dt, rng, max_jump_probability);
}

inline std::vector<TrajectorySample> run_trajectory(const JumpProcess& process, const StateVector& psi0,
                                                    const TrajectoryConfig& config, std::size_t index) {
  const TimeGrid grid(config.dt, config.t_final, config.sample_times);
  Rng rng = make_stream(config.seed, index);
  std::vector<TrajectorySample> out;
  out.reserve(grid.sample_steps.size());
  process.simulate(psi0, grid, rng, config.max_jump_probability,
                   [&](std::size_t i, Vector state, std::size_t jumps, std::optional<std::size_t> last) {
                     out.push_back({config.sample_times[i], StateVector(std::move(state)), jumps, last});
                   });
  return out;
}

/// Runs config.n_trajectories trajectories in parallel and returns
/// per_trajectory(index, states at sample times) for each, in index order.
template <class PerTrajectory>
auto for_each_trajectory(const JumpProcess& process, const StateVector& psi0, const TrajectoryConfig& config,
                         PerTrajectory&& per_trajectory) {
  if (config.n_trajectories == 0) throw Error("need at least one trajectory");
  const TimeGrid grid(config.dt, config.t_final, config.sample_times);
  using Result = std::invoke_result_t<PerTrajectory&, std::size_t, std::vector<StateVector>&&>;
  std::vector<std::optional<Result>> results(config.n_trajectories);
  parallel_for(config.n_trajectories, config.workers, [&](std::size_t i) {
    Rng rng = make_stream(config.seed, i);
    std::vector<StateVector> states;
    states.reserve(grid.sample_steps.size());
    process.simulate(psi0, grid, rng, config.max_jump_probability,
                     [&](std::size_t, Vector state, std::size_t, std::optional<std::size_t>) {
                       states.emplace_back(std::move(state));
                     });
    results[i].emplace(per_trajectory(i, std::move(states)));
  });
  std::vector<Result> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

/// (1/n) sum_i |psi_i><psi_i|: the decomposition weighted by relative abundance.
inline DensityMatrix ensemble_density(std::span<const StateVector> states) {
  if (states.empty()) throw Error("ensemble_density: empty ensemble");
  Matrix rho = Matrix::Zero(states.front().dim(), states.front().dim());
  for (const StateVector& s : states) {
    if (s.dim() != rho.rows()) throw Error("ensemble_density: dimension mismatch");
    rho.noalias() += s.amplitudes() * s.amplitudes().adjoint();
  }
  rho /= static_cast<double>(states.size());
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

/// Ensemble density matrices at each configured sample time.
inline std::vector<DensityMatrix> ensemble_densities(const JumpProcess& process, const StateVector& psi0,
                                                     const TrajectoryConfig& config) {
  const auto per = for_each_trajectory(process, psi0, config,
                                       [](std::size_t, std::vector<StateVector>&& s) { return std::move(s); });
  std::vector<DensityMatrix> out;
  for (std::size_t t = 0; t < config.sample_times.size(); ++t) {
    std::vector<StateVector> column;
    column.reserve(per.size());
    for (const auto& traj : per) column.push_back(traj[t]);
    out.push_back(ensemble_density(column));
  }
  return out;
}

/// Mean and standard error (sample std / sqrt(n)) per column of values[trajectory][time].
inline MeasureCurve summarize(std::span<const std::vector<double>> values, std::span<const double> times) {
  MeasureCurve curve;
  const std::size_t n = values.size();
  for (std::size_t t = 0; t < times.size(); ++t) {
    // Shifted by the first sample so that a constant column gives exactly (x, 0).
    const double shift = n > 0 ? values.front()[t] : 0.0;
    double sum = 0.0;
    for (const auto& v : values) sum += v[t] - shift;
    const double offset = sum / static_cast<double>(n);
    const double mean = shift + offset;
    double ss = 0.0;
    for (const auto& v : values) ss += (v[t] - shift - offset) * (v[t] - shift - offset);
    const double se = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    curve.points.push_back({times[t], mean, se, n});
  }
  return curve;
}

/// Trajectory average of M(psi_i(t)) with standard errors.
inline MeasureCurve average_measure_curve(const JumpProcess& process, const StateVector& psi0,
                                          const Measure& measure, const TrajectoryConfig& config) {
  if (!measure.supports(process.n_qubits())) throw Error("measure does not support this system size");
  const auto values = for_each_trajectory(process, psi0, config, [&](std::size_t, std::vector<StateVector>&& states) {
    std::vector<double> v;
    v.reserve(states.size());
    for (const StateVector& s : states) v.push_back(measure(s));
    return v;
  });
  return summarize(values, config.sample_times);
}

}  // namespace unravel

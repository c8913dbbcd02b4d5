#pragma once

// Search for optimal unravellings.
//
// Stage 1 minimizes the deterministic one-step average
//     M(dt) = (1 - sum_c dp_c) M(psi_nojump) + sum_c dp_c M(psi_c)
// over the (U, mu) family. Stage 2 scores candidate unravellings by the
// sup-norm distance between their trajectory-averaged curve and the exact
// mixed-state curve.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unravel/curve.hpp"
#include "unravel/entmeas.hpp"
#include "unravel/exact.hpp"
#include "unravel/mcwf.hpp"
#include "unravel/nelder_mead.hpp"
#include "unravel/unravelling.hpp"

namespace unravel {

/// Exact enumeration of the one-step branches from psi0 (no sampling).
inline double short_time_average(const Measure& measure, const StateVector& psi0, const Operator& hamiltonian,
                                 std::span<const Channel> channels, double dt, double max_jump_probability = 0.1) {
  if (!psi0.is_normalized(1e-8)) throw Error("short_time_average expects a normalized state");
  if (!(dt > 0.0)) throw Error("dt must be > 0");
  double total = 0.0;
  double jumped = 0.0;
  for (const Channel& c : channels) {
    const StateVector branch = c.jump.apply(psi0);
    const double p = c.rate * dt * branch.norm_squared();
    if (p <= 0.0) continue;
    total += p;
    jumped += p * measure(normalize(branch).state);
  }
  if (total > max_jump_probability) detail::step_too_large(total, max_jump_probability);
  const Operator h_eff = effective_hamiltonian(hamiltonian, channels);
  const StateVector drift(psi0.amplitudes() - Complex(0.0, dt) * (h_eff.matrix() * psi0.amplitudes()));
  return (1.0 - total) * measure(normalize(drift).state) + jumped;
}

inline double short_time_average(const Measure& measure, const StateVector& psi0, const LindbladModel& model,
                                 const Unravelling& u, double dt, double max_jump_probability = 0.1) {
  return short_time_average(measure, psi0, model.hamiltonian(), transform(u, model).channels, dt,
                            max_jump_probability);
}

struct OptimizeOptions {
  std::size_t budget = 64 * 500;  // total objective evaluations
  std::size_t evaluations_per_restart = 500;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  ShiftLayout layout = ShiftLayout::per_channel;
  /// When set, shifts are held fixed and only U is searched (N^2 parameters).
  std::optional<std::vector<Complex>> fixed_shifts;
  double initial_step = 0.5;
  double shift_range = 2.0;  // random restarts draw Re/Im mu uniformly in [-range, range]
  double tie_tolerance = 1e-12;
  double max_jump_probability = 0.1;
};

struct CandidateScore {
  std::size_t index;
  double short_time_value;
  bool scored;  // passed the short-time filter and was simulated
  double curve_deviation;
  double max_std_error;
};

struct OptimizationReport {
  Unravelling best;
  std::vector<double> parameters;  // empty for refine_full_curve
  double short_time_value;
  double baseline_value;  // U = I, mu = 0
  std::optional<double> curve_deviation;
  std::size_t evaluations = 0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> best_candidate;
  std::vector<CandidateScore> candidates;
};

namespace detail {

inline Unravelling decode(std::span<const double> x, std::size_t n, const OptimizeOptions& opt) {
  if (opt.fixed_shifts) {
    return Unravelling(unitary_from_parameters(x, static_cast<int>(n)), *opt.fixed_shifts);
  }
  return parametrize(x, n, opt.layout);
}

}  // namespace detail

/// Random-restart simplex search of short_time_average over parametrize-space.
/// Restart 0 starts at the zero vector (U = I, mu = 0, or the fixed shifts).
/// Guard violations count as +infinity. Among results within tie_tolerance of
/// the best value the smallest parameter norm wins.
inline OptimizationReport optimize_short_time(const Measure& measure, const StateVector& psi0,
                                              const LindbladModel& model, double dt,
                                              const OptimizeOptions& opt = {}) {
  if (opt.budget < 1) throw Error("budget must be >= 1");
  const std::size_t n = model.channels().size();
  if (opt.fixed_shifts && opt.fixed_shifts->size() != n) throw Error("fixed shifts: wrong count");
  const std::size_t dim = opt.fixed_shifts ? n * n : unravelling_parameter_count(n, opt.layout);

  auto objective = [&](const std::vector<double>& x) {
    try {
      return short_time_average(measure, psi0, model, detail::decode(x, n, opt), dt, opt.max_jump_probability);
    } catch (const NumericalError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const std::size_t per = std::max<std::size_t>(1, opt.evaluations_per_restart);
  const std::size_t restarts = (opt.budget + per - 1) / per;
  std::vector<NelderMeadResult> results(restarts);
  parallel_for(restarts, opt.workers, [&](std::size_t r) {
    std::vector<double> x(dim, 0.0);
    if (r > 0) {
      Rng rng = make_stream(opt.seed, r);
      const std::size_t gen = n * n;
      for (std::size_t i = 0; i < dim; ++i) {
        x[i] = i < gen ? uniform(rng, -std::numbers::pi, std::numbers::pi)
                       : uniform(rng, -opt.shift_range, opt.shift_range);
      }
    }
    NelderMeadOptions nm;
    nm.initial_step = opt.initial_step;
    nm.max_evaluations = std::min(per, opt.budget - r * per);
    results[r] = nelder_mead(objective, std::move(x), nm);
  });

  const std::vector<double> zero(dim, 0.0);
  const double baseline = objective(zero);
  std::size_t evaluations = 1;
  // The baseline point itself competes, so the result never exceeds it.
  std::vector<std::pair<double, std::vector<double>>> pool{{baseline, zero}};
  for (auto& r : results) {
    evaluations += r.evaluations;
    pool.emplace_back(r.value, std::move(r.x));
  }
  double best_value = std::numeric_limits<double>::infinity();
  for (const auto& [v, x] : pool) best_value = std::min(best_value, v);
  const double tie = opt.tie_tolerance * std::max(1.0, std::abs(best_value));
  const std::vector<double>* chosen = nullptr;
  double chosen_value = best_value, chosen_norm = std::numeric_limits<double>::infinity();
  for (const auto& [v, x] : pool) {
    if (!(v <= best_value + tie)) continue;
    double norm = 0.0;
    for (double xi : x) norm += xi * xi;
    if (norm < chosen_norm) {
      chosen = &x;
      chosen_norm = norm;
      chosen_value = v;
    }
  }
  if (chosen == nullptr) chosen = &pool.front().second;  // all infeasible

  return OptimizationReport{detail::decode(*chosen, n, opt), *chosen, chosen_value, baseline,
                            std::nullopt, evaluations, opt.seed, std::nullopt, {}};
}

struct RefineOptions {
  TrajectoryConfig trajectories;
  double short_time_dt = 1e-3;
  /// Candidates whose short-time value exceeds the best candidate's by more
  /// than this are not simulated.
  double short_time_tolerance = 1e-3;
  ExactOptions exact;
};

/// Scores each short-time-acceptable candidate by sup_t |M_avg(t) - reference(t)|.
inline OptimizationReport refine_full_curve(const Measure& measure, const StateVector& psi0,
                                            const LindbladModel& model, std::span<const Unravelling> candidates,
                                            const MeasureCurve& reference, const RefineOptions& opt) {
  if (candidates.empty()) throw Error("refine_full_curve: no candidates");
  if (reference.size() != opt.trajectories.sample_times.size()) {
    throw Error("refine_full_curve: reference grid does not match the sample times");
  }
  std::vector<CandidateScore> scores;
  double best_short = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double v = std::numeric_limits<double>::infinity();
    try {
      v = short_time_average(measure, psi0, model, candidates[i], opt.short_time_dt,
                             opt.trajectories.max_jump_probability);
    } catch (const NumericalError&) {
    }
    scores.push_back({i, v, false, std::numeric_limits<double>::infinity(), 0.0});
    best_short = std::min(best_short, v);
  }
  std::optional<std::size_t> best;
  for (CandidateScore& s : scores) {
    if (!(s.short_time_value <= best_short + opt.short_time_tolerance)) continue;
    const MeasureCurve curve =
        average_measure_curve(JumpProcess(model, candidates[s.index]), psi0, measure, opt.trajectories);
    const CompareReport cmp = compare(curve, reference);
    s.scored = true;
    s.curve_deviation = cmp.sup_deviation;
    for (const CurvePoint& p : curve.points) s.max_std_error = std::max(s.max_std_error, p.std_error);
    if (!best || s.curve_deviation < scores[*best].curve_deviation) best = s.index;
  }
  const double baseline =
      short_time_average(measure, psi0, model, Unravelling::identity(model.channels().size()), opt.short_time_dt,
                         opt.trajectories.max_jump_probability);
  return OptimizationReport{candidates[*best],
                            {},
                            scores[*best].short_time_value,
                            baseline,
                            scores[*best].curve_deviation,
                            candidates.size(),
                            opt.trajectories.seed,
                            best,
                            std::move(scores)};
}

/// As above with the reference from exact_measure_curve (throws
/// ReferenceUnavailable when no exact evaluator exists).
inline OptimizationReport refine_full_curve(const Measure& measure, const StateVector& psi0,
                                            const LindbladModel& model, std::span<const Unravelling> candidates,
                                            const RefineOptions& opt) {
  const MeasureCurve reference = exact_measure_curve(model, DensityMatrix::pure(psi0), measure,
                                                     opt.trajectories.sample_times, opt.exact);
  return refine_full_curve(measure, psi0, model, candidates, reference, opt);
}

}  // namespace unravel

#pragma once

// Named experiment settings: initial state, model, measure, three pinned
// unravellings (optimal, alternative, non-optimal baseline) and trajectory
// defaults. Times are in units of 1/gamma for gamma = 1.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unravel/curve.hpp"
#include "unravel/entmeas.hpp"
#include "unravel/exact.hpp"
#include "unravel/mcwf.hpp"
#include "unravel/models.hpp"
#include "unravel/unravelling.hpp"

namespace unravel {

struct NamedUnravelling {
  std::string name;
  std::string role;                  // optimal | alternative | baseline
  std::optional<Unravelling> scheme;  // nullopt: the model's own jump operators
};

inline JumpProcess make_process(const LindbladModel& model, const NamedUnravelling& u) {
  return u.scheme ? JumpProcess(model, *u.scheme) : JumpProcess(model);
}

enum class ReferenceKind {
  closed_form_mixed,  // Wootters concurrence / EoF
  ghz_dephasing,      // (sqrt 6 / 2) exp(-3 gamma t / 2)
  w_zero_temperature,  // (2 / sqrt 3) exp(-gamma t)
};

struct Scenario {
  std::string name;
  std::string description;
  StateVector psi0;
  LindbladModel model;
  Measure measure;
  std::vector<NamedUnravelling> unravellings;
  TrajectoryConfig config;
  double gamma = 1.0;
  double sample_every = 0.05;
  double default_dt = 1e-3;
  ReferenceKind reference = ReferenceKind::closed_form_mixed;
  std::optional<double> gate_time;
};

struct ScenarioOverrides {
  std::optional<double> gamma;
  std::optional<std::size_t> n_trajectories;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<double> t_final;
  std::optional<double> sample_every;
  std::optional<std::vector<double>> psi3_amplitudes;  // psi00, psi01, psi10 (renormalized)
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"bell-zero-temp", "bell-infinite-temp", "bell-dephasing",
                                              "cnot-dephasing", "ghz-dephasing",      "w-zero-temp",
                                              "psi3-zero-temp"};
  return names;
}

namespace detail {

inline StateVector from_amplitudes(std::initializer_list<std::pair<std::string_view, Complex>> terms) {
  const int n = static_cast<int>(terms.begin()->first.size());
  Vector v = Vector::Zero(Eigen::Index{1} << n);
  for (const auto& [bits, a] : terms) v += a * StateVector::basis(bits).amplitudes();
  return normalize(StateVector(std::move(v))).state;
}

inline Matrix matrix_from(std::initializer_list<std::initializer_list<Complex>> rows, double scale) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (Complex x : row) m(i, j++) = scale * x;
    ++i;
  }
  return m;
}

inline NamedUnravelling original(std::string name, std::string role) {
  return {std::move(name), std::move(role), std::nullopt};
}

inline NamedUnravelling shifted(std::string name, std::string role, Matrix u, std::vector<Complex> mu) {
  return {std::move(name), std::move(role), Unravelling(std::move(u), std::move(mu))};
}

inline NamedUnravelling uniform_shift(std::string name, std::string role, std::size_t n, Complex mu) {
  return shifted(std::move(name), std::move(role), Matrix::Identity(static_cast<Eigen::Index>(n),
                                                                    static_cast<Eigen::Index>(n)),
                 std::vector<Complex>(n, mu));
}

}  // namespace detail

inline Scenario make_scenario(std::string_view name, const ScenarioOverrides& o = {}) {
  using detail::from_amplitudes;
  using detail::matrix_from;
  const double gamma = o.gamma.value_or(1.0);
  const double h = 1.0 / std::sqrt(2.0);
  const Complex i1 = kI;
  const Matrix quarter_turn = matrix_from({{1, 1}, {-1, 1}}, h);
  const StateVector bell = from_amplitudes({{"00", 1.0}, {"11", 1.0}});

  std::optional<Scenario> s;
  if (name == "bell-zero-temp") {
    const Matrix u = matrix_from({{1, 1}, {-i1, i1}}, h);
    s = Scenario{std::string(name), "Bell state, zero-temperature reservoir, EoF", bell,
                 zero_temperature(2, gamma), Measure::eof(),
                 {detail::shifted("mu3", "optimal", u, {3.0, 3.0}),
                  detail::shifted("mu1", "alternative", u, {1.0, 1.0}),
                  detail::shifted("mixed-quarter-turn", "baseline", quarter_turn, {0.0, 0.0})},
                 {}};
  } else if (name == "bell-infinite-temp") {
    // Channel order: sigma-(0), sigma+(0), sigma-(1), sigma+(1).
    const Matrix had = matrix_from({{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}}, 0.5);
    s = Scenario{std::string(name), "Bell state, infinite-temperature reservoir, EoF", bell,
                 infinite_temperature(2, gamma), Measure::eof(),
                 {detail::shifted("hadamard-mu3", "optimal", had, {3.0, 3.0, 3.0 * i1, 3.0 * i1}),
                  detail::shifted("hadamard-mu1", "alternative", had, {1.0, 1.0, i1, i1}),
                  detail::original("original", "baseline")},
                 {}};
  } else if (name == "bell-dephasing") {
    s = Scenario{std::string(name), "Bell state, dephasing, concurrence", bell, dephasing(2, gamma),
                 Measure::concurrence(),
                 {detail::original("original", "optimal"), detail::uniform_shift("mu1", "alternative", 2, 1.0),
                  detail::uniform_shift("mu3i", "baseline", 2, 3.0 * i1)},
                 {}};
  } else if (name == "cnot-dephasing") {
    const double t_gate = 1.0 / (5.0 * gamma);
    s = Scenario{std::string(name), "CNOT drive on (|00>+|10>)/sqrt2 under dephasing, EoF",
                 from_amplitudes({{"00", 1.0}, {"10", 1.0}}), cnot_drive(t_gate, gamma), Measure::eof(),
                 {detail::uniform_shift("mu3", "optimal", 2, 3.0), detail::original("original", "alternative"),
                  detail::uniform_shift("mu3i", "baseline", 2, 3.0 * i1)},
                 {}};
    s->gate_time = t_gate;
    s->sample_every = 0.01;
    s->default_dt = 1e-4;  // the drive is ~16x faster than the decay
  } else if (name == "ghz-dephasing") {
    s = Scenario{std::string(name), "GHZ state, dephasing, C3",
                 from_amplitudes({{"000", 1.0}, {"111", 1.0}}), dephasing(3, gamma),
                 Measure::multipartite_concurrence(),
                 {detail::original("original", "optimal"), detail::uniform_shift("mu1", "alternative", 3, 1.0),
                  detail::uniform_shift("mu3i", "baseline", 3, 3.0 * i1)},
                 {}};
    s->reference = ReferenceKind::ghz_dephasing;
  } else if (name == "w-zero-temp") {
    s = Scenario{std::string(name), "W state, zero-temperature reservoir, C3",
                 from_amplitudes({{"001", 1.0}, {"010", 1.0}, {"100", 1.0}}), zero_temperature(3, gamma),
                 Measure::multipartite_concurrence(),
                 {detail::original("original", "optimal"), detail::uniform_shift("mu1", "alternative", 3, 1.0),
                  detail::uniform_shift("mu3i", "baseline", 3, 3.0 * i1)},
                 {}};
    s->reference = ReferenceKind::w_zero_temperature;
  } else if (name == "psi3-zero-temp") {
    std::vector<double> a = o.psi3_amplitudes.value_or(std::vector<double>{1.0, 1.0, 1.0});
    if (a.size() != 3) throw Error("psi3 amplitudes: expected 3 values (psi00, psi01, psi10)");
    s = Scenario{std::string(name), "psi00|00> + psi01|01> + psi10|10>, zero-temperature reservoir, concurrence",
                 from_amplitudes({{"00", a[0]}, {"01", a[1]}, {"10", a[2]}}), zero_temperature(2, gamma),
                 Measure::concurrence(),
                 {detail::original("original", "optimal"), detail::uniform_shift("mu1", "alternative", 2, 1.0),
                  detail::shifted("mixed-quarter-turn-mu3i", "baseline", quarter_turn, {3.0 * i1, 3.0 * i1})},
                 {}};
  } else {
    throw Error("unknown scenario '" + std::string(name) + "'");
  }

  s->gamma = gamma;
  TrajectoryConfig& c = s->config;
  c.dt = o.dt.value_or(s->default_dt);
  c.t_final = o.t_final.value_or(s->gate_time.value_or(3.0));
  c.seed = o.seed.value_or(1);
  c.n_trajectories = o.n_trajectories.value_or(s->name == "ghz-dephasing" ? 1000 : 5000);
  c.workers = o.workers.value_or(0);
  s->sample_every = o.sample_every.value_or(s->sample_every);
  if (!(c.dt > 0.0)) throw Error("dt must be > 0");
  if (!(c.t_final >= 0.0)) throw Error("t_final must be >= 0");
  if (!(s->sample_every > 0.0)) throw Error("sample spacing must be > 0");
  if (c.n_trajectories == 0) throw Error("n must be >= 1");
  c.sample_times = uniform_times(c.t_final, s->sample_every);
  TimeGrid(c.dt, c.t_final, c.sample_times);  // validates grid alignment
  return std::move(*s);
}

inline double ghz_dephasing_c3(double gamma, double t) {
  return 0.5 * std::sqrt(6.0) * std::exp(-1.5 * gamma * t);
}

/// rho(t) = p |W><W| + (1 - p) |000><000| with p = exp(-gamma t). On span{W, 000}
/// C3 is linear in the W weight, so every decomposition gives the same average.
inline double w_zero_temperature_c3(double gamma, double t) {
  return 2.0 / std::sqrt(3.0) * std::exp(-gamma * t);
}

/// Exact mixed-state measure curve on the scenario's sample grid.
inline MeasureCurve reference_curve(const Scenario& s) {
  auto closed = [&](double (*f)(double, double)) {
    MeasureCurve c;
    for (double t : s.config.sample_times) c.points.push_back({t, f(s.gamma, t), 0.0, 0});
    return c;
  };
  switch (s.reference) {
    case ReferenceKind::ghz_dephasing: return closed(ghz_dephasing_c3);
    case ReferenceKind::w_zero_temperature: return closed(w_zero_temperature_c3);
    case ReferenceKind::closed_form_mixed: break;
  }
  return exact_measure_curve(s.model, DensityMatrix::pure(s.psi0), s.measure, s.config.sample_times,
                             {s.config.dt, std::nullopt});
}

/// First sample time at which the exact curve reaches zero (the derivative
/// of an entanglement curve is discontinuous there).
inline std::optional<double> kink_time(const MeasureCurve& exact, double zero_tol = 1e-9) {
  for (const CurvePoint& p : exact.points) {
    if (p.mean <= zero_tol && p.time > 0.0) return p.time;
  }
  return std::nullopt;
}

}  // namespace unravel

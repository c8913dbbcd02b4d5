#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "unravel/error.hpp"

namespace unravel {

/// Fixed-step grid t_j = j * dt, j = 0..steps, with requested sample times
/// snapped to grid indices. Sample times must lie on the grid (to 1e-6 of a
/// step) and be sorted.
struct TimeGrid {
  double dt;
  std::size_t steps;
  std::vector<std::size_t> sample_steps;

  TimeGrid(double step, double t_final, std::span<const double> sample_times) : dt(step) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("dt must be > 0");
    if (!(t_final >= 0.0)) throw Error("t_final must be >= 0");
    steps = snap(t_final, "t_final");
    double previous = -1.0;
    for (double t : sample_times) {
      if (t < previous) throw Error("sample times must be sorted");
      previous = t;
      const std::size_t s = snap(t, "sample time");
      if (s > steps) throw Error("sample time " + std::to_string(t) + " beyond t_final");
      sample_steps.push_back(s);
    }
  }

  double time_at(std::size_t step) const { return static_cast<double>(step) * dt; }

 private:
  std::size_t snap(double t, const char* what) const {
    const double x = t / dt;
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-6) {
      throw Error(std::string(what) + " " + std::to_string(t) + " is not a multiple of dt");
    }
    return static_cast<std::size_t>(r);
  }
};

/// 0, every, 2*every, ... up to t_final inclusive.
inline std::vector<double> uniform_times(double t_final, double every) {
  if (!(every > 0.0)) throw Error("sample spacing must be > 0");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor(t_final / every + 1e-9));
  // Rounded so that e.g. 3 * 0.05 is stored as the double nearest 0.15.
  for (std::size_t i = 0; i <= count; ++i) out.push_back(std::round(static_cast<double>(i) * every * 1e12) / 1e12);
  return out;
}

}  // namespace unravel

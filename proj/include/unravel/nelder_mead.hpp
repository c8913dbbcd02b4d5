#pragma once

// Derivative-free simplex minimizer with dimension-adaptive coefficients
// (reflection 1, expansion 1 + 2/n, contraction 0.75 - 1/(2n), shrink 1 - 1/n).
// Non-finite objective values are treated as +infinity, which lets callers
// express infeasible regions by throwing away the point.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace unravel {

struct NelderMeadOptions {
  double initial_step = 0.5;
  std::size_t max_evaluations = 500;
  double f_tolerance = 1e-13;
  double x_tolerance = 1e-10;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
};

template <class Objective>
NelderMeadResult nelder_mead(Objective&& objective, std::vector<double> x0,
                             const NelderMeadOptions& opt = {}) {
  const std::size_t n = x0.size();
  NelderMeadResult out;
  auto eval = [&](const std::vector<double>& x) {
    ++out.evaluations;
    const double v = objective(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  if (n == 0 || opt.max_evaluations <= 1) {
    out.value = opt.max_evaluations == 0 ? out.value : eval(x0);
    out.x = std::move(x0);
    return out;
  }

  const double dn = static_cast<double>(n);
  const double alpha = 1.0, beta = 1.0 + 2.0 / dn;
  const double gamma = 0.75 - 0.5 / dn, delta = 1.0 - 1.0 / dn;

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fv(n + 1);
  fv[0] = eval(x0);
  for (std::size_t i = 0; i < n && out.evaluations < opt.max_evaluations; ++i) {
    simplex[i + 1][i] += opt.initial_step;
    fv[i + 1] = eval(simplex[i + 1]);
  }
  if (out.evaluations < n + 1) {
    // Budget ran out while building the simplex; report the best vertex seen.
    const std::size_t seen = out.evaluations;
    const auto best = std::min_element(fv.begin(), fv.begin() + static_cast<std::ptrdiff_t>(seen)) - fv.begin();
    out.x = simplex[best];
    out.value = fv[best];
    return out;
  }

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  auto along = [&](double t, const std::vector<double>& worst, std::vector<double>& dst) {
    for (std::size_t j = 0; j < n; ++j) dst[j] = centroid[j] + t * (worst[j] - centroid[j]);
  };

  while (out.evaluations < opt.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) spread = std::max(spread, std::abs(simplex[i][j] - simplex[best][j]));
    }
    if (std::abs(fv[worst] - fv[best]) <= opt.f_tolerance && spread <= opt.x_tolerance) break;
    if (spread <= opt.x_tolerance) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / dn;
    }

    along(-alpha, simplex[worst], trial);
    const double fr = eval(trial);
    if (fr < fv[best]) {
      along(-alpha * beta, simplex[worst], trial2);
      const double fe = out.evaluations < opt.max_evaluations ? eval(trial2) : fr + 1.0;
      if (fe < fr) {
        simplex[worst] = trial2;
        fv[worst] = fe;
      } else {
        simplex[worst] = trial;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = trial;
      fv[worst] = fr;
      continue;
    }
    if (out.evaluations >= opt.max_evaluations) break;
    // Outside contraction when the reflection beat the worst point, inside otherwise.
    const bool outside = fr < fv[worst];
    along(outside ? -alpha * gamma : gamma, simplex[worst], trial2);
    const double fc = eval(trial2);
    if (fc < (outside ? fr : fv[worst])) {
      simplex[worst] = trial2;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n && out.evaluations < opt.max_evaluations; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) {
        simplex[i][j] = simplex[best][j] + delta * (simplex[i][j] - simplex[best][j]);
      }
      fv[i] = eval(simplex[i]);
    }
  }

  const auto best = std::min_element(fv.begin(), fv.end()) - fv.begin();
  out.x = simplex[best];
  out.value = fv[best];
  return out;
}

}  // namespace unravel

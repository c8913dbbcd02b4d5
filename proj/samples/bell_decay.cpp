// A Bell pair decaying into two zero-temperature baths: entanglement of
// formation of the exact state versus two trajectory averages.

#include <cmath>
#include <cstdio>

#include "unravel/exact.hpp"
#include "unravel/mcwf.hpp"
#include "unravel/unravelling.hpp"

int main() {
  using namespace unravel;

  const LindbladModel model = zero_temperature(2, 1.0);
  Vector amps = Vector::Zero(4);
  amps(0) = amps(3) = 1.0 / std::sqrt(2.0);
  const StateVector bell(amps);

  TrajectoryConfig cfg;
  cfg.n_trajectories = 2000;
  cfg.t_final = 2.0;
  cfg.sample_times = uniform_times(cfg.t_final, 0.25);

  Matrix u(2, 2);
  u << 1.0, 1.0, -kI, kI;
  u /= std::sqrt(2.0);
  const Unravelling shifted(u, {3.0, 3.0});

  const Measure eof = Measure::eof();
  const MeasureCurve exact = exact_measure_curve(model, DensityMatrix::pure(bell), eof, cfg.sample_times);
  const MeasureCurve plain = average_measure_curve(JumpProcess(model), bell, eof, cfg);
  const MeasureCurve mixed = average_measure_curve(JumpProcess(model, shifted), bell, eof, cfg);

  std::printf("  t     exact    sigma-  (mu+-UJ)/sqrt2, mu=3\n");
  for (std::size_t i = 0; i < exact.size(); ++i) {
    std::printf("%5.2f  %.4f   %.4f   %.4f +- %.4f\n", exact[i].time, exact[i].mean, plain[i].mean, mixed[i].mean,
                mixed[i].std_error);
  }
}

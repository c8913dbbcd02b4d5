// unravel: run, optimize and compare quantum-jump unravelling scenarios.
//
//   unravel list
//   unravel run <scenario> [--gamma X] [--n N] [--dt X] [--seed S] [--out DIR]
//   unravel optimize <scenario> [--budget B] [--refine]
//   unravel compare A.csv B.csv [--out FILE]
//
// Every option may also come from a flat key = value file given by --config;
// command-line values win. Exit codes: 0 ok, 1 usage error, 2 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "unravel/harness.hpp"
#include "unravel/optim.hpp"

namespace {

using namespace unravel;

struct Options {
  std::optional<double> gamma;
  std::optional<std::size_t> n;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<double> t_final;
  std::optional<double> sample_every;
  std::vector<double> psi3;
  std::string out;
  std::size_t budget = 64 * 500;
  std::string layout = "per-channel";
  double short_time_dt = 1e-3;
  bool refine = false;
};

ScenarioOverrides overrides_from(const Options& o) {
  ScenarioOverrides s;
  s.gamma = o.gamma;
  s.n_trajectories = o.n;
  s.dt = o.dt;
  s.seed = o.seed;
  s.workers = o.workers;
  s.t_final = o.t_final;
  s.sample_every = o.sample_every;
  if (!o.psi3.empty()) s.psi3_amplitudes = o.psi3;
  return s;
}

void print_unravelling(std::ostream& os, const Unravelling& u) {
  os << "  |U_ki|:\n";
  for (Eigen::Index k = 0; k < u.mixing().rows(); ++k) {
    os << "   ";
    for (Eigen::Index i = 0; i < u.mixing().cols(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), " %.4f", std::abs(u.mixing()(k, i)));
      os << buf;
    }
    os << '\n';
  }
  os << "  mu_k:";
  for (Complex z : u.shifts()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), " (%.4f%+.4fi, |mu| %.4f)", z.real(), z.imag(), std::abs(z));
    os << buf;
  }
  os << '\n';
}

int cmd_list() {
  for (const std::string& name : scenario_names()) {
    const Scenario s = make_scenario(name);
    std::cout << name << "  " << s.description << "\n   ";
    for (const NamedUnravelling& u : s.unravellings) std::cout << ' ' << u.name << " (" << u.role << ')';
    std::cout << '\n';
  }
  return 0;
}

int cmd_run(const std::string& name, const Options& o) {
  const std::string out = o.out.empty() ? "out/" + name : o.out;
  const ScenarioResult r = run_scenario(name, overrides_from(o), out);
  std::printf("%s: n=%zu dt=%g seed=%llu config %s\n", name.c_str(), r.scenario.config.n_trajectories,
              r.scenario.config.dt, static_cast<unsigned long long>(r.scenario.config.seed), r.config_hash.c_str());
  for (const UnravellingRun& run : r.runs) {
    std::printf("  %-24s %-11s sup|dev| %.4f at t=%.2f  max excess %+.4f  max|z| %.2f\n",
                run.unravelling.name.c_str(), run.unravelling.role.c_str(), run.vs_exact.sup_deviation,
                run.vs_exact.sup_time, run.vs_exact.max_signed_excess, run.vs_exact.max_abs_z);
  }
  if (r.kink) std::printf("  exact curve reaches zero at t=%.2f\n", *r.kink);
  std::printf("  wrote %s\n", out.c_str());
  return 0;
}

int cmd_optimize(const std::string& name, const Options& o) {
  const Scenario s = make_scenario(name, overrides_from(o));
  OptimizeOptions opt;
  opt.budget = o.budget;
  opt.seed = s.config.seed;
  opt.workers = s.config.workers;
  if (o.layout == "shared") {
    opt.layout = ShiftLayout::shared;
  } else if (o.layout != "per-channel") {
    throw Error("layout must be per-channel or shared");
  }
  OptimizationReport rep = optimize_short_time(s.measure, s.psi0, s.model, o.short_time_dt, opt);
  std::printf("%s: short-time %s over %zu evaluations (seed %llu, dt %g)\n", name.c_str(),
              std::string(s.measure.name()).c_str(), rep.evaluations,
              static_cast<unsigned long long>(rep.seed), o.short_time_dt);
  std::printf("  best %.10f   original jumps %.10f   M(psi0) %.10f\n", rep.short_time_value, rep.baseline_value,
              s.measure(s.psi0));
  print_unravelling(std::cout, rep.best);

  if (o.refine) {
    std::vector<Unravelling> candidates{rep.best};
    std::vector<std::string> labels{"optimized"};
    for (const NamedUnravelling& u : s.unravellings) {
      candidates.push_back(u.scheme ? *u.scheme : Unravelling::identity(s.model.channels().size()));
      labels.push_back(u.name);
    }
    RefineOptions ro;
    ro.trajectories = s.config;
    ro.short_time_dt = o.short_time_dt;
    const MeasureCurve reference = reference_curve(s);
    const OptimizationReport ref = refine_full_curve(s.measure, s.psi0, s.model, candidates, reference, ro);
    std::printf("  refinement over %zu candidates (n=%zu):\n", candidates.size(), s.config.n_trajectories);
    for (const CandidateScore& c : ref.candidates) {
      if (c.scored) {
        std::printf("    %-24s short-time %.8f  sup|dev| %.4f\n", labels[c.index].c_str(), c.short_time_value,
                    c.curve_deviation);
      } else {
        std::printf("    %-24s short-time %.8f  skipped\n", labels[c.index].c_str(), c.short_time_value);
      }
    }
    std::printf("  best: %s\n", labels[*ref.best_candidate].c_str());
  }
  return 0;
}

int cmd_compare(const std::string& a_path, const std::string& b_path, const Options& o) {
  const MeasureCurve a = read_csv(a_path);
  const MeasureCurve b = read_csv(b_path);
  const CompareReport r = compare(a, b);
  write_report(std::cout, a, r);
  if (!o.out.empty()) {
    std::ofstream os(o.out, std::ios::binary);
    if (!os) throw Error("cannot write " + o.out);
    write_report(os, a, r);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-jump unravellings of Lindblad dynamics and their entanglement averages", "unravel"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value file with option defaults");

  Options o;
  app.add_option("--gamma", o.gamma, "decay rate")->check(CLI::NonNegativeNumber);
  app.add_option("--n", o.n, "number of trajectories")->check(CLI::PositiveNumber);
  app.add_option("--dt", o.dt, "trajectory and propagation time step")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--workers", o.workers, "worker threads (0 = all cores)");
  app.add_option("--t-final", o.t_final, "final time")->check(CLI::NonNegativeNumber);
  app.add_option("--sample-every", o.sample_every, "sample spacing")->check(CLI::PositiveNumber);
  app.add_option("--psi3", o.psi3, "psi00 psi01 psi10 for psi3-zero-temp")->expected(3)->delimiter(',');
  app.add_option("--out", o.out, "output directory (run) or report file (compare)");
  app.add_option("--budget", o.budget, "objective evaluations for optimize")->check(CLI::PositiveNumber);
  app.add_option("--layout", o.layout, "shift layout: per-channel or shared");
  app.add_option("--short-time-dt", o.short_time_dt, "step for the short-time objective")
      ->check(CLI::PositiveNumber);
  app.add_flag("--refine", o.refine, "optimize: also score candidates against the exact curve");

  std::string scenario, file_a, file_b;
  CLI::App* list = app.add_subcommand("list", "list scenarios")->fallthrough();
  CLI::App* run = app.add_subcommand("run", "simulate a scenario and write CSV curves")->fallthrough();
  run->add_option("scenario", scenario)->required();
  CLI::App* optimize = app.add_subcommand("optimize", "short-time unravelling search")->fallthrough();
  optimize->add_option("scenario", scenario)->required();
  CLI::App* cmp = app.add_subcommand("compare", "compare two curve CSV files")->fallthrough();
  cmp->add_option("a", file_a)->required();
  cmp->add_option("b", file_b)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*list) return cmd_list();
    if (*run) return cmd_run(scenario, o);
    if (*optimize) return cmd_optimize(scenario, o);
    if (*cmp) return cmd_compare(file_a, file_b, o);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

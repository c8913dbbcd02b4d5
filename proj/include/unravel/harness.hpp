#pragma once

// Scenario runs: simulate every pinned unravelling, compare against the exact
// curve and write <unravelling>.csv, exact.csv and metadata.json.
//
// Needs OpenSSL (libcrypto) for the config hash and nlohmann/json.

#include <openssl/evp.h>

#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "unravel/curve.hpp"
#include "unravel/scenarios.hpp"

namespace unravel {

/// SHA-1 of "blob <size>\0<content>", as printed by `git hash-object`.
inline std::string git_blob_sha1(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw Error("sha1: cannot allocate digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, md.data(), &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error("sha1: digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

/// key=value lines describing everything that determines the CSV bodies.
/// Worker count and output directory are excluded on purpose.
inline std::string canonical_config(const Scenario& s) {
  std::ostringstream os;
  os << "scenario=" << s.name << '\n'
     << "gamma=" << format_double(s.gamma) << '\n'
     << "n=" << s.config.n_trajectories << '\n'
     << "dt=" << format_double(s.config.dt) << '\n'
     << "seed=" << s.config.seed << '\n'
     << "t_final=" << format_double(s.config.t_final) << '\n'
     << "sample_every=" << format_double(s.sample_every) << '\n'
     << "max_jump_probability=" << format_double(s.config.max_jump_probability) << '\n';
  os << "psi0=";
  for (Eigen::Index i = 0; i < s.psi0.dim(); ++i) {
    os << (i ? ";" : "") << format_double(s.psi0[i].real()) << ',' << format_double(s.psi0[i].imag());
  }
  os << '\n';
  return os.str();
}

struct UnravellingRun {
  NamedUnravelling unravelling;
  MeasureCurve curve;
  CompareReport vs_exact;
};

struct ScenarioResult {
  Scenario scenario;
  MeasureCurve exact;
  std::vector<UnravellingRun> runs;
  std::optional<double> kink;
  std::string config_hash;
};

inline ScenarioResult simulate_scenario(const Scenario& s) {
  ScenarioResult r{s, reference_curve(s), {}, std::nullopt, git_blob_sha1(canonical_config(s))};
  r.kink = kink_time(r.exact);
  for (const NamedUnravelling& u : s.unravellings) {
    MeasureCurve c = average_measure_curve(make_process(s.model, u), s.psi0, s.measure, s.config);
    CompareReport cmp = compare(c, r.exact);
    r.runs.push_back({u, std::move(c), std::move(cmp)});
  }
  return r;
}

namespace detail {

inline nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline nlohmann::json unravelling_json(const NamedUnravelling& u) {
  nlohmann::json j{{"name", u.name}, {"role", u.role}};
  if (!u.scheme) {
    j["jumps"] = "original";
    return j;
  }
  j["jumps"] = "transformed";
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < u.scheme->mixing().rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < u.scheme->mixing().cols(); ++k) row.push_back(complex_json(u.scheme->mixing()(i, k)));
    rows.push_back(std::move(row));
  }
  j["mixing"] = std::move(rows);
  nlohmann::json mu = nlohmann::json::array();
  for (Complex z : u.scheme->shifts()) mu.push_back(complex_json(z));
  j["shifts"] = std::move(mu);
  return j;
}

}  // namespace detail

inline nlohmann::json metadata_json(const ScenarioResult& r) {
  const Scenario& s = r.scenario;
  nlohmann::json j{{"scenario", s.name},
                   {"description", s.description},
                   {"measure", std::string(s.measure.name())},
                   {"gamma", s.gamma},
                   {"dt", s.config.dt},
                   {"n_trajectories", s.config.n_trajectories},
                   {"seed", s.config.seed},
                   {"t_final", s.config.t_final},
                   {"sample_every", s.sample_every},
                   {"config_hash", r.config_hash}};
  if (s.gate_time) j["gate_time"] = *s.gate_time;
  j["kink_time"] = r.kink ? nlohmann::json(*r.kink) : nlohmann::json(nullptr);
  nlohmann::json runs = nlohmann::json::array();
  for (const UnravellingRun& run : r.runs) {
    nlohmann::json u = detail::unravelling_json(run.unravelling);
    u["file"] = run.unravelling.name + ".csv";
    u["sup_deviation"] = run.vs_exact.sup_deviation;
    u["sup_time"] = run.vs_exact.sup_time;
    u["max_signed_excess"] = run.vs_exact.max_signed_excess;
    u["max_abs_z"] = run.vs_exact.max_abs_z;
    runs.push_back(std::move(u));
  }
  j["unravellings"] = std::move(runs);
  return j;
}

inline void write_outputs(const ScenarioResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_csv((dir / "exact.csv").string(), r.exact);
  for (const UnravellingRun& run : r.runs) write_csv((dir / (run.unravelling.name + ".csv")).string(), run.curve);
  std::ofstream os(dir / "metadata.json", std::ios::binary);
  if (!os) throw Error("cannot write " + (dir / "metadata.json").string());
  os << metadata_json(r).dump(2) << '\n';
}

inline ScenarioResult run_scenario(std::string_view name, const ScenarioOverrides& overrides,
                                   const std::filesystem::path& out_dir) {
  ScenarioResult r = simulate_scenario(make_scenario(name, overrides));
  write_outputs(r, out_dir);
  return r;
}

}  // namespace unravel

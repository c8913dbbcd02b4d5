#pragma once

// Sampled measure time series, CSV I/O and curve comparison.
//
// CSV layout: header `time,mean,stderr,n`, LF line endings, shortest
// round-trip decimal formatting (std::to_chars), no thousands separators.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "unravel/error.hpp"

namespace unravel {

struct CurvePoint {
  double time = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;  // trajectories behind the point; 0 for deterministic curves
};

struct MeasureCurve {
  std::vector<CurvePoint> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  const CurvePoint& operator[](std::size_t i) const { return points[i]; }
};

inline constexpr std::string_view kCurveHeader = "time,mean,stderr,n";

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& os, const MeasureCurve& curve) {
  os << kCurveHeader << '\n';
  for (const CurvePoint& p : curve.points) {
    os << format_double(p.time) << ',' << format_double(p.mean) << ','
       << format_double(p.std_error) << ',' << p.n << '\n';
  }
}

inline std::string to_csv(const MeasureCurve& curve) {
  std::ostringstream os;
  write_csv(os, curve);
  return os.str();
}

inline void write_csv(const std::string& path, const MeasureCurve& curve) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_csv(os, curve);
}

namespace detail {

inline double parse_double(std::string_view field, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw Error("csv line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace detail

inline MeasureCurve parse_csv(std::istream& is) {
  MeasureCurve curve;
  std::string line;
  if (!std::getline(is, line)) throw Error("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCurveHeader) throw Error("csv: expected header '" + std::string(kCurveHeader) + "'");
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      fields.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    fields.push_back(rest);
    if (fields.size() != 4) throw Error("csv line " + std::to_string(lineno) + ": expected 4 fields");
    CurvePoint p;
    p.time = detail::parse_double(fields[0], lineno);
    p.mean = detail::parse_double(fields[1], lineno);
    p.std_error = detail::parse_double(fields[2], lineno);
    p.n = static_cast<std::size_t>(detail::parse_double(fields[3], lineno));
    curve.points.push_back(p);
  }
  return curve;
}

inline MeasureCurve read_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  return parse_csv(is);
}

struct CompareReport {
  double sup_deviation = 0.0;    // max_i |a_i - b_i|
  double sup_time = 0.0;         // where the sup is attained
  double max_signed_excess = 0;  // max_i (a_i - b_i)
  double max_abs_z = 0.0;
  std::vector<double> z;  // (a_i - b_i) / sqrt(se_a^2 + se_b^2); 0 when |a_i - b_i| <= agree_tol
};

/// Pointwise comparison on a shared time grid.
inline CompareReport compare(const MeasureCurve& a, const MeasureCurve& b, double time_tol = 1e-9,
                             double agree_tol = 1e-12) {
  if (a.size() != b.size()) throw Error("compare: curves have different lengths");
  CompareReport r;
  r.max_signed_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i].time - b[i].time) > time_tol) {
      throw Error("compare: time grids differ at index " + std::to_string(i));
    }
    const double d = a[i].mean - b[i].mean;
    if (std::abs(d) > r.sup_deviation) {
      r.sup_deviation = std::abs(d);
      r.sup_time = a[i].time;
    }
    r.max_signed_excess = std::max(r.max_signed_excess, d);
    const double se = std::hypot(a[i].std_error, b[i].std_error);
    double z = 0.0;
    if (std::abs(d) <= agree_tol) {
      z = 0.0;
    } else if (se > 0.0) {
      z = d / se;
    } else if (d != 0.0) {
      z = d > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    }
    r.z.push_back(z);
    r.max_abs_z = std::max(r.max_abs_z, std::abs(z));
  }
  if (a.empty()) r.max_signed_excess = 0.0;
  return r;
}

inline void write_report(std::ostream& os, const MeasureCurve& a, const CompareReport& r) {
  os << "sup_deviation " << format_double(r.sup_deviation) << " at time " << format_double(r.sup_time)
     << '\n';
  os << "max_signed_excess " << format_double(r.max_signed_excess) << '\n';
  os << "max_abs_z " << format_double(r.max_abs_z) << '\n';
  os << "time,z\n";
  for (std::size_t i = 0; i < r.z.size(); ++i) {
    os << format_double(a[i].time) << ',' << format_double(r.z[i]) << '\n';
  }
}

}  // namespace unravel

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "walkersim/errors.hpp"
#include "walkersim/sim.hpp"

namespace walkersim {

inline constexpr const char* kTelemetryHeader =
    "tick,t,region,tau_cmd,velocity,position,p_muscle,valve,f_left,f_right";

namespace detail {

// Shortest round-trip representation, locale independent.
inline std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw NumericError("cannot format value");
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s, std::size_t row, const char* col) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw FormatError(row, std::string("bad number in column ") + col + ": '" +
                               std::string(s) + "'");
  return v;
}

inline std::int64_t parse_i64(std::string_view s, std::size_t row, const char* col) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw FormatError(row, std::string("bad integer in column ") + col + ": '" +
                               std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

inline void write_telemetry_csv(std::ostream& out,
                                const std::vector<TelemetryRow>& rows) {
  out << kTelemetryHeader << '\n';
  for (const auto& r : rows) {
    out << r.tick << ',' << detail::format_double(r.t) << ',' << region_name(r.region)
        << ',' << detail::format_double(r.tau_cmd) << ','
        << detail::format_double(r.velocity) << ','
        << detail::format_double(r.position) << ','
        << detail::format_double(r.p_muscle) << ',' << (r.valve ? 1 : 0) << ','
        << detail::format_double(r.f_left) << ','
        << detail::format_double(r.f_right) << '\n';
  }
}

inline void write_telemetry_csv_file(const std::string& path,
                                     const std::vector<TelemetryRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(0, "cannot open for writing: " + path);
  write_telemetry_csv(out, rows);
  if (!out) throw FormatError(0, "write failed: " + path);
}

inline std::vector<TelemetryRow> read_telemetry_csv(std::istream& in) {
  std::vector<TelemetryRow> rows;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw FormatError(0, "empty telemetry file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ++lineno;
  if (line != kTelemetryHeader)
    throw FormatError(1, "unexpected header, want '" + std::string(kTelemetryHeader) +
                             "'");
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = detail::split_csv_line(line);
    if (f.size() != 10)
      throw FormatError(lineno, "expected 10 columns, got " + std::to_string(f.size()));
    TelemetryRow r;
    r.tick = detail::parse_i64(f[0], lineno, "tick");
    r.t = detail::parse_double(f[1], lineno, "t");
    try {
      r.region = region_from_name(std::string(f[2]));
    } catch (const ConfigError&) {
      throw FormatError(lineno, "unknown region '" + std::string(f[2]) + "'");
    }
    r.tau_cmd = detail::parse_double(f[3], lineno, "tau_cmd");
    r.velocity = detail::parse_double(f[4], lineno, "velocity");
    r.position = detail::parse_double(f[5], lineno, "position");
    r.p_muscle = detail::parse_double(f[6], lineno, "p_muscle");
    if (f[7] == "0") {
      r.valve = false;
    } else if (f[7] == "1") {
      r.valve = true;
    } else {
      throw FormatError(lineno, "valve must be 0 or 1, got '" + std::string(f[7]) + "'");
    }
    r.f_left = detail::parse_double(f[8], lineno, "f_left");
    r.f_right = detail::parse_double(f[9], lineno, "f_right");
    rows.push_back(r);
  }
  if (rows.empty()) throw FormatError(lineno, "no telemetry rows");
  return rows;
}

inline std::vector<TelemetryRow> read_telemetry_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(0, "cannot open: " + path);
  return read_telemetry_csv(in);
}

// Sample spacing of a telemetry table; throws when the grid is not uniform.
inline double telemetry_dt(const std::vector<TelemetryRow>& rows) {
  if (rows.size() < 2) throw FormatError(0, "need at least 2 rows to infer dt");
  const double dt = rows[1].t - rows[0].t;
  if (!(dt > 0.0)) throw FormatError(2, "non-increasing time column");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double step = rows[i].t - rows[i - 1].t;
    if (std::fabs(step - dt) > 1e-9)
      throw FormatError(i + 2, "non-uniform sample spacing");
  }
  return dt;
}

struct ForceTraces {
  FootForceTrace left;
  FootForceTrace right;
};

inline ForceTraces extract_force_traces(const std::vector<TelemetryRow>& rows) {
  ForceTraces out;
  const double dt = telemetry_dt(rows);
  out.left.foot = Foot::kLeft;
  out.right.foot = Foot::kRight;
  out.left.dt = out.right.dt = dt;
  out.left.start_t = out.right.start_t = rows.front().t;
  out.left.force.reserve(rows.size());
  out.right.force.reserve(rows.size());
  for (const auto& r : rows) {
    out.left.force.push_back(r.f_left);
    out.right.force.push_back(r.f_right);
  }
  return out;
}

}  // namespace walkersim

#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "json_writer.hpp"

namespace fatoulab {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  const char* s = v.c_str();
  char* end = nullptr;
  double x = std::strtod(s, &end);
  if (end == s || *end != '\0') throw ConfigError("config key " + key + ": bad number '" + v + "'");
  return x;
}

inline std::int64_t parse_int(const std::string& key, const std::string& v) {
  const char* s = v.c_str();
  char* end = nullptr;
  long long x = std::strtoll(s, &end, 10);
  if (end == s || *end != '\0') {
    throw ConfigError("config key " + key + ": bad integer '" + v + "'");
  }
  return static_cast<std::int64_t>(x);
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key " + key + ": bad boolean '" + v + "'");
}

}  // namespace detail

/// Flat key=value run configuration. Serialization is canonical: fixed key
/// order, fixed number formatting, so the hash of a configuration is stable
/// across load/save round trips.
struct RunConfig {
  std::string function = "exp";
  double grid_min = 0.0;  // log r
  double grid_max = 5.0;
  int grid_points = 64;
  double epsilon = 0.1;
  double alpha = 2.0;
  std::string variant = "half_alpha";
  double seeds_log_r1 = 256.0;
  double seeds_log_s1 = 2.0;
  int seeds_n_max = 6;
  double b_target = 100.0;
  double window_x_min = -2.0;
  double window_x_max = 2.0;
  double window_y_min = -2.0;
  double window_y_max = 2.0;
  int resolution_nx = 256;
  int resolution_ny = 256;
  int budgets_max_iter = 1000;
  double budgets_escape_threshold = 50.0;
  std::int64_t budgets_max_terms = 4000000;
  std::string out_dir = "out";
  int threads = 0;
  bool deterministic = true;
  double verify_order_tol = 0.05;

  void set(const std::string& key, const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;
    if (key == "function") function = value;
    else if (key == "grid.min") grid_min = parse_double(key, value);
    else if (key == "grid.max") grid_max = parse_double(key, value);
    else if (key == "grid.points") grid_points = static_cast<int>(parse_int(key, value));
    else if (key == "epsilon") epsilon = parse_double(key, value);
    else if (key == "alpha") alpha = parse_double(key, value);
    else if (key == "variant") variant = value;
    else if (key == "seeds.log_r1") seeds_log_r1 = parse_double(key, value);
    else if (key == "seeds.log_s1") seeds_log_s1 = parse_double(key, value);
    else if (key == "seeds.n_max") seeds_n_max = static_cast<int>(parse_int(key, value));
    else if (key == "b_target") b_target = parse_double(key, value);
    else if (key == "window.x_min") window_x_min = parse_double(key, value);
    else if (key == "window.x_max") window_x_max = parse_double(key, value);
    else if (key == "window.y_min") window_y_min = parse_double(key, value);
    else if (key == "window.y_max") window_y_max = parse_double(key, value);
    else if (key == "resolution.nx") resolution_nx = static_cast<int>(parse_int(key, value));
    else if (key == "resolution.ny") resolution_ny = static_cast<int>(parse_int(key, value));
    else if (key == "budgets.max_iter") budgets_max_iter = static_cast<int>(parse_int(key, value));
    else if (key == "budgets.escape_threshold")
      budgets_escape_threshold = parse_double(key, value);
    else if (key == "budgets.max_terms") budgets_max_terms = parse_int(key, value);
    else if (key == "out_dir") out_dir = value;
    else if (key == "threads") threads = static_cast<int>(parse_int(key, value));
    else if (key == "deterministic") deterministic = parse_bool(key, value);
    else if (key == "verify.order_tol") verify_order_tol = parse_double(key, value);
    else throw ConfigError("unknown config key: " + key);
  }

  void validate() const {
    if (function.empty()) throw ConfigError("function must not be empty");
    if (grid_points < 2) throw ConfigError("grid.points must be at least 2");
    if (!(grid_max > grid_min)) throw ConfigError("grid.max must exceed grid.min");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1)");
    if (!(alpha > 1.0)) throw ConfigError("alpha must exceed 1");
    if (variant != "half_alpha" && variant != "quarter_alpha") {
      throw ConfigError("variant must be half_alpha or quarter_alpha");
    }
    if (seeds_n_max < 2 || seeds_n_max > 12) throw ConfigError("seeds.n_max must lie in [2,12]");
    if (!(b_target > 1.0)) throw ConfigError("b_target must exceed 1");
    if (!(window_x_max > window_x_min) || !(window_y_max > window_y_min)) {
      throw ConfigError("window must have positive extent");
    }
    if (resolution_nx < 8 || resolution_nx > 2048 || resolution_ny < 8 || resolution_ny > 2048) {
      throw ConfigError("resolution must lie in [8,2048]");
    }
    if (budgets_max_iter < 1) throw ConfigError("budgets.max_iter must be at least 1");
    if (budgets_max_terms < 1) throw ConfigError("budgets.max_terms must be at least 1");
    if (threads < 0) throw ConfigError("threads must be nonnegative");
    if (!(verify_order_tol > 0.0)) throw ConfigError("verify.order_tol must be positive");
  }

  static RunConfig parse(std::istream& in) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string t = detail::trim(line);
      if (t.empty() || t[0] == '#') continue;
      std::size_t eq = t.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("config line " + std::to_string(lineno) + " is not key=value: " + t);
      }
      cfg.set(detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
  }

  static RunConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse(in);
  }

  std::string serialize() const {
    std::ostringstream os;
    os << "function=" << function << '\n'
       << "grid.min=" << fmt_num(grid_min) << '\n'
       << "grid.max=" << fmt_num(grid_max) << '\n'
       << "grid.points=" << grid_points << '\n'
       << "epsilon=" << fmt_num(epsilon) << '\n'
       << "alpha=" << fmt_num(alpha) << '\n'
       << "variant=" << variant << '\n'
       << "seeds.log_r1=" << fmt_num(seeds_log_r1) << '\n'
       << "seeds.log_s1=" << fmt_num(seeds_log_s1) << '\n'
       << "seeds.n_max=" << seeds_n_max << '\n'
       << "b_target=" << fmt_num(b_target) << '\n'
       << "window.x_min=" << fmt_num(window_x_min) << '\n'
       << "window.x_max=" << fmt_num(window_x_max) << '\n'
       << "window.y_min=" << fmt_num(window_y_min) << '\n'
       << "window.y_max=" << fmt_num(window_y_max) << '\n'
       << "resolution.nx=" << resolution_nx << '\n'
       << "resolution.ny=" << resolution_ny << '\n'
       << "budgets.max_iter=" << budgets_max_iter << '\n'
       << "budgets.escape_threshold=" << fmt_num(budgets_escape_threshold) << '\n'
       << "budgets.max_terms=" << budgets_max_terms << '\n'
       << "out_dir=" << out_dir << '\n'
       << "threads=" << threads << '\n'
       << "deterministic=" << (deterministic ? "true" : "false") << '\n'
       << "verify.order_tol=" << fmt_num(verify_order_tol) << '\n';
    return os.str();
  }
};

/// FNV-1a 64 over the canonical serialization, as 16 hex digits. Keys that
/// cannot affect report content (out_dir, threads) are skipped, so runs that
/// differ only in where results land or how many workers computed them carry
/// the same hash.
inline std::string config_hash(const RunConfig& cfg) {
  std::istringstream lines(cfg.serialize());
  std::uint64_t h = 14695981039346656037ULL;
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("out_dir=", 0) == 0 || line.rfind("threads=", 0) == 0) continue;
    line += '\n';
    for (unsigned char c : line) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fatoulab

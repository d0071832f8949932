#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>

#include "cli_output.hpp"

namespace vacred_cli {

// Errors carry the process exit code and the stable short name printed on
// the machine-parsable error line.
struct CliError {
  int exit_code;
  std::string name;
  std::string message;
};

inline CliError config_error(const std::string& message) {
  return CliError{2, "CONFIG", message};
}

// Flat run configuration: file values are overridden by command-line flags,
// and the fully resolved set is echoed into every output's metadata.
struct RunConfig {
  double h0_gev = 0.769e-42;
  double omega_d0 = 0.27;
  double omega_b0 = 0.03;
  double omega_vac0 = 0.70;
  double delta = 0.06;
  double mass_gev = 0.938;
  double a_start = 0.5;
  double a_end = 2.0;
  long n_samples = 64;
  long n_traj = 10000;
  long n_steps = 1000;
  double dt = 0.01;
  std::uint64_t seed = 20260808ull;
  std::string out_path;  // empty = stdout
  std::string format = "csv";
};

namespace detail {

inline double parse_double(const std::string& text, const std::string& where) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw config_error(where + ": invalid number '" + text + "'");
  }
  return v;
}

inline long parse_long(const std::string& text, const std::string& where) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw config_error(where + ": invalid integer '" + text + "'");
  }
  return v;
}

inline std::uint64_t parse_u64(const std::string& text, const std::string& where) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0' || text.front() == '-') {
    throw config_error(where + ": invalid seed '" + text + "'");
  }
  return v;
}

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) {
    return "";
  }
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

inline void apply_key(RunConfig& cfg, const std::string& key, const std::string& value,
                      const std::string& where) {
  using namespace detail;
  if (key == "h0_gev") {
    cfg.h0_gev = parse_double(value, where);
  } else if (key == "omega_d0") {
    cfg.omega_d0 = parse_double(value, where);
  } else if (key == "omega_b0") {
    cfg.omega_b0 = parse_double(value, where);
  } else if (key == "omega_vac0") {
    cfg.omega_vac0 = parse_double(value, where);
  } else if (key == "delta") {
    cfg.delta = parse_double(value, where);
  } else if (key == "mass_gev") {
    cfg.mass_gev = parse_double(value, where);
  } else if (key == "a_start") {
    cfg.a_start = parse_double(value, where);
  } else if (key == "a_end") {
    cfg.a_end = parse_double(value, where);
  } else if (key == "n_samples") {
    cfg.n_samples = parse_long(value, where);
  } else if (key == "n_traj") {
    cfg.n_traj = parse_long(value, where);
  } else if (key == "n_steps") {
    cfg.n_steps = parse_long(value, where);
  } else if (key == "dt") {
    cfg.dt = parse_double(value, where);
  } else if (key == "seed") {
    cfg.seed = parse_u64(value, where);
  } else if (key == "out_path") {
    cfg.out_path = value;
  } else if (key == "format") {
    cfg.format = value;
  } else {
    throw config_error(where + ": unknown key '" + key + "'");
  }
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error("cannot open config file '" + path + "'");
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.resize(hash);
    }
    const std::string content = detail::trim(line);
    if (content.empty()) {
      continue;
    }
    const std::string where = path + ":" + std::to_string(line_no);
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw config_error(where + ": expected 'key = value'");
    }
    const std::string key = detail::trim(content.substr(0, eq));
    const std::string value = detail::trim(content.substr(eq + 1));
    if (key.empty()) {
      throw config_error(where + ": empty key");
    }
    apply_key(cfg, key, value, where);
  }
}

inline void validate_format(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json") {
    throw config_error("format must be 'csv' or 'json', got '" + cfg.format + "'");
  }
}

// Resolved configuration echo, fixed key order.
inline void echo_config(OutputRecord& rec, const RunConfig& cfg) {
  rec.meta("h0_gev", cfg.h0_gev);
  rec.meta("omega_d0", cfg.omega_d0);
  rec.meta("omega_b0", cfg.omega_b0);
  rec.meta("omega_vac0", cfg.omega_vac0);
  rec.meta("delta", cfg.delta);
  rec.meta("mass_gev", cfg.mass_gev);
  rec.meta("a_start", cfg.a_start);
  rec.meta("a_end", cfg.a_end);
  rec.meta("n_samples", fmt_long(cfg.n_samples));
  rec.meta("n_traj", fmt_long(cfg.n_traj));
  rec.meta("n_steps", fmt_long(cfg.n_steps));
  rec.meta("dt", cfg.dt);
  rec.meta("seed", fmt_u64(cfg.seed));
  rec.meta("out_path", cfg.out_path);
  rec.meta("format", cfg.format);
}

}  // namespace vacred_cli

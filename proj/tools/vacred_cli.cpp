// vacred command-line front end. Talks to the shared library strictly
// through the public C API; everything here is configuration, dispatch,
// and CSV/JSON serialization.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_config.hpp"
#include "cli_output.hpp"
#include "vacred.h"

namespace vacred_cli {
namespace {

using BackgroundPtr = std::unique_ptr<vacred_background, decltype(&vacred_background_free)>;
using EnsemblePtr = std::unique_ptr<vacred_ensemble, decltype(&vacred_ensemble_free)>;

void check(vacred_status status) {
  if (status != VACRED_OK) {
    throw CliError{static_cast<int>(status), vacred_last_error_name(), vacred_last_error()};
  }
}

vacred_params params_from(const RunConfig& cfg) {
  vacred_params p;
  vacred_params_defaults(&p);
  p.h0_gev = cfg.h0_gev;
  p.omega_d0 = cfg.omega_d0;
  p.omega_b0 = cfg.omega_b0;
  p.omega_vac0 = cfg.omega_vac0;
  p.delta = cfg.delta;
  return p;
}

void header_meta(OutputRecord& rec, const char* command) {
  rec.meta("tool", "vacred");
  rec.meta("version", vacred_version());
  rec.meta("rng", vacred_rng_id());
  rec.meta("command", command);
}

int emit(const OutputRecord& rec, const RunConfig& cfg, const std::string& summary,
         int exit_code = 0) {
  const std::string payload = (cfg.format == "json") ? to_json(rec) : to_csv(rec);
  if (cfg.out_path.empty()) {
    std::fwrite(payload.data(), 1, payload.size(), stdout);
    std::fflush(stdout);
    if (!summary.empty()) {
      std::fprintf(stderr, "%s\n", summary.c_str());
    }
  } else {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) {
      throw config_error("cannot open output file '" + cfg.out_path + "'");
    }
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) {
      throw config_error("failed writing output file '" + cfg.out_path + "'");
    }
    if (!summary.empty()) {
      std::fprintf(stdout, "%s\n", summary.c_str());
    }
  }
  return exit_code;
}

std::string fmt_summary(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

std::vector<std::optional<double>> rc_row(const vacred_rc_result& r, const RunConfig& cfg) {
  return {r.mass_gev,   cfg.delta,       cfg.h0_gev, r.eps_d0_gev4,
          r.vac_rate_gev5, r.vc_gev3,    r.rc_gev,   r.rc_cm,
          r.de_dt_gev2, r.t_dec_gev,     r.t_dec_s,  r.rc_closed_form_gev,
          r.cross_check_rel};
}

const std::vector<std::string> kRcColumns = {
    "mass_gev", "delta", "h0_gev", "eps_d0_gev4", "vac_rate_gev5",
    "vc_gev3",  "rc_gev", "rc_cm", "de_dt_gev2",  "t_dec_gev",
    "t_dec_s",  "rc_closed_form_gev", "cross_check_rel"};

// ---- rc-now ------------------------------------------------------------

int cmd_rc_now(const RunConfig& cfg) {
  const vacred_params p = params_from(cfg);
  vacred_rc_result r;
  check(vacred_rc_now(&p, cfg.mass_gev, &r));

  OutputRecord rec;
  header_meta(rec, "rc-now");
  echo_config(rec, cfg);
  rec.meta("order_of_magnitude", "true");
  rec.columns = kRcColumns;
  rec.rows.push_back(rc_row(r, cfg));

  return emit(rec, cfg,
              fmt_summary("R_c(t0) = %.6e cm  V_c = %.6e GeV^-3  t_dec = %.6e s  "
                          "(closed-form cross-check %.2e)",
                          r.rc_cm, r.vc_gev3, r.t_dec_s, r.cross_check_rel));
}

// ---- evolve ------------------------------------------------------------

int cmd_evolve(const RunConfig& cfg) {
  const vacred_params p = params_from(cfg);
  vacred_background* raw = nullptr;
  check(vacred_evolve(&p, cfg.a_start, cfg.a_end, cfg.n_samples, &raw));
  BackgroundPtr bg(raw, &vacred_background_free);

  const bool decay = cfg.delta > 0.0;
  double max_residual = 0.0;
  check(vacred_background_max_residual(bg.get(), &max_residual));

  OutputRecord rec;
  header_meta(rec, "evolve");
  echo_config(rec, cfg);
  rec.meta("order_of_magnitude", "true");
  rec.meta("no_decay", decay ? "false" : "true");
  rec.meta("max_continuity_residual", max_residual);
  rec.columns = {"t_gev",       "t_s",          "a",
                 "h_gev",       "eps_d_gev4",   "eps_vac_gev4",
                 "eps_vac_rate_gev5", "vc_gev3", "rc_gev", "rc_cm"};

  const std::size_t n = vacred_background_size(bg.get());
  for (std::size_t i = 0; i < n; ++i) {
    vacred_background_row row;
    check(vacred_background_get(bg.get(), i, &row));
    std::vector<std::optional<double>> cells = {
        row.t_gev,      vacred_gev_inv_to_s(row.t_gev), row.a,
        row.h_gev,      row.eps_d_gev4,                 row.eps_vac_gev4,
        row.eps_vac_rate_gev5};
    if (decay) {
      vacred_rc_result r;
      check(vacred_background_reduction(bg.get(), cfg.mass_gev, i, &r));
      cells.insert(cells.end(), {r.vc_gev3, r.rc_gev, r.rc_cm});
    } else {
      cells.insert(cells.end(), {std::nullopt, std::nullopt, std::nullopt});
    }
    rec.rows.push_back(std::move(cells));
  }

  return emit(rec, cfg,
              fmt_summary("evolved %zu samples over a in [%g, %g]  "
                          "max continuity residual %.3e",
                          n, cfg.a_start, cfg.a_end, max_residual));
}

// ---- mc-verify ----------------------------------------------------------

int cmd_mc_verify(const RunConfig& cfg, const std::string& profile_mode,
                  double vc_const, int threads) {
  if (profile_mode != "constant" && profile_mode != "from-evolve") {
    throw config_error("--vc-profile must be 'constant' or 'from-evolve', got '" +
                       profile_mode + "'");
  }
  if (!(vc_const > 0.0)) {
    throw config_error("--vc-const must be positive");
  }

  std::vector<double> edges;
  double v_ref = 0.0, t_ref = 0.0;
  if (profile_mode == "from-evolve") {
    const vacred_params p = params_from(cfg);
    vacred_background* raw = nullptr;
    check(vacred_evolve(&p, cfg.a_start, cfg.a_end, cfg.n_samples, &raw));
    BackgroundPtr bg(raw, &vacred_background_free);
    edges.resize(static_cast<std::size_t>(cfg.n_steps) + 1);
    check(vacred_background_vc_profile(bg.get(), cfg.mass_gev, cfg.n_steps, cfg.dt,
                                       edges.data(), &v_ref, &t_ref));
  }
  const double* edge_ptr = edges.empty() ? nullptr : edges.data();

  vacred_mc_config mc;
  vacred_mc_config_defaults(&mc);
  mc.n_traj = cfg.n_traj;
  mc.n_steps = cfg.n_steps;
  mc.dt = cfg.dt;
  mc.seed = cfg.seed;
  mc.threads = threads;

  vacred_ensemble* raw = nullptr;
  check(vacred_simulate(&mc, edge_ptr, edges.size(), vc_const, &raw));
  EnsemblePtr ensemble(raw, &vacred_ensemble_free);

  std::vector<double> analytic(static_cast<std::size_t>(cfg.n_steps) + 1);
  check(vacred_analytic_msv_edges(edge_ptr, edges.size(), vc_const, cfg.n_steps, cfg.dt,
                                  analytic.data()));
  vacred_verify_report report;
  check(vacred_verify(ensemble.get(), edge_ptr, edges.size(), vc_const, 3.0, &report));

  OutputRecord rec;
  header_meta(rec, "mc-verify");
  echo_config(rec, cfg);
  rec.meta("order_of_magnitude", "true");
  rec.meta("vc_profile", profile_mode);
  rec.meta("vc_const", vc_const);
  rec.meta("z_threshold", 3.0);
  if (profile_mode == "from-evolve") {
    rec.meta("profile_v_ref_gev3", v_ref);
    rec.meta("profile_t_ref_gev", t_ref);
  }
  rec.meta("slope", report.slope);
  rec.meta("slope_stderr", report.slope_stderr);
  rec.meta("z_fail_fraction", report.z_fail_fraction);
  rec.meta("n_z_fail", fmt_long(report.n_z_fail));
  const char* verdict = report.insufficient_stats ? "INSUFFICIENT_STATS"
                        : report.passed           ? "PASS"
                                                  : "FAIL";
  rec.meta("verdict", verdict);

  rec.columns = {"t", "msv", "msv_stderr", "analytic", "z"};
  const std::size_t rows = vacred_ensemble_size(ensemble.get());
  for (std::size_t k = 0; k < rows; ++k) {
    vacred_ensemble_row s;
    check(vacred_ensemble_get(ensemble.get(), k, &s));
    const double z = s.msv_stderr > 0.0 ? (s.msv - analytic[k]) / s.msv_stderr : 0.0;
    rec.rows.push_back({s.t, s.msv, s.msv_stderr, analytic[k], z});
  }

  return emit(rec, cfg,
              fmt_summary("mc-verify: slope = %.6f +- %.6f  |z|>3 fraction = %.4f  -> %s",
                          report.slope, report.slope_stderr, report.z_fail_fraction,
                          verdict),
              report.passed ? 0 : 1);
}

// ---- sweep ---------------------------------------------------------------

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::string token;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      const std::string trimmed = detail::trim(token);
      if (!trimmed.empty()) {
        grid.push_back(detail::parse_double(trimmed, "--grid"));
      }
      token.clear();
    } else {
      token += text[i];
    }
  }
  if (grid.size() < 2) {
    throw config_error("--grid needs at least 2 comma-separated points");
  }
  for (double v : grid) {
    if (!(v > 0.0)) {
      throw config_error("--grid points must be positive");
    }
  }
  return grid;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

int cmd_sweep(const RunConfig& cfg, const std::string& axis, const std::string& grid_text) {
  if (axis != "delta" && axis != "mass" && axis != "h0") {
    throw config_error("--axis must be one of delta|mass|h0, got '" + axis + "'");
  }
  const std::vector<double> grid = parse_grid(grid_text);

  OutputRecord rec;
  header_meta(rec, "sweep");
  echo_config(rec, cfg);
  rec.meta("order_of_magnitude", "true");
  rec.meta("axis", axis);
  {
    std::string joined;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (i > 0) {
        joined += ',';
      }
      joined += fmt_double(grid[i]);
    }
    rec.meta("grid", joined);
  }

  rec.columns = {"axis_value"};
  rec.columns.insert(rec.columns.end(), kRcColumns.begin(), kRcColumns.end());

  std::vector<double> rc_values, tdec_values;
  for (double value : grid) {
    RunConfig point = cfg;
    if (axis == "delta") {
      point.delta = value;
    } else if (axis == "mass") {
      point.mass_gev = value;
    } else {
      point.h0_gev = value;
    }
    const vacred_params p = params_from(point);
    vacred_rc_result r;
    check(vacred_rc_now(&p, point.mass_gev, &r));
    std::vector<std::optional<double>> cells = {value};
    const auto base = rc_row(r, point);
    cells.insert(cells.end(), base.begin(), base.end());
    rec.rows.push_back(std::move(cells));
    rc_values.push_back(r.rc_gev);
    tdec_values.push_back(r.t_dec_gev);
  }

  const double slope_rc = fit_loglog_slope(grid, rc_values);
  const double slope_tdec = fit_loglog_slope(grid, tdec_values);
  rec.meta("fit_loglog_slope_rc", slope_rc);
  rec.meta("fit_loglog_slope_tdec", slope_tdec);

  return emit(rec, cfg,
              fmt_summary("sweep over %s (%zu points): d ln R_c / d ln %s = %.12f",
                          axis.c_str(), grid.size(), axis.c_str(), slope_rc));
}

// ---- consistency -----------------------------------------------------------

int cmd_consistency(const RunConfig& cfg, double dark_mass_gev) {
  if (!(dark_mass_gev > 0.0)) {
    throw config_error("--dark-mass-gev must be positive");
  }
  const vacred_params p = params_from(cfg);
  double fraction = 0.0;
  check(vacred_budget_check(&p, cfg.mass_gev, dark_mass_gev, &fraction));

  vacred_rc_result r;
  check(vacred_rc_now(&p, cfg.mass_gev, &r));

  vacred_background* raw = nullptr;
  check(vacred_evolve(&p, cfg.a_start, cfg.a_end, cfg.n_samples, &raw));
  BackgroundPtr bg(raw, &vacred_background_free);
  double max_residual = 0.0;
  check(vacred_background_max_residual(bg.get(), &max_residual));

  const bool consistent = fraction < 1.0;

  OutputRecord rec;
  header_meta(rec, "consistency");
  echo_config(rec, cfg);
  rec.meta("order_of_magnitude", "true");
  rec.meta("dark_mass_gev", dark_mass_gev);
  rec.meta("verdict", consistent ? "PASS" : "FAIL");
  rec.columns = {"filling_fraction", "vc_gev3", "max_continuity_residual"};
  rec.rows.push_back({fraction, r.vc_gev3, max_residual});

  return emit(rec, cfg,
              fmt_summary("filling fraction = %.6e  max continuity residual = %.3e  -> %s",
                          fraction, max_residual, consistent ? "PASS" : "FAIL"),
              consistent ? 0 : 1);
}

// ---- option plumbing --------------------------------------------------------

struct CommonOpts {
  std::string config_path;
  std::optional<double> h0_gev, omega_d0, omega_b0, omega_vac0, delta, mass_gev;
  std::optional<double> a_start, a_end, dt;
  std::optional<long> n_samples, n_traj, n_steps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_path, format;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "config file with 'key = value' lines");
  cmd->add_option("--h0-gev", o.h0_gev, "Hubble rate today [GeV]");
  cmd->add_option("--omega-d0", o.omega_d0, "dark-matter fraction");
  cmd->add_option("--omega-b0", o.omega_b0, "ordinary-matter fraction");
  cmd->add_option("--omega-vac0", o.omega_vac0, "vacuum fraction");
  cmd->add_option("--delta", o.delta, "dark-matter dilution deviation exponent");
  cmd->add_option("--mass-gev", o.mass_gev, "particle mass [GeV]");
  cmd->add_option("--a-start", o.a_start, "first scale factor");
  cmd->add_option("--a-end", o.a_end, "last scale factor");
  cmd->add_option("--n-samples", o.n_samples, "background samples");
  cmd->add_option("--n-traj", o.n_traj, "Monte Carlo trajectories");
  cmd->add_option("--n-steps", o.n_steps, "Monte Carlo steps");
  cmd->add_option("--dt", o.dt, "Monte Carlo step size (scaled units)");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--out", o.out_path, "payload destination (default stdout)");
  cmd->add_option("--format", o.format, "csv|json");
}

RunConfig resolve(const CommonOpts& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) {
    load_config_file(cfg, o.config_path);
  }
  if (o.h0_gev) cfg.h0_gev = *o.h0_gev;
  if (o.omega_d0) cfg.omega_d0 = *o.omega_d0;
  if (o.omega_b0) cfg.omega_b0 = *o.omega_b0;
  if (o.omega_vac0) cfg.omega_vac0 = *o.omega_vac0;
  if (o.delta) cfg.delta = *o.delta;
  if (o.mass_gev) cfg.mass_gev = *o.mass_gev;
  if (o.a_start) cfg.a_start = *o.a_start;
  if (o.a_end) cfg.a_end = *o.a_end;
  if (o.n_samples) cfg.n_samples = *o.n_samples;
  if (o.n_traj) cfg.n_traj = *o.n_traj;
  if (o.n_steps) cfg.n_steps = *o.n_steps;
  if (o.dt) cfg.dt = *o.dt;
  if (o.seed) cfg.seed = *o.seed;
  if (o.out_path) cfg.out_path = *o.out_path;
  if (o.format) cfg.format = *o.format;
  validate_format(cfg);
  return cfg;
}

}  // namespace
}  // namespace vacred_cli

int main(int argc, char** argv) {
  using namespace vacred_cli;

  CLI::App app{"localization scales from decaying cosmological vacuum energy"};
  app.require_subcommand(1);

  CommonOpts rc_opts, evolve_opts, mc_opts, sweep_opts, cons_opts;

  CLI::App* rc = app.add_subcommand("rc-now", "characteristic length at the present epoch");
  add_common(rc, rc_opts);

  CLI::App* ev = app.add_subcommand("evolve", "integrate the background and the scale history");
  add_common(ev, evolve_opts);

  CLI::App* mc = app.add_subcommand("mc-verify", "Monte Carlo check of the energy-gain law");
  add_common(mc, mc_opts);
  std::string vc_profile_mode = "constant";
  double vc_const = 1.0;
  int threads = 0;
  mc->add_option("--vc-profile", vc_profile_mode, "constant | from-evolve");
  mc->add_option("--vc-const", vc_const, "scaled constant characteristic volume");
  mc->add_option("--threads", threads, "worker threads (0 = auto); never affects results");

  CLI::App* sw = app.add_subcommand("sweep", "parameter sweep of the present-epoch scales");
  add_common(sw, sweep_opts);
  std::string axis = "mass";
  std::string grid_text;
  sw->add_option("--axis", axis, "delta | mass | h0");
  sw->add_option("--grid", grid_text, "comma-separated positive grid points")->required();

  CLI::App* cons = app.add_subcommand("consistency", "vacuum-budget and continuity checks");
  add_common(cons, cons_opts);
  double dark_mass_gev = 0.938;
  cons->add_option("--dark-mass-gev", dark_mass_gev, "dark-matter particle mass [GeV]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);
    }
    std::fprintf(stderr, "error: CONFIG: %s\n", e.what());
    return 2;
  }

  try {
    if (rc->parsed()) {
      return cmd_rc_now(resolve(rc_opts));
    }
    if (ev->parsed()) {
      return cmd_evolve(resolve(evolve_opts));
    }
    if (mc->parsed()) {
      return cmd_mc_verify(resolve(mc_opts), vc_profile_mode, vc_const, threads);
    }
    if (sw->parsed()) {
      return cmd_sweep(resolve(sweep_opts), axis, grid_text);
    }
    if (cons->parsed()) {
      return cmd_consistency(resolve(cons_opts), dark_mass_gev);
    }
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s: %s\n", e.name.c_str(), e.message.c_str());
    return e.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: INTERNAL: %s\n", e.what());
    return 6;
  }
  return 2;
}

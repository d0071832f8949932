#include "vacred.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "cosmology.hpp"
#include "error.hpp"
#include "philox.hpp"
#include "reduction.hpp"
#include "stochastic.hpp"
#include "units.hpp"

struct vacred_background {
  vacred::CosmoParams params;
  std::vector<vacred::BackgroundState> states;
};

struct vacred_ensemble {
  vacred::EnsembleStats stats;
};

namespace {

constexpr const char* kVersion = "0.1.0";

thread_local std::string t_error_message;
thread_local const char* t_error_name = "OK";

vacred_status map_code(vacred::ErrorCode code) {
  return static_cast<vacred_status>(vacred::error_exit_code(code));
}

void clear_error() {
  t_error_message.clear();
  t_error_name = "OK";
}

vacred_status fail(vacred::ErrorCode code, const std::string& message) {
  t_error_message = message;
  t_error_name = vacred::error_code_name(code);
  return map_code(code);
}

template <typename Fn>
vacred_status guarded(Fn&& fn) {
  try {
    clear_error();
    fn();
    return VACRED_OK;
  } catch (const vacred::Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    return fail(vacred::ErrorCode::Internal, e.what());
  }
}

vacred_status require_arg(const void* p, const char* what) {
  if (p == nullptr) {
    return fail(vacred::ErrorCode::Config, std::string(what) + " must not be null");
  }
  return VACRED_OK;
}

vacred::CosmoParams to_core(const vacred_params& p) {
  vacred::CosmoParams out;
  out.h0 = vacred::Quantity(p.h0_gev, 1);
  out.omega_d0 = p.omega_d0;
  out.omega_b0 = p.omega_b0;
  out.omega_vac0 = p.omega_vac0;
  out.delta = p.delta;
  out.a0 = p.a0;
  return out;
}

void fill_rc_result(const vacred::ReductionResult& r, double vac_rate_gev5,
                    double eps_d_gev4, vacred_rc_result& out) {
  out.mass_gev = r.mass.value();
  out.eps_d0_gev4 = eps_d_gev4;
  out.vac_rate_gev5 = vac_rate_gev5;
  out.vc_gev3 = r.volume.value();
  out.rc_gev = r.length.value();
  out.rc_cm = vacred::units::length_to_cm(r.length);
  out.de_dt_gev2 = r.energy_gain_rate.value();
  out.t_dec_gev = r.decoherence_time.value();
  out.t_dec_s = vacred::units::time_to_seconds(r.decoherence_time);
  out.rc_closed_form_gev = std::numeric_limits<double>::quiet_NaN();
  out.cross_check_rel = std::numeric_limits<double>::quiet_NaN();
  out.order_of_magnitude = vacred::ReductionResult::order_of_magnitude ? 1 : 0;
}

vacred::VcProfile make_profile(const double* vc_edges, size_t n_edges, double vc_const,
                               double dt) {
  if (vc_edges == nullptr) {
    return vacred::VcProfile::constant(vc_const);
  }
  return vacred::VcProfile::sampled(std::vector<double>(vc_edges, vc_edges + n_edges),
                                    dt);
}

}  // namespace

extern "C" {

const char* vacred_version(void) { return kVersion; }

const char* vacred_rng_id(void) { return vacred::kRngId; }

const char* vacred_last_error(void) { return t_error_message.c_str(); }

const char* vacred_last_error_name(void) { return t_error_name; }

double vacred_gev_inv_to_cm(double length_gev_inv) {
  return length_gev_inv * vacred::units::kGevInvInCm;
}

double vacred_cm_to_gev_inv(double length_cm) {
  return length_cm / vacred::units::kGevInvInCm;
}

double vacred_gev_inv_to_s(double time_gev_inv) {
  return time_gev_inv * vacred::units::kGevInvInS;
}

void vacred_params_defaults(vacred_params* p) {
  if (p == nullptr) {
    return;
  }
  const vacred::CosmoParams defaults;
  p->h0_gev = defaults.h0.value();
  p->omega_d0 = defaults.omega_d0;
  p->omega_b0 = defaults.omega_b0;
  p->omega_vac0 = defaults.omega_vac0;
  p->delta = defaults.delta;
  p->a0 = defaults.a0;
}

vacred_status vacred_params_validate(const vacred_params* p) {
  if (auto s = require_arg(p, "params"); s != VACRED_OK) {
    return s;
  }
  return guarded([&] { to_core(*p).validate(); });
}

vacred_status vacred_rc_now(const vacred_params* p, double mass_gev,
                            vacred_rc_result* out) {
  if (auto s = require_arg(p, "params"); s != VACRED_OK) {
    return s;
  }
  if (auto s = require_arg(out, "result"); s != VACRED_OK) {
    return s;
  }
  return guarded([&] {
    const vacred::CosmoParams params = to_core(*p);
    const vacred::Quantity mass(mass_gev, 1);
    const vacred::RcNow now = vacred::characteristic_length_now(params, mass);
    const vacred::Quantity rate0 =
        vacred::eps_vacuum_rate(params.a0, params.h0, params);
    fill_rc_result(now.result, rate0.value(), vacred::eps_dark(params.a0, params).value(),
                   *out);
    out->rc_closed_form_gev = now.length_closed_form.value();
    out->cross_check_rel = now.cross_check_rel;
  });
}

vacred_status vacred_budget_check(const vacred_params* p, double m_ordinary_gev,
                                  double m_dark_gev, double* fraction) {
  if (auto s = require_arg(p, "params"); s != VACRED_OK) {
    return s;
  }
  if (auto s = require_arg(fraction, "fraction"); s != VACRED_OK) {
    return s;
  }
  return guarded([&] {
    *fraction = vacred::vacuum_budget_fraction(to_core(*p),
                                               vacred::Quantity(m_ordinary_gev, 1),
                                               vacred::Quantity(m_dark_gev, 1));
  });
}

vacred_status vacred_evolve(const vacred_params* p, double a_start, double a_end,
                            long n_samples, vacred_background** out) {
  if (auto s = require_arg(p, "params"); s != VACRED_OK) {
    return s;
  }
  if (auto s = require_arg(out, "handle"); s != VACRED_OK) {
    return s;
  }
  *out = nullptr;
  return guarded([&] {
    auto bg = std::make_unique<vacred_background>();
    bg->params = to_core(*p);
    bg->states = vacred::evolve_background(bg->params, a_start, a_end, n_samples);
    *out = bg.release();
  });
}

void vacred_background_free(vacred_background* bg) { delete bg; }

size_t vacred_background_size(const vacred_background* bg) {
  return bg == nullptr ? 0 : bg->states.size();
}

vacred_status vacred_background_get(const vacred_background* bg, size_t i,
                                    vacred_background_row* out) {
  if (auto s = require_arg(bg, "background"); s != VACRED_OK) {
    return s;
  }
  if (auto s = require_arg(out, "row"); s != VACRED_OK) {
    return s;
  }
  return guarded([&] {
    if (i >= bg->states.size()) {
      throw vacred::Error(vacred::ErrorCode::Config, "background row index out of range");
    }
    const vacred::BackgroundState& s = bg->states[i];
    out->t_gev = s.t.value();
    out->a = s.a;
    out->h_gev = s.hubble.value();
    out->eps_d_gev4 = s.eps_d.value();
    out->eps_vac_gev4 = s.eps_vac.value();
    out->eps_vac_rate_gev5 =
        vacred::eps_vacuum_rate(s.a, s.hubble, bg->params).value();
  });
}

vacred_status vacred_background_max_residual(const vacred_background* bg, double* out) {
  if (auto s = require_arg(bg, "background"); s != VACRED_OK) {
    return s;
  }
  if (auto s = require_arg(out, "residual"); s != VACRED_OK) {
    return s;
  }
  return guarded([&] {
    double max_residual = 0.0;
    for (const auto& state : bg->states) {
      max_residual =
          std::max(max_residual, vacred::continuity_residual(state, bg->params));
    }
    *out = max_residual;
  });
}

vacred_status vacred_background_reduction(const vacred_background* bg, double mass_gev,
                                          size_t i, vacred_rc_result* out) {
  if (auto s = require_arg(bg, "background"); s != VACRED_OK) {
    return s;
  }
  if (auto s = require_arg(out, "result"); s != VACRED_OK) {
    return s;
  }
  return guarded([&] {
    if (i >= bg->states.size()) {
      throw vacred::Error(vacred::ErrorCode::Config, "background row index out of range");
    }
    const vacred::BackgroundState& s = bg->states[i];
    const vacred::Quantity mass(mass_gev, 1);
    const vacred::ReductionResult r = vacred::reduce_at(s, bg->params, mass);
    fill_rc_result(r, vacred::eps_vacuum_rate(s.a, s.hubble, bg->params).value(),
                   s.eps_d.value(), *out);
  });
}

vacred_status vacred_background_vc_profile(const vacred_background* bg, double mass_gev,
                                           long n_steps, double dt, double* edges_out,
                                           double* v_ref_gev3_out,
                                           double* t_ref_gev_out) {
  if (auto s = require_arg(bg, "background"); s != VACRED_OK) {
    return s;
  }
  if (auto s = require_arg(edges_out, "edges"); s != VACRED_OK) {
    return s;
  }
  return guarded([&] {
    const auto history =
        vacred::rc_history(bg->states, bg->params, vacred::Quantity(mass_gev, 1));
    std::vector<double> t(history.size()), vc(history.size());
    for (std::size_t i = 0; i < history.size(); ++i) {
      t[i] = history[i].first.value();
      vc[i] = history[i].second.volume.value();
    }
    const vacred::ScaledProfile scaled = vacred::scale_history(t, vc, n_steps, dt);
    for (long k = 0; k <= n_steps; ++k) {
      edges_out[k] = scaled.profile.edge(static_cast<std::size_t>(k));
    }
    if (v_ref_gev3_out != nullptr) {
      *v_ref_gev3_out = scaled.v_ref;
    }
    if (t_ref_gev_out != nullptr) {
      *t_ref_gev_out = scaled.t_ref;
    }
  });
}

void vacred_mc_config_defaults(vacred_mc_config* cfg) {
  if (cfg == nullptr) {
    return;
  }
  const vacred::NoiseConfig defaults;
  cfg->n_traj = defaults.n_traj;
  cfg->n_steps = defaults.n_steps;
  cfg->dt = defaults.dt;
  cfg->seed = defaults.master_seed;
  cfg->threads = defaults.threads;
}

vacred_status vacred_simulate(const vacred_mc_config* cfg, const double* vc_edges,
                              size_t n_edges, double vc_const, vacred_ensemble** out) {
  if (auto s = require_arg(cfg, "config"); s != VACRED_OK) {
    return s;
  }
  if (auto s = require_arg(out, "handle"); s != VACRED_OK) {
    return s;
  }
  *out = nullptr;
  return guarded([&] {
    vacred::NoiseConfig nc;
    nc.n_traj = cfg->n_traj;
    nc.n_steps = cfg->n_steps;
    nc.dt = cfg->dt;
    nc.master_seed = cfg->seed;
    nc.threads = cfg->threads;
    nc.profile = make_profile(vc_edges, n_edges, vc_const, cfg->dt);
    auto handle = std::make_unique<vacred_ensemble>();
    handle->stats = vacred::simulate_ensemble(nc);
    *out = handle.release();
  });
}

void vacred_ensemble_free(vacred_ensemble* e) { delete e; }

size_t vacred_ensemble_size(const vacred_ensemble* e) {
  return e == nullptr ? 0 : e->stats.steps.size();
}

vacred_status vacred_ensemble_get(const vacred_ensemble* e, size_t i,
                                  vacred_ensemble_row* out) {
  if (auto s = require_arg(e, "ensemble"); s != VACRED_OK) {
    return s;
  }
  if (auto s = require_arg(out, "row"); s != VACRED_OK) {
    return s;
  }
  return guarded([&] {
    if (i >= e->stats.steps.size()) {
      throw vacred::Error(vacred::ErrorCode::Config, "ensemble row index out of range");
    }
    const vacred::StepStats& s = e->stats.steps[i];
    out->t = s.t;
    out->msv = s.msv;
    out->msv_stderr = s.msv_stderr;
    out->msv_x = s.msv_x;
    out->msv_y = s.msv_y;
    out->msv_z = s.msv_z;
    out->inc_mean = s.inc_mean;
    out->inc_stderr = s.inc_stderr;
  });
}

vacred_status vacred_analytic_msv(const double* vc_edges, size_t n_edges,
                                  double vc_const, long n_steps, double dt, double t,
                                  double* out) {
  if (auto s = require_arg(out, "result"); s != VACRED_OK) {
    return s;
  }
  (void)n_steps;
  return guarded([&] {
    *out = vacred::analytic_msv(t, make_profile(vc_edges, n_edges, vc_const, dt));
  });
}

vacred_status vacred_analytic_msv_edges(const double* vc_edges, size_t n_edges,
                                        double vc_const, long n_steps, double dt,
                                        double* out) {
  if (auto s = require_arg(out, "result"); s != VACRED_OK) {
    return s;
  }
  return guarded([&] {
    const auto values = vacred::analytic_msv_edges(
        make_profile(vc_edges, n_edges, vc_const, dt), n_steps, dt);
    std::memcpy(out, values.data(), values.size() * sizeof(double));
  });
}

vacred_status vacred_verify(const vacred_ensemble* e, const double* vc_edges,
                            size_t n_edges, double vc_const, double z_threshold,
                            vacred_verify_report* out) {
  if (auto s = require_arg(e, "ensemble"); s != VACRED_OK) {
    return s;
  }
  if (auto s = require_arg(out, "report"); s != VACRED_OK) {
    return s;
  }
  return guarded([&] {
    const vacred::VerifyReport report = vacred::verify_energy_growth(
        e->stats, make_profile(vc_edges, n_edges, vc_const, e->stats.dt), z_threshold);
    out->slope = report.slope;
    out->slope_stderr = report.slope_stderr;
    out->z_fail_fraction = report.z_fail_fraction;
    out->n_checked = report.n_checked;
    out->n_z_fail = report.n_z_fail;
    out->insufficient_stats = report.insufficient_stats ? 1 : 0;
    out->passed = report.passed ? 1 : 0;
  });
}

}  // extern "C"

#include "reduction.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace vacred {

namespace {

constexpr double kPi = std::numbers::pi;

void require_mass(const Quantity& mass, const char* what) {
  if (mass.dim() != 1) {
    throw Error(ErrorCode::Dimension, std::string(what) + ": expected dim 1, got dim " +
                                          std::to_string(mass.dim()));
  }
  if (!(mass.value() > 0.0)) {
    throw Error(ErrorCode::Domain, std::string(what) + ": mass must be positive");
  }
}

}  // namespace

Quantity characteristic_volume(const Quantity& mass, const Quantity& vac_rate) {
  require_mass(mass, "characteristic_volume");
  if (vac_rate.dim() != 5) {
    throw Error(ErrorCode::Dimension,
                "characteristic_volume: expected dim 5 rate, got dim " +
                    std::to_string(vac_rate.dim()));
  }
  if (!(vac_rate.value() < 0.0)) {
    throw Error(ErrorCode::NoDecay,
                "characteristic volume undefined when vacuum does not decay");
  }
  return (-(mass * units::newton_constant()) / (2.0 * vac_rate)).root(1, 2);
}

Quantity energy_gain_rate(const Quantity& mass, const Quantity& volume) {
  require_mass(mass, "energy_gain_rate");
  if (volume.dim() != -3 || !(volume.value() > 0.0)) {
    throw Error(ErrorCode::Domain, "energy_gain_rate: volume must be positive with dim -3");
  }
  return mass * units::newton_constant() / (2.0 * volume);
}

Quantity decoherence_time(const Quantity& mass, const Quantity& length) {
  require_mass(mass, "decoherence_time");
  if (length.dim() != -1 || !(length.value() > 0.0)) {
    throw Error(ErrorCode::Domain, "decoherence_time: length must be positive with dim -1");
  }
  return length / (units::newton_constant() * mass.pow_int(2));
}

ReductionResult reduce_at(const BackgroundState& s, const CosmoParams& p,
                          const Quantity& mass) {
  const Quantity rate = eps_vacuum_rate(s.a, s.hubble, p);
  ReductionResult r;
  r.mass = mass;
  r.volume = characteristic_volume(mass, rate);
  r.length = r.volume.root(1, 3);
  r.energy_gain_rate = energy_gain_rate(mass, r.volume);
  r.decoherence_time = decoherence_time(mass, r.length);
  return r;
}

RcNow characteristic_length_now(const CosmoParams& p, const Quantity& mass) {
  p.validate();
  require_mass(mass, "characteristic_length_now");
  if (p.no_decay()) {
    throw Error(ErrorCode::NoDecay,
                "characteristic volume undefined when vacuum does not decay");
  }

  const Quantity rate0 = eps_vacuum_rate(p.a0, p.h0, p);
  RcNow out;
  out.result.mass = mass;
  out.result.volume = characteristic_volume(mass, rate0);
  out.result.length = out.result.volume.root(1, 3);
  out.result.energy_gain_rate = energy_gain_rate(mass, out.result.volume);
  out.result.decoherence_time = decoherence_time(mass, out.result.length);

  const Quantity g = units::newton_constant();
  const Quantity numerator = 8.0 * kPi * (mass * g.pow_int(2));
  const Quantity denominator = 6.0 * p.omega_d0 * p.delta * p.h0.pow_int(3);
  out.length_closed_form = (numerator / denominator).root(1, 6);

  out.cross_check_rel = std::abs(out.length_closed_form.value() - out.result.length.value()) /
                        out.result.length.value();
  if (!(out.cross_check_rel < 1e-12)) {
    throw Error(ErrorCode::Internal,
                "closed-form / pipeline cross-check failed, relative delta " +
                    std::to_string(out.cross_check_rel));
  }
  return out;
}

std::vector<std::pair<Quantity, ReductionResult>> rc_history(
    const std::vector<BackgroundState>& trajectory, const CosmoParams& p,
    const Quantity& mass) {
  p.validate();
  require_mass(mass, "rc_history");
  if (trajectory.empty()) {
    throw Error(ErrorCode::Domain, "rc_history: empty trajectory");
  }
  if (p.no_decay()) {
    throw Error(ErrorCode::NoDecay,
                "characteristic volume undefined when vacuum does not decay");
  }
  std::vector<std::pair<Quantity, ReductionResult>> out;
  out.reserve(trajectory.size());
  for (const BackgroundState& s : trajectory) {
    out.emplace_back(s.t, reduce_at(s, p, mass));
  }
  return out;
}

double vacuum_budget_fraction(const CosmoParams& p, const Quantity& m_ordinary,
                              const Quantity& m_dark) {
  p.validate();
  require_mass(m_ordinary, "vacuum_budget_fraction");
  require_mass(m_dark, "vacuum_budget_fraction");
  if (p.no_decay()) {
    throw Error(ErrorCode::NoDecay,
                "characteristic volume undefined when vacuum does not decay");
  }
  const Quantity eps_crit = critical_density(p.h0);
  const Quantity n_ordinary = p.omega_b0 * eps_crit / m_ordinary;  // dim +3
  const Quantity n_dark = p.omega_d0 * eps_crit / m_dark;
  const Quantity volume =
      characteristic_volume(m_ordinary, eps_vacuum_rate(p.a0, p.h0, p));
  return ((n_ordinary + n_dark) * volume).value();
}

}  // namespace vacred

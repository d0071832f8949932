#pragma once

#include <utility>
#include <vector>

#include "cosmology.hpp"

namespace vacred {

// Localization scales implied by the vacuum decay rate at one epoch for one
// particle mass. Balancing the stochastic energy-gain rate of a particle
// smeared over a volume V_c against the vacuum energy lost in that volume,
//
//   m G / (2 V_c) = -V_c * d(eps_vac)/dt   =>   V_c = sqrt(-m G / (2 d(eps_vac)/dt)),
//
// with R_c = V_c^(1/3) and the gravitational decoherence timescale
// t_dec = R_c / (G m^2). Every relation here absorbs an order-one coefficient
// taken as exactly 1; serialized records carry an order_of_magnitude flag.
struct ReductionResult {
  Quantity mass = Quantity(0.0, 1);              // dim +1
  Quantity volume = Quantity(0.0, -3);           // V_c
  Quantity length = Quantity(0.0, -1);           // R_c
  Quantity energy_gain_rate = Quantity(0.0, 2);  // dE/dt = m G / (2 V_c)
  Quantity decoherence_time = Quantity(0.0, -1); // R_c / (G m^2)
  static constexpr bool order_of_magnitude = true;
};

// sqrt(-m G / (2 vac_rate)); requires a strictly decaying vacuum
// (vac_rate < 0), otherwise throws the NO_DECAY error.
Quantity characteristic_volume(const Quantity& mass, const Quantity& vac_rate);

// m G / (2 V_c), dim +2.
Quantity energy_gain_rate(const Quantity& mass, const Quantity& volume);

// R_c / (G m^2), dim -1. Order-of-magnitude estimate with coefficient 1.
Quantity decoherence_time(const Quantity& mass, const Quantity& length);

// Present-epoch result evaluated two ways: through the pipeline
// (vacuum rate -> volume -> cube root) and through the one-line closed form
//
//   R_c(t0) = ( 8 pi m G^2 / (6 omega_d0 delta H0^3) )^(1/6).
//
// The two routes must agree to 1e-12 relative; disagreement throws.
struct RcNow {
  ReductionResult result;
  Quantity length_closed_form = Quantity(0.0, -1);
  double cross_check_rel = 0.0;
};
RcNow characteristic_length_now(const CosmoParams& p, const Quantity& mass);

// Scales at one integrated background state.
ReductionResult reduce_at(const BackgroundState& s, const CosmoParams& p,
                          const Quantity& mass);

// Scales along a whole trajectory. V_c is strictly increasing in t on any
// expanding solution: the decay rate magnitude delta*eps_d0*H*(a0/a)^(3-delta)
// falls monotonically.
std::vector<std::pair<Quantity, ReductionResult>> rc_history(
    const std::vector<BackgroundState>& trajectory, const CosmoParams& p,
    const Quantity& mass);

// Fraction of space covered by characteristic volumes when every dark and
// ordinary particle claims one: (n_b + n_d) * V_c(t0), where V_c is evaluated
// for the ordinary-matter probe mass. Values far below 1 justify neglecting
// the particle energy gain in the background evolution.
double vacuum_budget_fraction(const CosmoParams& p, const Quantity& m_ordinary,
                              const Quantity& m_dark);

}  // namespace vacred

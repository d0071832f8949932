#pragma once

#include <vector>

#include "units.hpp"

namespace vacred {

// Flat FRW background where the vacuum energy density decays into cold dark
// matter. Dark matter dilutes as a^-(3-delta) instead of a^-3; the balance
//
//   eps_vac(a) = eps_vac_tilde + delta/(3-delta) * eps_d0 * (a0/a)^(3-delta)
//
// follows from the continuity equation, with the constant part fixed by the
// present-day vacuum fraction. Ordinary matter dilutes as exact a^-3 and
// takes no share of the decay; its kinetic-energy gain is negligible for the
// background.
struct CosmoParams {
  Quantity h0 = units::hubble_now();  // dim +1
  double omega_d0 = 0.27;             // dark-matter fraction today
  double omega_b0 = 0.03;             // ordinary-matter fraction today
  double omega_vac0 = 0.70;           // vacuum fraction today
  double delta = 0.06;                // deviation exponent, observational fit 0.06 +- 0.10
  double a0 = 1.0;                    // present scale factor

  // Throws on violation: fractions in (0,1) summing to 1 within 1e-12,
  // 0 <= delta < 3, positive h0 of dim +1, positive a0.
  void validate() const;

  // delta = 0 is admitted but degenerate: the vacuum does not decay and no
  // characteristic volume exists downstream.
  bool no_decay() const { return delta == 0.0; }
};

// One sample of the integrated cosmic history. t = 0 at a = a0.
struct BackgroundState {
  Quantity t = Quantity(0.0, -1);
  double a = 1.0;
  Quantity eps_d = Quantity(0.0, 4);
  Quantity eps_vac = Quantity(0.0, 4);
  Quantity hubble = Quantity(0.0, 1);
};

// eps_crit = 3 H^2 / (8 pi G), dim +4.
Quantity critical_density(const Quantity& hubble);

// eps_d0 * (a0/a)^(3-delta), dim +4.
Quantity eps_dark(double a, const CosmoParams& p);

// eps_vac_tilde + delta/(3-delta) * eps_d0 * (a0/a)^(3-delta), dim +4.
Quantity eps_vacuum(double a, const CosmoParams& p);

// d(eps_vac)/dt = -delta * eps_d0 * H * (a0/a)^(3-delta), dim +5.
// Strictly negative for delta > 0, exactly zero for delta = 0.
Quantity eps_vacuum_rate(double a, const Quantity& hubble, const CosmoParams& p);

// Friedmann closure for the flat model:
// H(a) = sqrt( (8 pi G / 3) * (eps_b(a) + eps_d(a) + eps_vac(a)) ), dim +1.
Quantity hubble_of_a(double a, const CosmoParams& p);

struct IntegrationOptions {
  double rel_tol = 1e-10;       // local relative tolerance per step
  long max_steps = 10'000'000;  // shared attempt budget for one evolve call
};

// Integrates dt/da = 1/(a H(a)) with step-doubling classical RK4 and returns
// n_samples states on a geometric grid over [a_start, a_end] (the grid point
// nearest to a0 is snapped onto a0 when a0 lies strictly inside the range).
// t and a are strictly increasing; t = 0 at a = a0 even when a0 is outside
// the sampled range.
std::vector<BackgroundState> evolve_background(const CosmoParams& p, double a_start,
                                               double a_end, long n_samples,
                                               const IntegrationOptions& opt = {});

// |d(eps_d)/dt + 3 H eps_d + d(eps_vac)/dt| / (H eps_d) with the dark-matter
// derivative evaluated analytically as -(3-delta) H eps_d. The identity holds
// exactly for the power-law densities, so the residual is floating-point
// noise on any valid state.
double continuity_residual(const BackgroundState& s, const CosmoParams& p);

}  // namespace vacred

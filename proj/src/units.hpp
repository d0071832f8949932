#pragma once

#include "error.hpp"

namespace vacred {

// A real value tagged with its mass dimension in natural units (hbar = c = 1).
// Energies and masses carry dim +1, lengths and times dim -1, energy densities
// dim +4. All physics in this library is carried in GeV powers; conversion to
// CGS happens only at I/O boundaries.
class Quantity {
 public:
  Quantity(double value, int dim);

  double value() const { return value_; }
  int dim() const { return dim_; }

  Quantity operator-() const { return Quantity(-value_, dim_); }
  Quantity operator+(const Quantity& rhs) const;
  Quantity operator-(const Quantity& rhs) const;
  Quantity operator*(const Quantity& rhs) const;
  Quantity operator/(const Quantity& rhs) const;
  Quantity operator*(double s) const { return Quantity(value_ * s, dim_); }
  Quantity operator/(double s) const { return Quantity(value_ / s, dim_); }
  friend Quantity operator*(double s, const Quantity& q) { return q * s; }

  // Integer power: multiplies the dimension by p.
  Quantity pow_int(int p) const;
  // Rational power value^(p/q); admitted only when dim*p is divisible by q.
  Quantity root(int p, int q) const;

 private:
  double value_;
  int dim_;
};

namespace units {

// 1 GeV^-1 expressed in centimeters.
inline constexpr double kGevInvInCm = 1.973e-14;
// 1 GeV^-1 expressed in seconds (hbar in GeV*s, 4 significant digits).
// Reporting convenience only; no derived scale depends on it.
inline constexpr double kGevInvInS = 6.582e-25;
// The Hubble constant is also quoted in the literature as an inverse length,
// 1/(1.3e28 cm). Informational: the canonical GeV value below is what every
// derived scale is anchored to.
inline constexpr double kHubbleNowCmInverse = 1.0 / 1.3e28;

Quantity planck_mass();     // 1.22e19 GeV
Quantity newton_constant(); // G = 1/M_Pl^2, dim -2
Quantity hubble_now();      // H0 = 0.769e-42 GeV (canonical)
Quantity proton_mass();     // 0.938 GeV

double length_to_cm(const Quantity& q);            // requires dim -1
Quantity cm_to_length(double cm);                  // dim -1
double time_to_seconds(const Quantity& q);         // requires dim -1
Quantity hubble_from_cm_inverse(double h_cm_inv);  // requires h > 0; dim +1

}  // namespace units
}  // namespace vacred

#include "units.hpp"

#include <cmath>
#include <string>

namespace vacred {

namespace {

void require_finite(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::Domain,
                "Quantity value must be finite, got " + std::to_string(value));
  }
}

void require_dim(const Quantity& q, int expected, const char* what) {
  if (q.dim() != expected) {
    throw Error(ErrorCode::Dimension,
                std::string(what) + ": expected dim " + std::to_string(expected) +
                    ", got dim " + std::to_string(q.dim()));
  }
}

}  // namespace

Quantity::Quantity(double value, int dim) : value_(value), dim_(dim) {
  require_finite(value);
}

Quantity Quantity::operator+(const Quantity& rhs) const {
  if (dim_ != rhs.dim_) {
    throw Error(ErrorCode::Dimension,
                "add: expected dim " + std::to_string(dim_) + ", got dim " +
                    std::to_string(rhs.dim_));
  }
  return Quantity(value_ + rhs.value_, dim_);
}

Quantity Quantity::operator-(const Quantity& rhs) const {
  if (dim_ != rhs.dim_) {
    throw Error(ErrorCode::Dimension,
                "subtract: expected dim " + std::to_string(dim_) + ", got dim " +
                    std::to_string(rhs.dim_));
  }
  return Quantity(value_ - rhs.value_, dim_);
}

Quantity Quantity::operator*(const Quantity& rhs) const {
  return Quantity(value_ * rhs.value_, dim_ + rhs.dim_);
}

Quantity Quantity::operator/(const Quantity& rhs) const {
  return Quantity(value_ / rhs.value_, dim_ - rhs.dim_);
}

Quantity Quantity::pow_int(int p) const {
  double v = 1.0;
  if (p == 2) {
    v = value_ * value_;
  } else if (p == 3) {
    v = value_ * value_ * value_;
  } else {
    v = std::pow(value_, static_cast<double>(p));
  }
  return Quantity(v, dim_ * p);
}

Quantity Quantity::root(int p, int q) const {
  if (q == 0) {
    throw Error(ErrorCode::Domain, "root: zero denominator exponent");
  }
  if ((dim_ * p) % q != 0) {
    throw Error(ErrorCode::Dimension,
                "root: dim " + std::to_string(dim_) + " * " + std::to_string(p) +
                    " is not divisible by " + std::to_string(q));
  }
  if (value_ < 0.0 && q % 2 == 0) {
    throw Error(ErrorCode::Domain, "root: even root of a negative value");
  }
  double v;
  if (p == 1 && q == 2) {
    v = std::sqrt(value_);
  } else if (p == 1 && q == 3) {
    v = std::cbrt(value_);
  } else {
    v = std::pow(value_, static_cast<double>(p) / static_cast<double>(q));
  }
  return Quantity(v, dim_ * p / q);
}

namespace units {

Quantity planck_mass() { return Quantity(1.22e19, 1); }

Quantity newton_constant() {
  const Quantity mpl = planck_mass();
  return Quantity(1.0, 0) / (mpl * mpl);
}

Quantity hubble_now() { return Quantity(0.769e-42, 1); }

Quantity proton_mass() { return Quantity(0.938, 1); }

double length_to_cm(const Quantity& q) {
  require_dim(q, -1, "length_to_cm");
  return q.value() * kGevInvInCm;
}

Quantity cm_to_length(double cm) {
  return Quantity(cm / kGevInvInCm, -1);
}

double time_to_seconds(const Quantity& q) {
  require_dim(q, -1, "time_to_seconds");
  return q.value() * kGevInvInS;
}

Quantity hubble_from_cm_inverse(double h_cm_inv) {
  if (!(h_cm_inv > 0.0) || !std::isfinite(h_cm_inv)) {
    throw Error(ErrorCode::Domain, "hubble_from_cm_inverse: rate must be positive, got " +
                                       std::to_string(h_cm_inv));
  }
  return Quantity(h_cm_inv * kGevInvInCm, 1);
}

}  // namespace units
}  // namespace vacred

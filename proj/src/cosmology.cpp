#include "cosmology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace vacred {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_scale_factor(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::Domain,
                "scale factor must be positive, got " + std::to_string(a));
  }
}

}  // namespace

void CosmoParams::validate() const {
  auto check_fraction = [](double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) {
      throw Error(ErrorCode::Domain, std::string(name) + " must lie in (0,1), got " +
                                         std::to_string(v));
    }
  };
  check_fraction(omega_d0, "omega_d0");
  check_fraction(omega_b0, "omega_b0");
  check_fraction(omega_vac0, "omega_vac0");
  const double sum = omega_d0 + omega_b0 + omega_vac0;
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorCode::Domain,
                "density fractions must sum to 1 (flatness), got " + std::to_string(sum));
  }
  if (!(delta >= 0.0 && delta < 3.0)) {
    throw Error(ErrorCode::Domain,
                "delta must lie in [0,3), got " + std::to_string(delta));
  }
  if (h0.dim() != 1) {
    throw Error(ErrorCode::Dimension,
                "h0: expected dim 1, got dim " + std::to_string(h0.dim()));
  }
  if (!(h0.value() > 0.0)) {
    throw Error(ErrorCode::Domain, "h0 must be positive");
  }
  if (!(a0 > 0.0) || !std::isfinite(a0)) {
    throw Error(ErrorCode::Domain, "a0 must be positive");
  }
}

Quantity critical_density(const Quantity& hubble) {
  if (hubble.dim() != 1) {
    throw Error(ErrorCode::Dimension,
                "critical_density: expected dim 1, got dim " + std::to_string(hubble.dim()));
  }
  if (!(hubble.value() > 0.0)) {
    throw Error(ErrorCode::Domain, "critical_density: H must be positive");
  }
  return 3.0 * hubble.pow_int(2) / (8.0 * kPi * units::newton_constant());
}

Quantity eps_dark(double a, const CosmoParams& p) {
  require_positive_scale_factor(a);
  const Quantity eps_d0 = p.omega_d0 * critical_density(p.h0);
  return eps_d0 * std::pow(p.a0 / a, 3.0 - p.delta);
}

Quantity eps_vacuum(double a, const CosmoParams& p) {
  require_positive_scale_factor(a);
  if (!(p.delta < 3.0)) {
    throw Error(ErrorCode::Domain, "eps_vacuum: delta must be below 3");
  }
  const Quantity eps_crit = critical_density(p.h0);
  const Quantity eps_d0 = p.omega_d0 * eps_crit;
  const double coupling = p.delta / (3.0 - p.delta);
  // Anchor: eps_vac(a0) equals the observed vacuum fraction today.
  const Quantity eps_vac_tilde = p.omega_vac0 * eps_crit - coupling * eps_d0;
  return eps_vac_tilde + coupling * eps_d0 * std::pow(p.a0 / a, 3.0 - p.delta);
}

Quantity eps_vacuum_rate(double a, const Quantity& hubble, const CosmoParams& p) {
  require_positive_scale_factor(a);
  if (hubble.dim() != 1) {
    throw Error(ErrorCode::Dimension,
                "eps_vacuum_rate: expected dim 1, got dim " + std::to_string(hubble.dim()));
  }
  if (!(hubble.value() > 0.0)) {
    throw Error(ErrorCode::Domain, "eps_vacuum_rate: H must be positive");
  }
  const Quantity eps_d0 = p.omega_d0 * critical_density(p.h0);
  return -p.delta * (eps_d0 * hubble) * std::pow(p.a0 / a, 3.0 - p.delta);
}

Quantity hubble_of_a(double a, const CosmoParams& p) {
  require_positive_scale_factor(a);
  const Quantity eps_b =
      p.omega_b0 * critical_density(p.h0) * std::pow(p.a0 / a, 3.0);
  const Quantity total = eps_b + eps_dark(a, p) + eps_vacuum(a, p);
  return (8.0 * kPi / 3.0 * units::newton_constant() * total).root(1, 2);
}

namespace {

double dt_da(double a, const CosmoParams& p) {
  return 1.0 / (a * hubble_of_a(a, p).value());
}

// Classical RK4 for y' = f(a); f does not depend on y, so k2 = k3.
double rk4_increment(double a, double h, const CosmoParams& p) {
  const double k1 = dt_da(a, p);
  const double k23 = dt_da(a + 0.5 * h, p);
  const double k4 = dt_da(a + h, p);
  return h / 6.0 * (k1 + 4.0 * k23 + k4);
}

// Adaptive step-doubling leg from a_from to a_to (either direction).
// Returns the accumulated time increment; decrements the shared attempt
// budget and throws IntegrationError when it runs out.
double integrate_leg(double a_from, double a_to, const CosmoParams& p,
                     const IntegrationOptions& opt, long& attempts_left,
                     double t_base) {
  double y = 0.0;
  double a = a_from;
  const double direction = (a_to >= a_from) ? 1.0 : -1.0;
  if (a_from == a_to) {
    return 0.0;
  }
  double h = (a_to - a_from) / 16.0;
  while (direction * (a_to - a) > 0.0) {
    bool final_step = false;
    if (direction * (a + h) >= direction * a_to) {
      h = a_to - a;
      final_step = true;
    }
    for (;;) {
      if (--attempts_left < 0) {
        throw IntegrationError(
            "integration step budget exhausted at a = " + std::to_string(a),
            a, t_base + y);
      }
      if (a + h == a) {
        throw IntegrationError(
            "integration step underflow at a = " + std::to_string(a), a,
            t_base + y);
      }
      const double y_full = y + rk4_increment(a, h, p);
      double y_half = y + rk4_increment(a, 0.5 * h, p);
      y_half += rk4_increment(a + 0.5 * h, 0.5 * h, p);
      const double err = std::abs(y_half - y_full);
      const double scale =
          std::abs(y_half) + std::abs(h * dt_da(a, p)) + 1e-300;
      if (err <= opt.rel_tol * scale) {
        // Accept with Richardson extrapolation (locally fifth order).
        y = y_half + (y_half - y_full) / 15.0;
        a = final_step ? a_to : a + h;
        const double grow =
            (err > 0.0) ? 0.9 * std::pow(opt.rel_tol * scale / err, 0.2) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
        break;
      }
      final_step = false;
      h *= std::clamp(0.9 * std::pow(opt.rel_tol * scale / err, 0.25), 0.2, 0.9);
    }
  }
  return y;
}

std::vector<double> geometric_grid(double a_start, double a_end, long n, double a0) {
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double ratio = a_end / a_start;
  for (long i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] =
        a_start * std::pow(ratio, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  grid.front() = a_start;
  grid.back() = a_end;
  if (a0 > a_start && a0 < a_end && n > 2) {
    std::size_t nearest = 1;
    double best = std::abs(std::log(grid[1] / a0));
    for (std::size_t i = 2; i + 1 < grid.size(); ++i) {
      const double d = std::abs(std::log(grid[i] / a0));
      if (d < best) {
        best = d;
        nearest = i;
      }
    }
    grid[nearest] = a0;
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw Error(ErrorCode::Config,
                  "n_samples too large for the requested scale-factor range");
    }
  }
  return grid;
}

}  // namespace

std::vector<BackgroundState> evolve_background(const CosmoParams& p, double a_start,
                                               double a_end, long n_samples,
                                               const IntegrationOptions& opt) {
  p.validate();
  if (!(a_start > 0.0) || !std::isfinite(a_start) || !std::isfinite(a_end)) {
    throw Error(ErrorCode::Domain, "a_start must be positive and finite");
  }
  if (!(a_start < a_end)) {
    throw Error(ErrorCode::Domain, "require a_start < a_end, got a_start = " +
                                       std::to_string(a_start) + ", a_end = " +
                                       std::to_string(a_end));
  }
  if (n_samples < 2) {
    throw Error(ErrorCode::Domain, "n_samples must be at least 2");
  }

  const std::vector<double> grid = geometric_grid(a_start, a_end, n_samples, p.a0);
  long attempts_left = opt.max_steps;

  // Time offset pinning t = 0 to a = a0; signed, a0 may lie outside the range.
  const double t_offset = integrate_leg(a_start, p.a0, p, opt, attempts_left, 0.0);

  std::vector<BackgroundState> states;
  states.reserve(grid.size());
  double t_acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) {
      t_acc += integrate_leg(grid[i - 1], grid[i], p, opt, attempts_left, t_acc - t_offset);
    }
    BackgroundState s;
    s.t = Quantity(t_acc - t_offset, -1);
    s.a = grid[i];
    s.eps_d = eps_dark(grid[i], p);
    s.eps_vac = eps_vacuum(grid[i], p);
    s.hubble = hubble_of_a(grid[i], p);
    states.push_back(s);
  }
  return states;
}

double continuity_residual(const BackgroundState& s, const CosmoParams& p) {
  if (!(s.a > 0.0) || !(s.hubble.value() > 0.0) || !(s.eps_d.value() > 0.0)) {
    throw Error(ErrorCode::Domain, "continuity_residual: invalid background state");
  }
  const Quantity h_eps_d = s.hubble * s.eps_d;
  const Quantity eps_d_dot = -(3.0 - p.delta) * h_eps_d;
  const Quantity lhs = eps_d_dot + 3.0 * h_eps_d + eps_vacuum_rate(s.a, s.hubble, p);
  return std::abs(lhs.value()) / h_eps_d.value();
}

}  // namespace vacred

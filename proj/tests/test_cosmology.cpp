#include <cmath>
#include <vector>

#include "cosmology.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using test_util::close_rel;
using vacred::BackgroundState;
using vacred::CosmoParams;
using vacred::Error;
using vacred::ErrorCode;
using vacred::IntegrationError;
using vacred::IntegrationOptions;
using vacred::Quantity;

namespace {

CosmoParams defaults() { return CosmoParams{}; }

// Matter-dominated toy: vacuum fraction squeezed to 1e-12, no decay.
CosmoParams matter_only() {
  CosmoParams p;
  p.omega_d0 = 0.27;
  p.omega_b0 = 0.73 - 1e-12;
  p.omega_vac0 = 1e-12;
  p.delta = 0.0;
  return p;
}

}  // namespace

TEST_CASE("critical density at H0") {
  // 3 H0^2 M_Pl^2 / (8 pi), worked out by hand
  const Quantity eps = vacred::critical_density(vacred::units::hubble_now());
  CHECK(eps.dim() == 4);
  CHECK(close_rel(eps.value(), 1.0506395276066176e-47, 1e-12));

  CHECK_THROWS_AS(vacred::critical_density(Quantity(0.0, 1)), Error);
  CHECK_THROWS_AS(vacred::critical_density(Quantity(1.0, 2)), Error);

  // quadratic scaling
  const Quantity twice = vacred::critical_density(2.0 * vacred::units::hubble_now());
  CHECK(close_rel(twice.value(), 4.0 * eps.value(), 1e-15));
}

TEST_CASE("dark-matter density law") {
  const CosmoParams p = defaults();
  const Quantity now = vacred::eps_dark(p.a0, p);
  CHECK(close_rel(now.value(), 2.836726724537868e-48, 1e-12));

  // the law is a-independent at the anchor for any delta
  CosmoParams p0 = p;
  p0.delta = 0.0;
  CHECK(vacred::eps_dark(p0.a0, p0).value() == now.value());

  // standard dilution for delta = 0
  CHECK(close_rel(vacred::eps_dark(2.0, p0).value(), now.value() / 8.0, 1e-15));

  CHECK_THROWS_AS(vacred::eps_dark(0.0, p), Error);
  CHECK_THROWS_AS(vacred::eps_dark(-1.0, p), Error);
}

TEST_CASE("vacuum density law") {
  const CosmoParams p = defaults();
  const Quantity eps_crit = vacred::critical_density(p.h0);

  // anchor condition by construction
  CHECK(close_rel(vacred::eps_vacuum(p.a0, p).value(), 0.70 * eps_crit.value(), 1e-12));

  // decaying part vanishes in the far future; the floor is the constant part
  const double tv_part = 0.06 / 2.94 * vacred::eps_dark(p.a0, p).value();
  CHECK(close_rel(tv_part, 5.789238213342587e-50, 1e-12));
  const double floor = 0.70 * eps_crit.value() - tv_part;
  CHECK(close_rel(vacred::eps_vacuum(1e12, p).value(), floor, 1e-10));

  CHECK_THROWS_AS(vacred::eps_vacuum(0.0, p), Error);
}

TEST_CASE("vacuum decay rate") {
  const CosmoParams p = defaults();
  const Quantity rate = vacred::eps_vacuum_rate(p.a0, p.h0, p);
  CHECK(rate.dim() == 5);
  CHECK(rate.value() < 0.0);
  CHECK(close_rel(rate.value(), -1.3088657107017724e-91, 1e-12));

  CosmoParams p0 = p;
  p0.delta = 0.0;
  CHECK(vacred::eps_vacuum_rate(p0.a0, p0.h0, p0).value() == 0.0);
}

TEST_CASE("vacuum decay rate matches a finite-difference derivative") {
  const CosmoParams p = defaults();
  constexpr double xi = 2e-6;
  for (double a : {0.2, 0.5, 1.0, 2.0, 3.0}) {
    const Quantity h = vacred::hubble_of_a(a, p);
    // d(eps_vac)/dt = d(eps_vac)/da * a H
    const double d_eps_da = (vacred::eps_vacuum(a * (1.0 + xi), p).value() -
                             vacred::eps_vacuum(a * (1.0 - xi), p).value()) /
                            (2.0 * a * xi);
    const double fd_rate = d_eps_da * a * h.value();
    CHECK(close_rel(vacred::eps_vacuum_rate(a, h, p).value(), fd_rate, 1e-6));
  }
}

TEST_CASE("Friedmann closure") {
  const CosmoParams p = defaults();
  CHECK(close_rel(vacred::hubble_of_a(p.a0, p).value(), p.h0.value(), 1e-12));

  // de Sitter floor in the far future
  const double h_inf = p.h0.value() * 0.8333605437734423;
  CHECK(close_rel(vacred::hubble_of_a(1e12, p).value(), h_inf, 1e-10));

  // direct evaluation at a = a0/2 with delta = 0
  CosmoParams p0 = p;
  p0.delta = 0.0;
  CHECK(close_rel(vacred::hubble_of_a(0.5, p0).value(),
                  p.h0.value() * 1.7606816861659007, 1e-12));

  CHECK_THROWS_AS(vacred::hubble_of_a(0.0, p), Error);
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(defaults().validate());

  CosmoParams bad = defaults();
  bad.omega_d0 = 0.5;  // breaks flatness
  CHECK_THROWS_AS(bad.validate(), Error);

  bad = defaults();
  bad.delta = -0.1;
  CHECK_THROWS_AS(bad.validate(), Error);

  bad = defaults();
  bad.delta = 3.0;
  CHECK_THROWS_AS(bad.validate(), Error);

  bad = defaults();
  bad.h0 = Quantity(1.0, 0);
  CHECK_THROWS_AS(bad.validate(), Error);

  CosmoParams degenerate = defaults();
  degenerate.delta = 0.0;
  CHECK_NOTHROW(degenerate.validate());
  CHECK(degenerate.no_decay());
  CHECK_FALSE(defaults().no_decay());
}

TEST_CASE("evolve_background rejects bad windows") {
  const CosmoParams p = defaults();
  CHECK_THROWS_AS(vacred::evolve_background(p, 1.0, 1.0, 16), Error);
  CHECK_THROWS_AS(vacred::evolve_background(p, 2.0, 1.0, 16), Error);
  CHECK_THROWS_AS(vacred::evolve_background(p, 0.0, 1.0, 16), Error);
  CHECK_THROWS_AS(vacred::evolve_background(p, 0.5, 2.0, 1), Error);
}

TEST_CASE("evolve_background is strictly monotone and anchored at a0") {
  const CosmoParams p = defaults();
  const auto states = vacred::evolve_background(p, 0.5, 2.0, 65);
  REQUIRE(states.size() == 65);
  for (std::size_t i = 1; i < states.size(); ++i) {
    CHECK(states[i].a > states[i - 1].a);
    CHECK(states[i].t.value() > states[i - 1].t.value());
  }
  // grid point nearest a0 snaps exactly onto it and carries t = 0
  bool found_anchor = false;
  for (const auto& s : states) {
    if (s.a == p.a0) {
      found_anchor = true;
      CHECK(std::abs(s.t.value()) <= 1e-6 * std::abs(states.back().t.value()));
    }
  }
  CHECK(found_anchor);
}

TEST_CASE("integrated states satisfy the flat Friedmann closure") {
  const CosmoParams p = defaults();
  const auto states = vacred::evolve_background(p, 0.1, 10.0, 100);
  const Quantity eps_crit = vacred::critical_density(p.h0);
  for (const auto& s : states) {
    const Quantity eps_b = p.omega_b0 * eps_crit * std::pow(p.a0 / s.a, 3.0);
    const Quantity total = eps_b + s.eps_d + s.eps_vac;
    const Quantity h2 = s.hubble.pow_int(2);
    const Quantity rhs =
        8.0 * 3.14159265358979323846 / 3.0 * vacred::units::newton_constant() * total;
    CHECK(close_rel(h2.value(), rhs.value(), 1e-9));
  }
}

TEST_CASE("de Sitter limit: log a linear in t") {
  CosmoParams p = defaults();
  p.delta = 0.0;
  const auto states = vacred::evolve_background(p, 1e8, 1e10, 9);
  const double h_inf = p.h0.value() * std::sqrt(p.omega_vac0);
  const double span = states.back().t.value() - states.front().t.value();
  const double expected = std::log(1e10 / 1e8) / h_inf;
  CHECK(close_rel(span, expected, 1e-8));
  // interior samples too
  for (const auto& s : states) {
    const double dt = s.t.value() - states.front().t.value();
    const double want = std::log(s.a / states.front().a) / h_inf;
    if (s.a > states.front().a) {
      CHECK(close_rel(dt, want, 1e-8));
    }
  }
}

TEST_CASE("matter-only limit: a grows as t^(2/3)") {
  const CosmoParams p = matter_only();
  const auto states = vacred::evolve_background(p, 0.01, 1.0, 17);
  const double h_m = p.h0.value() * std::sqrt(p.omega_d0 + p.omega_b0);
  auto closed_form = [&](double a) {
    return 2.0 / (3.0 * h_m) * (std::pow(a / p.a0, 1.5) - 1.0);
  };
  const double span = states.back().t.value() - states.front().t.value();
  const double expected = closed_form(1.0) - closed_form(0.01);
  CHECK(close_rel(span, expected, 1e-6));
}

TEST_CASE("halving the tolerance moves the endpoint by less than 10x tolerance") {
  const CosmoParams p = defaults();
  IntegrationOptions coarse;
  coarse.rel_tol = 1e-10;
  IntegrationOptions fine;
  fine.rel_tol = 5e-11;
  const auto a = vacred::evolve_background(p, 0.5, 2.0, 8, coarse);
  const auto b = vacred::evolve_background(p, 0.5, 2.0, 8, fine);
  const double t_a = a.back().t.value();
  const double t_b = b.back().t.value();
  CHECK(std::abs(t_a - t_b) <= 10.0 * coarse.rel_tol * std::abs(t_a));
}

TEST_CASE("integration failure carries the last good state") {
  const CosmoParams p = defaults();
  IntegrationOptions strangled;
  strangled.max_steps = 10;
  try {
    vacred::evolve_background(p, 0.1, 10.0, 50, strangled);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.code() == ErrorCode::Integration);
    CHECK(e.a_reached >= 0.1);
    CHECK(e.a_reached <= 10.0);
  }
}

TEST_CASE("continuity identity holds to rounding for all delta") {
  for (double delta : {0.0, 0.06, 0.16}) {
    CosmoParams p = defaults();
    p.delta = delta;
    const auto states = vacred::evolve_background(p, 0.1, 10.0, 1000);
    double worst = 0.0;
    for (const auto& s : states) {
      worst = std::max(worst, vacred::continuity_residual(s, p));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("density monotonicity for a decaying vacuum") {
  const CosmoParams p = defaults();
  double prev_vac = vacred::eps_vacuum(0.1, p).value();
  double prev_comoving = vacred::eps_dark(0.1, p).value() * std::pow(0.1, 3.0);
  for (int i = 1; i <= 200; ++i) {
    const double a = 0.1 * std::pow(100.0, i / 200.0);
    const double vac = vacred::eps_vacuum(a, p).value();
    const double comoving = vacred::eps_dark(a, p).value() * a * a * a;
    CHECK(vac <= prev_vac);
    CHECK(comoving >= prev_comoving);
    prev_vac = vac;
    prev_comoving = comoving;
  }
}

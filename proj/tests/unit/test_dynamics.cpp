#include <doctest.h>

#include <cmath>

#include "elid/dynamics/trajectory.hpp"
#include "elid/statics/static_solver.hpp"

using namespace elid;
using sym::frac;

namespace {

const ElasticModuli kIso = moduli_from_lame({1, 0}, 2);

GridPtr unit_square(double h) { return Grid::make(DomainSpec::rectangle({0, 0}, {1, 1}), h); }

double max_diff(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

}  // namespace

TEST_CASE("coupled system preconditions") {
  CHECK_THROWS_AS(DynamicModel::hamiltonian(moduli_from_lame({1, 0}, 3), CouplingPotential::bilinear(1)), std::invalid_argument);
  CHECK_THROWS_AS(DynamicModel::hamiltonian(kIso, CouplingPotential::bilinear(1), 1, 2), std::invalid_argument);
  CHECK_NOTHROW(DynamicModel::hamiltonian(kIso, CouplingPotential::bilinear(1), frac(1, 2), frac(3, 2)));
}

TEST_CASE("step size bound") {
  auto g = unit_square(1.0 / 16);
  const double bound = stable_time_step(*g, kIso);
  CHECK(bound == doctest::Approx(0.5 / 16 / std::sqrt(2.0)));
  CHECK_THROWS_AS(Integrator(g, DynamicModel::potential(kIso, BodyForcePotential::zero()), 1.01 * bound), IntegrationError);
  CHECK_NOTHROW(Integrator(g, DynamicModel::potential(kIso, BodyForcePotential::zero()), bound));
}

TEST_CASE("zero data stay zero") {
  auto g = unit_square(1.0 / 16);
  for (auto model : {DynamicModel::potential(kIso, BodyForcePotential::power(frac(-1, 4), 4)),
                     DynamicModel::hamiltonian(kIso, CouplingPotential::dot_power(1, 2))}) {
    Integrator integ(g, model, 1e-3);
    auto s = integ.zero_state();
    for (int k = 0; k < 20; ++k) integ.step(s);
    CHECK(s.u.max_abs() == 0.0);
    CHECK(s.u_t.max_abs() == 0.0);
    MorawetzFunctionals fn(g, model);
    CHECK(fn.functional(s) == 0.0);
    auto r = fn.rhs(s);
    CHECK(r.interior == 0.0);
    CHECK(r.boundary == 0.0);
  }
}

TEST_CASE("blow-up is reported with the step index") {
  auto g = unit_square(1.0 / 8);
  Integrator integ(g, DynamicModel::potential(kIso, BodyForcePotential::power(1, 8)), 0.02);
  auto s = integ.zero_state();
  for (long node : g->inside_nodes()) s.u.at(node, 0) = 50.0;
  try {
    for (int k = 0; k < 100; ++k) integ.step(s);
    FAIL("expected an integration error");
  } catch (const IntegrationError& e) {
    CHECK(e.step() >= 1);
  }
}

TEST_CASE("time reversal returns the initial state") {
  auto g = Grid::make(DomainSpec::ball(2, 1.0), 1.0 / 24);
  for (auto model : {DynamicModel::potential(moduli_from_lame({1, frac(1, 2)}, 2), BodyForcePotential::power(frac(-1, 4), 4)),
                     DynamicModel::hamiltonian(kIso, CouplingPotential::dot_power(frac(1, 2), 2), frac(1, 2), frac(3, 2))}) {
    Integrator integ(g, model, 0.5 * stable_time_step(*g, model.C));
    BumpData b{{0.1, -0.2}, 0.6, 0.8, {1, 2}};
    auto s = bump_state(integ, b);
    for (long node : g->inside_nodes()) s.u_t.at(node, 1) = 0.3 * s.u.at(node, 0);
    auto s0 = s;
    for (int k = 0; k < 200; ++k) integ.step(s);
    CHECK(max_diff(s.u, s0.u) > 1e-3);
    for (int k = 0; k < 200; ++k) integ.step_backward(s);
    const double scale = s0.u.max_abs();
    CHECK(max_diff(s.u, s0.u) <= 1e-10 * scale);
    CHECK(max_diff(s.u_t, s0.u_t) <= 1e-10 * scale);
    if (model.coupled()) CHECK(max_diff(s.v, s0.v) <= 1e-10 * scale);
    CHECK(std::abs(s.t) < 1e-12);
  }
}

TEST_CASE("energy drift is second order in the step") {
  auto g = unit_square(1.0 / 24);
  auto model = DynamicModel::potential(kIso, BodyForcePotential::quadratic(2));
  std::vector<double> drift;
  for (double dt : {0.008, 0.004, 0.002}) {
    Integrator integ(g, model, dt);
    auto s = bump_state(integ, {{0.5, 0.5}, 0.4, 1.0, {1, 1}});
    const double e0 = integ.energy(s);
    double worst = 0.0;
    while (s.t < 0.4 - 1e-12) {
      integ.step(s);
      worst = std::max(worst, std::abs(integ.energy(s) - e0));
    }
    drift.push_back(worst / std::abs(e0));
  }
  CHECK(drift[0] / drift[1] == doctest::Approx(4.0).epsilon(0.15));
  CHECK(drift[1] / drift[2] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("eigenmode oscillates as cos(sqrt(kappa) t)") {
  auto g = unit_square(1.0 / 16);
  auto model = DynamicModel::potential(kIso, BodyForcePotential::zero());
  std::vector<double> err;
  for (double dt : {0.004, 0.002}) {
    Integrator integ(g, model, dt);
    double kappa = 0.0;
    auto s = eigenmode_state(integ, 1.0, &kappa);
    auto u0 = s.u;
    const long steps = std::lround(0.3 / dt);
    for (long k = 0; k < steps; ++k) integ.step(s);
    const double c = std::cos(std::sqrt(kappa) * s.t);
    double e = 0.0;
    for (std::size_t i = 0; i < s.u.values().size(); ++i) e = std::max(e, std::abs(s.u.values()[i] - c * u0.values()[i]));
    err.push_back(e);
  }
  CHECK(err[0] < 5e-2);
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("Morawetz functional of a separable eigenmode") {
  // u = cos(w t) u0 gives M(t) = |u0|^2 (w^2 t + w sin(w t) cos(w t)) / 2 after one integration by parts.
  auto g = unit_square(1.0 / 32);
  auto model = DynamicModel::potential(kIso, BodyForcePotential::zero());
  const double dt = 0.002;
  Integrator integ(g, model, dt);
  MorawetzFunctionals fn(g, model);
  double kappa = 0.0;
  auto s = eigenmode_state(integ, 1.0, &kappa);
  CHECK(fn.functional(s) == doctest::Approx(0.0).epsilon(1e-14));
  std::vector<double> sq(static_cast<std::size_t>(g->node_count()), 0.0);
  for (long node = 0; node < g->node_count(); ++node)
    if (g->has_value(node)) sq[static_cast<std::size_t>(node)] = s.u.at(node, 0) * s.u.at(node, 0) + s.u.at(node, 1) * s.u.at(node, 1);
  const double norm2 = volume_integral(*g, sq);
  const double w = std::sqrt(kappa);
  for (int k = 0; k < 100; ++k) integ.step(s);
  const double expect = 0.5 * norm2 * (w * w * s.t + w * std::sin(w * s.t) * std::cos(w * s.t));
  CHECK(fn.functional(s) == doctest::Approx(expect).epsilon(2e-2));
}

TEST_CASE("interior density for a quartic potential") {
  // n = 2, F = |s|^4 / 4: interior = ((n-1)/2) s.f - (n+1) F = -|s|^4 / 4.
  auto g = unit_square(1.0 / 16);
  auto model = DynamicModel::potential(kIso, BodyForcePotential::power(frac(1, 4), 4));
  Integrator integ(g, model, 1e-3);
  auto s = bump_state(integ, {{0.5, 0.5}, 0.4, 0.7, {1, -1}});
  std::vector<double> dens(static_cast<std::size_t>(g->node_count()), 0.0);
  for (long node = 0; node < g->node_count(); ++node)
    if (g->has_value(node)) {
      double q = s.u.at(node, 0) * s.u.at(node, 0) + s.u.at(node, 1) * s.u.at(node, 1);
      dens[static_cast<std::size_t>(node)] = -q * q / 4;
    }
  MorawetzFunctionals fn(g, model);
  CHECK(fn.rhs(s).interior == doctest::Approx(volume_integral(*g, dens)).epsilon(1e-12));
}

TEST_CASE("free-space run before contact") {
  auto box = DomainSpec::rectangle({-2, -2}, {2, 2});
  BumpData b{{0, 0}, 0.75, 0.5, {1, 0.5}};
  CHECK(contact_time(box, b, kIso) == doctest::Approx(1.25 / std::sqrt(2.0)));
  auto g = Grid::make(box, 1.0 / 16);
  auto model = DynamicModel::potential(kIso, BodyForcePotential::power(frac(-1, 4), 4));
  TrajectoryOptions o;
  o.horizon = 0.5;
  o.samples = 4;
  o.freespace = true;
  o.contact_time = contact_time(box, b, kIso);
  auto tr = run_trajectory(g, model, [&](const Integrator& i) { return bump_state(i, b); }, o);
  CHECK(tr.window_ok());
  REQUIRE(tr.samples.size() == 4);
  CHECK(tr.samples.back().t == doctest::Approx(0.5));
  for (const auto& s : tr.samples) CHECK(std::abs(s.rhs_boundary) < 1e-12);
  CHECK(tr.csv().rfind("t,M,dM_dt_centered,rhs_interior,rhs_boundary,gap,energy\n", 0) == 0);
  o.horizon = 1.0;
  auto late = run_trajectory(g, model, [&](const Integrator& i) { return bump_state(i, b); }, o);
  CHECK_FALSE(late.window_ok());
}

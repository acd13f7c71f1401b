#include "elid/app/selftest.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "elid/dynamics/trajectory.hpp"
#include "elid/symbolic/calculus.hpp"
#include "elid/symbolic/random_expr.hpp"

namespace elid::app {

namespace {

double max_diff(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

SelfCheck divergence_check(std::uint64_t seed, int cases) {
  const sym::JetSpace spaces[] = {{2, false, 1}, {3, false, 1}, {2, true, 1}, {2, true, 2}};
  std::mt19937_64 rng(seed);
  int zero = 0;
  for (int c = 0; c < cases; ++c) {
    const sym::JetSpace& sp = spaces[c % 4];
    // Zeroth-order flux components keep the divergence first order.
    auto atoms = sym::point_atoms(sp);
    sym::DiffExpr div;
    for (int d : sp.directions()) div += sym::total_derivative(sym::random_polynomial(rng, atoms, 3, 4), d, sp);
    bool ok = true;
    for (sym::Field f : sp.field_list())
      for (int k = 1; k <= sp.n; ++k) ok = ok && sym::euler_operator(div, f, k, sp).is_zero();
    zero += ok ? 1 : 0;
  }
  std::ostringstream os;
  os << zero << "/" << cases << " random divergences with exactly zero Euler expressions";
  return {"euler operator annihilates divergences", zero == cases, os.str()};
}

SelfCheck reversal_check() {
  auto g = Grid::make(DomainSpec::ball(2, 1.0), 1.0 / 24);
  auto model = DynamicModel::potential(moduli_from_lame({1, sym::frac(1, 2)}, 2), BodyForcePotential::power(sym::frac(-1, 4), 4));
  Integrator integ(g, model, 0.5 * stable_time_step(*g, model.C));
  auto s = bump_state(integ, {{0.1, -0.2}, 0.6, 0.8, {1, 2}});
  for (long node : g->inside_nodes()) s.u_t.at(node, 1) = 0.3 * s.u.at(node, 0);
  const auto s0 = s;
  for (int k = 0; k < 200; ++k) integ.step(s);
  for (int k = 0; k < 200; ++k) integ.step_backward(s);
  const double err = std::max(max_diff(s.u, s0.u), max_diff(s.u_t, s0.u_t)) / s0.u.max_abs();
  std::ostringstream os;
  os << "200 steps forward and back, relative max difference " << err;
  return {"leapfrog time reversal", err <= 1e-10, os.str()};
}

SelfCheck drift_check() {
  auto g = Grid::make(DomainSpec::rectangle({0, 0}, {1, 1}), 1.0 / 24);
  auto model = DynamicModel::potential(moduli_from_lame({1, 0}, 2), BodyForcePotential::quadratic(2));
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
  const double o1 = std::log2(drift[0] / drift[1]), o2 = std::log2(drift[1] / drift[2]);
  std::ostringstream os;
  os << "relative drift " << drift[0] << ", " << drift[1] << ", " << drift[2] << " at dt = 0.008, 0.004, 0.002; orders " << o1
     << ", " << o2;
  return {"energy drift is second order", o1 >= 1.8 && o2 >= 1.8, os.str()};
}

}  // namespace

std::vector<SelfCheck> run_selftest(std::uint64_t seed, int divergence_cases) {
  return {divergence_check(seed, divergence_cases), reversal_check(), drift_check()};
}

}  // namespace elid::app

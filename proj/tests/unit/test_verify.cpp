#include <doctest.h>

#include <cmath>

#include "elid/statics/manufactured.hpp"
#include "elid/verify/identity.hpp"

using namespace elid;
using sym::frac;

namespace {

struct Eigencase {
  StaticProblem p;
  StaticSolution sol;
};

Eigencase disk_eigencase(double h, const IsotropicModuli& iso) {
  Eigencase e;
  e.p.grid = Grid::make(DomainSpec::ball(2, 1.0), h);
  e.p.C = moduli_from_lame(iso, 2);
  e.p.scheme = Scheme::ShortleyWeller;
  auto ep = smallest_eigenpair(e.p);
  e.p.F = BodyForcePotential::quadratic(sym::Rational(ep.kappa));
  e.sol.u = ep.u;
  e.sol.converged = true;
  e.sol.residual_norm = residual_max_norm(e.p, ep.u);
  return e;
}

StaticProblem manufactured_square(double h, double tau) {
  StaticProblem p;
  p.grid = Grid::make(DomainSpec::rectangle({0, 0}, {1, 1}), h);
  p.C = moduli_from_lame({1, 0}, 2);
  p.F = BodyForcePotential::zero();
  p.source = manufactured_source(p.C, p.F, ManufacturedSolution::unit_cube_mode(2, tau));
  return p;
}

}  // namespace

TEST_CASE("zero field satisfies the static identity trivially") {
  StaticProblem p;
  p.grid = Grid::make(DomainSpec::ball(2, 1.0), 1.0 / 16);
  p.C = moduli_from_lame({1, 1}, 2);
  p.F = BodyForcePotential::power(1, 4);
  StaticSolution sol;
  sol.u = GridField(p.grid, 2);
  auto r = verify_pohozhaev(sol, p);
  CHECK(r.lhs == 0.0);
  CHECK(r.rhs == 0.0);
  CHECK(r.relative_gap == 0.0);
  CHECK(r.scale == 1.0);
}

TEST_CASE("unforced identity refuses a source") {
  auto p = manufactured_square(1.0 / 8, 1.0);
  StaticSolution sol;
  sol.u = GridField(p.grid, 2);
  CHECK_THROWS_AS(verify_pohozhaev(sol, p), std::invalid_argument);
  CHECK_NOTHROW(verify_pohozhaev_generalized(sol, p));
}

TEST_CASE("generalized identity without a source is the plain one") {
  auto e = disk_eigencase(1.0 / 16, {1, frac(1, 2)});
  auto a = verify_pohozhaev(e.sol, e.p);
  auto b = verify_pohozhaev_generalized(e.sol, e.p);
  CHECK(b.id == "pohozhaev-generalized");
  CHECK(a.lhs == b.lhs);
  CHECK(a.rhs == b.rhs);
  CHECK(a.relative_gap == b.relative_gap);
}

TEST_CASE("eigencase: left side is -kappa |u|^2 and the right side is non-positive") {
  auto e = disk_eigencase(1.0 / 32, {1, frac(1, 2)});
  const Grid& g = *e.p.grid;
  std::vector<double> sq(static_cast<std::size_t>(g.node_count()), 0.0);
  for (long node = 0; node < g.node_count(); ++node)
    if (g.has_value(node)) sq[static_cast<std::size_t>(node)] = std::pow(e.sol.u.at(node, 0), 2) + std::pow(e.sol.u.at(node, 1), 2);
  const double kappa = e.p.F.coefficient().get_d();
  auto r = verify_pohozhaev(e.sol, e.p);
  CHECK(r.lhs == doctest::Approx(-kappa * volume_integral(g, sq)).epsilon(1e-12));
  CHECK(r.rhs < 0.0);
  CHECK(r.relative_gap < 5e-3);
  auto iso = verify_pohozhaev_isotropic(e.sol, e.p, {1, frac(1, 2)});
  CHECK(iso.rhs == doctest::Approx(r.rhs).epsilon(1e-6));
  CHECK(iso.rhs_quoted == doctest::Approx(0.5 * iso.rhs));
  CHECK_THROWS_AS(verify_pohozhaev_isotropic(e.sol, e.p, {1, 1}), std::invalid_argument);
}

TEST_CASE("in two dimensions the left side is -2 int F") {
  StaticProblem p;
  p.grid = Grid::make(DomainSpec::rectangle({0, 0}, {1, 1}), 1.0 / 16);
  p.C = moduli_from_lame({1, 0}, 2);
  p.F = BodyForcePotential::power(frac(3, 2), 6);
  StaticSolution sol;
  sol.u = GridField::sample(p.grid, 2, [](const Point& x) { return std::vector<double>{x[0] * (1 - x[0]) * x[1], x[1] * (1 - x[1])}; });
  std::vector<double> F(static_cast<std::size_t>(p.grid->node_count()), 0.0);
  for (long node = 0; node < p.grid->node_count(); ++node)
    if (p.grid->has_value(node)) F[static_cast<std::size_t>(node)] = p.F.value(sol.u.vec(node));
  CHECK(verify_pohozhaev(sol, p).lhs == doctest::Approx(-2 * volume_integral(*p.grid, F)).epsilon(1e-12));
}

TEST_CASE("manufactured generalized identity converges and scales") {
  std::vector<IdentityReport> levels;
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    auto p = manufactured_square(h, 1.0);
    auto sol = solve_static(p, GridField(p.grid, 2));
    REQUIRE(sol.converged);
    levels.push_back(verify_pohozhaev_generalized(sol, p));
  }
  auto study = h_refinement(levels);
  CHECK(study.monotone());
  CHECK(study.pass());
  CHECK(study.order > 1.5);
  CHECK(study.csv().rfind("identity,h,dt,lhs,rhs,gap,relative_gap,order\n", 0) == 0);
  // u -> 2u: both sides are quadratic in the amplitude.
  auto p2 = manufactured_square(1.0 / 32, 2.0);
  auto sol2 = solve_static(p2, GridField(p2.grid, 2));
  REQUIRE(sol2.converged);
  auto r2 = verify_pohozhaev_generalized(sol2, p2);
  CHECK(r2.lhs == doctest::Approx(4 * levels[1].lhs).epsilon(1e-6));
  CHECK(r2.relative_gap == doctest::Approx(levels[1].relative_gap).epsilon(1e-3));
}

TEST_CASE("refinement pass needs three monotone levels") {
  IdentityReport a, b, c;
  a.relative_gap = 4e-2;
  b.relative_gap = 1e-2;
  c.relative_gap = 2e-3;
  RefinementStudy s;
  s.levels = {a, b};
  CHECK_FALSE(s.pass());
  s.levels = {a, b, c};
  CHECK(s.pass());
  s.levels = {a, c, b};
  CHECK_FALSE(s.pass());
  a.relative_gap = 6e-2;
  s.levels = {a, b, c};
  CHECK_FALSE(s.pass());
}

TEST_CASE("dynamic identities: preconditions and zero data") {
  auto g = Grid::make(DomainSpec::rectangle({0, 0}, {1, 1}), 1.0 / 16);
  auto pot = DynamicModel::potential(moduli_from_lame({1, 0}, 2), BodyForcePotential::power(frac(-1, 4), 4));
  auto ham = DynamicModel::hamiltonian(moduli_from_lame({1, 0}, 2), CouplingPotential::bilinear(1));
  TrajectoryOptions o;
  o.horizon = 0.1;
  o.samples = 4;
  auto zero = [](const Integrator& i) { return i.zero_state(); };
  auto tr = run_trajectory(g, pot, zero, o);
  auto r = verify_morawetz(tr, pot);
  CHECK(r.id == "morawetz");
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    CHECK(r.lhs_series[k] == 0.0);
    CHECK(r.rhs_series[k] == 0.0);
  }
  CHECK(r.relative_gap == 0.0);
  CHECK_THROWS_AS(verify_hamiltonian_conformal(tr, pot), std::invalid_argument);
  auto trh = run_trajectory(g, ham, zero, o);
  CHECK(verify_hamiltonian_conformal(trh, ham).relative_gap == 0.0);
  CHECK_THROWS_AS(verify_morawetz(trh, ham), std::invalid_argument);
}

TEST_CASE("Dirichlet eigenmode: Morawetz gap shrinks with h and dt") {
  auto C = moduli_from_lame({1, 0}, 2);
  auto model = DynamicModel::potential(C, BodyForcePotential::zero());
  auto eig = [](const Integrator& i) { return eigenmode_state(i, 1.0); };
  std::vector<IdentityReport> levels;
  for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    TrajectoryOptions o;
    o.dt = h / 4;
    o.horizon = 0.25;
    o.samples = 4;
    levels.push_back(verify_morawetz(run_trajectory(Grid::make(DomainSpec::rectangle({0, 0}, {1, 1}), h), model, eig, o), model));
  }
  auto study = h_refinement(levels);
  CHECK(study.monotone());
  CHECK(study.order >= 1.0);
  std::vector<Trajectory> runs;
  auto g = Grid::make(DomainSpec::rectangle({0, 0}, {1, 1}), 1.0 / 16);
  for (double f : {4.0, 8.0, 16.0}) {
    TrajectoryOptions o;
    o.dt = g->h() / f;
    o.horizon = 0.25;
    o.samples = 4;
    runs.push_back(run_trajectory(g, model, eig, o));
  }
  CHECK(richardson_dt_order(runs, false) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("free-space verification enforces the contact window") {
  auto box = DomainSpec::rectangle({-1, -1}, {1, 1});
  auto C = moduli_from_lame({1, 0}, 2);
  auto model = DynamicModel::potential(C, BodyForcePotential::power(frac(-1, 4), 4));
  BumpData b{{0, 0}, 0.5, 0.5, {}};
  auto g = Grid::make(box, 1.0 / 16);
  TrajectoryOptions o;
  o.freespace = true;
  o.contact_time = contact_time(box, b, C);
  o.samples = 2;
  o.horizon = 0.2;
  auto ok = run_trajectory(g, model, [&](const Integrator& i) { return bump_state(i, b); }, o);
  CHECK(verify_morawetz(ok, model).id == "morawetz-freespace");
  o.horizon = 0.5;
  auto late = run_trajectory(g, model, [&](const Integrator& i) { return bump_state(i, b); }, o);
  CHECK_THROWS_AS(verify_morawetz(late, model), std::runtime_error);
}

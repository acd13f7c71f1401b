#include <doctest.h>

#include <random>

#include "elid/symbolic/compiled.hpp"
#include "elid/symbolic/derivations.hpp"
#include "elid/symbolic/random_expr.hpp"

using namespace elid::sym;

namespace {

DiffExpr ux(int k, int j) { return d1_(Field::U, k, j); }
DiffExpr uxx(int k, int i, int j) { return d2_(Field::U, k, i, j); }
const JetSpace kPlane{2, false, 1};

}  // namespace

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-1/2") == frac(-1, 2));
  CHECK(parse_rational("0.25") == frac(1, 4));
  CHECK(parse_rational("1e-3") == frac(1, 1000));
  CHECK(parse_rational("2.5e2") == 250);
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("second derivatives are index symmetric") {
  CHECK(Atom::d2(Field::U, 1, 2, 1) == Atom::d2(Field::U, 1, 1, 2));
  CHECK(uxx(1, 1, 2) - uxx(1, 2, 1) == DiffExpr());
}

TEST_CASE("normal form dump") {
  DiffExpr e = frac(1, 2) * u_(1) * F_u(1) - 3 * F_();
  CHECK(e.str() == "1/2*u1*F_u1 - 3*F");
  CHECK(DiffExpr().str() == "0");
  CHECK((-DiffExpr(1)).str() == "-1");
  CHECK(pow(x_(1), 2).str() == "x1^2");
}

TEST_CASE("total derivative examples") {
  CHECK(total_derivative(x_(1), 1, kPlane) == DiffExpr(1));
  CHECK(total_derivative(x_(2), 1, kPlane).is_zero());
  DiffExpr dF = total_derivative(F_(), 2, kPlane);
  CHECK(dF == F_u(1) * ux(1, 2) + F_u(2) * ux(2, 2));
  CHECK(total_derivative(u_(1) * ux(1, 2), 1, kPlane) == ux(1, 1) * ux(1, 2) + u_(1) * uxx(1, 1, 2));
  CHECK_THROWS_AS(total_derivative(uxx(1, 1, 1), 1, kPlane), OrderError);
  CHECK_THROWS(total_derivative(x_(1), 0, kPlane));
}

TEST_CASE("second formal partials appear only through the chain rule") {
  DiffExpr d = total_derivative(F_u(1), 1, kPlane);
  CHECK(d.size() == 2);
  CHECK_THROWS_AS(total_derivative(d, 2, kPlane), OrderError);
}

TEST_CASE("product rule and commutation on random instances") {
  std::mt19937_64 rng(7);
  auto atoms = point_atoms(kPlane);
  for (int trial = 0; trial < 25; ++trial) {
    DiffExpr a = random_polynomial(rng, first_order_atoms(kPlane, true), 2, 4);
    DiffExpr b = random_polynomial(rng, first_order_atoms(kPlane, false), 2, 4);
    for (int j = 1; j <= 2; ++j)
      CHECK(total_derivative(a * b, j, kPlane) ==
            total_derivative(a, j, kPlane) * b + a * total_derivative(b, j, kPlane));
    DiffExpr e = random_polynomial(rng, atoms, 3, 5);
    CHECK(total_derivative(total_derivative(e, 1, kPlane), 2, kPlane) ==
          total_derivative(total_derivative(e, 2, kPlane), 1, kPlane));
  }
}

TEST_CASE("normalization is idempotent") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    DiffExpr e = random_lagrangian(rng, kPlane);
    CHECK(normalize(normalize(e)) == normalize(e));
    CHECK(normalize(e) == e);
  }
}

TEST_CASE("Euler operator of the isotropic energy gives Navier's operator") {
  DiffExpr L = lame_energy(2, 1, 0);
  for (int i = 1; i <= 2; ++i) {
    DiffExpr navier;
    for (int j = 1; j <= 2; ++j) navier += uxx(i, j, j) + uxx(j, i, j);
    CHECK(euler_operator(L, Field::U, i, kPlane) == -navier);
  }
  CHECK(euler_operator(-F_(), Field::U, 1, kPlane) == -F_u(1));
  CHECK_THROWS_AS(euler_operator(uxx(1, 1, 1), Field::U, 1, kPlane), OrderError);
}

TEST_CASE("Euler operator annihilates total divergences") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    // Q must be zeroth order so that D_2 Q stays first order.
    DiffExpr Q = random_polynomial(rng, point_atoms(kPlane), 3, 5);
    for (int k = 1; k <= 2; ++k) CHECK(euler_operator(total_derivative(Q, 2, kPlane), Field::U, k, kPlane).is_zero());
  }
}

TEST_CASE("prolongation examples") {
  for (int n : {2, 3}) {
    ProlongedField pv = prolong(static_dilation(n));
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) CHECK(pv.at(Field::U, i, j) == frac(-n, 2) * ux(i, j));
    ProlongedField pd = prolong(dynamic_dilation(n));
    for (int i = 1; i <= n; ++i)
      for (int j = 0; j <= n; ++j) CHECK(pd.at(Field::U, i, j) == frac(-(n + 1), 2) * d1_(Field::U, i, j));
    ProlongedField pt = prolong(translation_generator(JetSpace{n, false, 1}, 1));
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) CHECK(pt.at(Field::U, i, j).is_zero());
  }
  ProlongedField ph = prolong(hamiltonian_dilation(2, frac(1, 2), frac(3, 2)));
  CHECK(ph.at(Field::U, 1, 0) == (frac(-1, 4) - 1) * d1_(Field::U, 1, 0));
  CHECK(ph.at(Field::V, 2, 1) == (frac(-3, 4) - 1) * d1_(Field::V, 2, 1));
}

TEST_CASE("generator validation") {
  VectorFieldGenerator v(kPlane);
  v.xi_at(1) = ux(1, 1);
  CHECK_THROWS(prolong(v));
  VectorFieldGenerator w(kPlane);
  w.xi_at(1) = t_();
  CHECK_THROWS(prolong(w));
}

TEST_CASE("prolonged action examples") {
  // isotropic L0 - F with mu = lambda = 1, n = 3
  int n = 3;
  JetSpace sp{n, false, 1};
  VectorFieldGenerator v = static_dilation(n);
  DiffExpr L = lame_energy(n, 1, 1) - F_();
  DiffExpr lhs = apply_prolonged(prolong(v), L) + L * generator_divergence(v);
  CHECK(lhs == frac(1, 2) * u_dot_Fu(n) - 3 * F_());

  JetSpace st{2, true, 1};
  CHECK(apply_prolonged(prolong(translation_generator(st, 0)), dynamic_lagrangian(2, symbolic_moduli())).is_zero());

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    VectorFieldGenerator r = random_generator(rng, kPlane);
    CHECK(apply_prolonged(prolong(r), DiffExpr(1)).is_zero());
  }
}

TEST_CASE("Noether residual vanishes on random pairs") {
  for (int n : {2, 3}) {
    JetSpace sp{n, false, 1};
    std::mt19937_64 rng(100 + static_cast<unsigned>(n));
    for (int trial = 0; trial < (n == 2 ? 30 : 10); ++trial) {
      VectorFieldGenerator v = random_generator(rng, sp);
      DiffExpr L = random_lagrangian(rng, sp);
      CHECK(noether_residual(v, L).is_zero());
    }
  }
  JetSpace dyn{2, true, 2};
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial)
    CHECK(noether_residual(random_generator(rng, dyn), random_lagrangian(rng, dyn)).is_zero());
}

TEST_CASE("Noether residual vanishes for the scaling pairs") {
  CHECK(noether_residual(static_dilation(2), static_lagrangian(2, symbolic_moduli())).is_zero());
  CHECK(noether_residual(dynamic_dilation(3), dynamic_lagrangian(3, symbolic_moduli())).is_zero());
  CHECK(noether_residual(hamiltonian_dilation(2, 1, 1), coupled_lagrangian_quoted(2, symbolic_moduli())).is_zero());
  CHECK(noether_residual(translation_generator(kPlane, 1), static_lagrangian(2, symbolic_moduli())).is_zero());
}

TEST_CASE("scaling identities") {
  for (int n : {2, 3}) {
    CHECK(derive_static(n).interior() == reference::static_interior(n));
    CHECK(derive_dynamic(n).interior() == reference::dynamic_interior(n));
    CHECK(derive_static(n).euler_sign == -1);
    CHECK(derive_dynamic(n).euler_sign == -1);
  }
  Derivation h = derive_coupled(2, 1, 1);
  CHECK(h.interior() == reference::coupled_interior(2, 1, 1) - 3 * H_());
  CHECK(h.euler_sign == -1);
  CHECK(derive_coupled(2, 1, 1, true).euler_sign == 0);
  CHECK_THROWS(derive_coupled(2, 1, 2));
  CHECK_THROWS(derive_coupled(3, 1, 1));
}

TEST_CASE("Dirichlet boundary forms") {
  for (int n : {2, 3}) {
    Derivation s = derive_static(n);
    CHECK(s.boundary_dirichlet == boundary_normal_form(reference::static_boundary(n, symbolic_moduli()), s.space));
  }
  Derivation d = derive_dynamic(2);
  DiffExpr quoted = boundary_normal_form(reference::dynamic_boundary(2, symbolic_moduli()), d.space);
  DiffExpr spurious = boundary_normal_form(t_() * elastic_form(2, symbolic_moduli(), Field::U, Field::U), d.space);
  CHECK(d.boundary_dirichlet == quoted - spurious);
  Derivation h = derive_coupled(2, 1, 1);
  CHECK(h.boundary_dirichlet == boundary_normal_form(reference::coupled_boundary(2, symbolic_moduli()), h.space));
  CHECK(h.density == reference::coupled_density(2, symbolic_moduli(), 1, 1));
}

TEST_CASE("unit normal reduction") {
  DiffExpr e = pow(nu_(1), 2) + pow(nu_(2), 2);
  CHECK(reduce_unit_normal(e, 2) == DiffExpr(1));
  CHECK(reduce_unit_normal(pow(nu_(2), 4), 2) == reduce_unit_normal(pow(DiffExpr(1) - pow(nu_(1), 2), 2), 2));
}

TEST_CASE("compiled evaluation matches hand evaluation") {
  JetLayout lay(2);
  DiffExpr e = frac(1, 2) * elastic_form(2, symbolic_moduli(), Field::U, Field::U) - F_() + x_(1) * F_u(2);
  auto C = [](int i, int k, int j, int l) {
    return (i == k && j == l ? 0.5 : 0.0) + (i == j && k == l ? 1.0 : 0.0) + (i == l && k == j ? 1.0 : 0.0);
  };
  CompiledExpr c(e, lay, C);
  std::vector<double> jet(static_cast<std::size_t>(lay.size()), 0.0);
  jet[lay.indep(1)] = 0.3;
  jet[lay.d1(Field::U, 1, 1)] = 0.2;
  jet[lay.d1(Field::U, 1, 2)] = -0.4;
  jet[lay.d1(Field::U, 2, 1)] = 0.7;
  jet[lay.d1(Field::U, 2, 2)] = 0.1;
  jet[lay.F()] = 0.05;
  jet[lay.F_u(2)] = 2.0;
  double a11 = 0.2, a12 = -0.4, a21 = 0.7, a22 = 0.1;
  // mu = 1, lambda = 1/2: C a a = |a|^2 + a:a^T + (tr a)^2 / 2
  double caa = (a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22) + (a11 * a11 + 2 * a12 * a21 + a22 * a22) +
               0.5 * (a11 + a22) * (a11 + a22);
  CHECK(c(jet) == doctest::Approx(0.5 * caa - 0.05 + 0.3 * 2.0).epsilon(1e-14));
  CHECK_THROWS(CompiledExpr(uxx(1, 1, 1), lay));
}

#include "elid/symbolic/lagrangians.hpp"

namespace elid::sym {

namespace {

int delta(int a, int b) { return a == b ? 1 : 0; }

DiffExpr grad(Field f, int comp, int dir) { return d1_(f, comp, dir); }

}  // namespace

ModuliFn symbolic_moduli(ModuliSymmetry symmetry) {
  return [symmetry](int i, int k, int j, int l) { return DiffExpr::of(modulus_atom(i, k, j, l, symmetry)); };
}

ModuliFn isotropic_moduli(const Rational& mu, const Rational& lambda) {
  return [mu, lambda](int i, int k, int j, int l) {
    Rational c = lambda * delta(i, k) * delta(j, l) + mu * (delta(i, j) * delta(k, l) + delta(i, l) * delta(k, j));
    return DiffExpr(c);
  };
}

DiffExpr elastic_form(int n, const ModuliFn& C, Field a, Field b) {
  DiffExpr out;
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l) {
          DiffExpr c = C(i, k, j, l);
          if (c.is_zero()) continue;
          out += c * grad(a, i, k) * grad(b, j, l);
        }
  return out;
}

DiffExpr strain_form(int n, const ModuliFn& C) {
  auto e = [](int i, int k) { return frac(1, 2) * (grad(Field::U, i, k) + grad(Field::U, k, i)); };
  DiffExpr out;
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l) {
          DiffExpr c = C(i, k, j, l);
          if (c.is_zero()) continue;
          out += c * e(i, k) * e(j, l);
        }
  return out;
}

DiffExpr kinetic_form(int n, Field a, Field b) {
  DiffExpr out;
  for (int i = 1; i <= n; ++i) out += grad(a, i, 0) * grad(b, i, 0);
  return out;
}

DiffExpr lame_energy(int n, const Rational& mu, const Rational& lambda) {
  DiffExpr sq, div;
  for (int i = 1; i <= n; ++i) {
    div += grad(Field::U, i, i);
    for (int j = 1; j <= n; ++j) sq += pow(grad(Field::U, i, j), 2);
  }
  return Rational(mu / 2) * sq + Rational((mu + lambda) / 2) * pow(div, 2);
}

DiffExpr static_lagrangian(int n, const ModuliFn& C) { return frac(1, 2) * strain_form(n, C) - F_(); }

DiffExpr static_gradient_lagrangian(int n, const ModuliFn& C) {
  return frac(1, 2) * elastic_form(n, C, Field::U, Field::U) - F_();
}

DiffExpr forced_static_lagrangian(int n, const ModuliFn& C) {
  DiffExpr L = static_gradient_lagrangian(n, C);
  for (int i = 1; i <= n; ++i) L -= G_(i) * u_(i);
  return L;
}

DiffExpr dynamic_lagrangian(int n, const ModuliFn& C) {
  return frac(1, 2) * elastic_form(n, C, Field::U, Field::U) - frac(1, 2) * kinetic_form(n, Field::U, Field::U) - F_();
}

DiffExpr coupled_lagrangian_quoted(int n, const ModuliFn& C) {
  return frac(1, 2) * elastic_form(n, C, Field::U, Field::V) - kinetic_form(n, Field::U, Field::V) - H_();
}

DiffExpr coupled_lagrangian(int n, const ModuliFn& C) {
  return elastic_form(n, C, Field::U, Field::V) - kinetic_form(n, Field::U, Field::V) - H_();
}

DiffExpr u_dot_Fu(int n) {
  DiffExpr out;
  for (int k = 1; k <= n; ++k) out += u_(k) * F_u(k);
  return out;
}

DiffExpr u_dot_Hu(int n) {
  DiffExpr out;
  for (int k = 1; k <= n; ++k) out += u_(k) * H_u(k);
  return out;
}

DiffExpr v_dot_Hv(int n) {
  DiffExpr out;
  for (int k = 1; k <= n; ++k) out += v_(k) * H_v(k);
  return out;
}

}  // namespace elid::sym

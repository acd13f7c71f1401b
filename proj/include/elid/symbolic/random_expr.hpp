#pragma once

// Random polynomial expressions, generators and Lagrangians for property checks.

#include <random>
#include <vector>

#include "elid/symbolic/noether.hpp"

namespace elid::sym {

inline Rational random_coef(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
  int p = 0;
  while (p == 0) p = num(rng);
  return frac(p, den(rng));
}

/// Random polynomial of total degree <= max_degree in the given atoms.
inline DiffExpr random_polynomial(std::mt19937_64& rng, const std::vector<Atom>& atoms, int max_degree, int terms) {
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
  std::uniform_int_distribution<int> deg(0, max_degree);
  DiffExpr out;
  for (int t = 0; t < terms; ++t) {
    DiffExpr m = DiffExpr(random_coef(rng));
    int d = deg(rng);
    for (int k = 0; k < d; ++k) m *= DiffExpr::of(atoms[pick(rng)]);
    out += m;
  }
  return out;
}

inline std::vector<Atom> point_atoms(const JetSpace& sp) {
  std::vector<Atom> a;
  for (int d : sp.directions()) a.push_back(Atom::indep(d));
  for (Field f : sp.field_list())
    for (int k = 1; k <= sp.n; ++k) a.push_back(Atom::dep(f, k));
  return a;
}

inline std::vector<Atom> first_order_atoms(const JetSpace& sp, bool with_potential) {
  std::vector<Atom> a = point_atoms(sp);
  for (Field f : sp.field_list())
    for (int k = 1; k <= sp.n; ++k)
      for (int d : sp.directions()) a.push_back(Atom::d1(f, k, d));
  if (with_potential) a.push_back(Atom::func(sp.fields == 2 ? FuncSym::H : FuncSym::F, 0));
  return a;
}

inline VectorFieldGenerator random_generator(std::mt19937_64& rng, const JetSpace& sp) {
  VectorFieldGenerator v(sp);
  auto atoms = point_atoms(sp);
  for (int d : sp.directions()) v.xi_at(d) = random_polynomial(rng, atoms, 2, 3);
  for (Field f : sp.field_list())
    for (int k = 1; k <= sp.n; ++k) v.phi_at(f, k) = random_polynomial(rng, atoms, 2, 3);
  return v;
}

inline DiffExpr random_lagrangian(std::mt19937_64& rng, const JetSpace& sp) {
  return random_polynomial(rng, first_order_atoms(sp, true), 3, 6);
}

}  // namespace elid::sym

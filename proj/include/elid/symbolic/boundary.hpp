#pragma once

#include <vector>

#include "elid/symbolic/calculus.hpp"

namespace elid::sym {

inline DiffExpr nu_(int s) { return DiffExpr::of(Atom::aux(AuxSym::Nu, s)); }
inline DiffExpr w_(Field f, int k) { return DiffExpr::of(Atom::aux(f == Field::U ? AuxSym::W : AuxSym::Wv, k)); }

/// (x, nu).
DiffExpr x_dot_nu(int n);

/// sum_j flux[j] nu_j over spatial directions (flux indexed by direction, 0 = t).
DiffExpr contract_normal(const std::vector<DiffExpr>& flux, int n);

/// Homogeneous Dirichlet data on the boundary: u = v = 0, u_t = v_t = 0 and
/// grad u^k = W^k nu (tangential derivatives vanish).
DiffExpr dirichlet_reduce(const DiffExpr& e, const JetSpace& space);

/// Normal form modulo |nu|^2 = 1 (powers of nu_n above one are eliminated).
DiffExpr reduce_unit_normal(const DiffExpr& e, int n);

/// dirichlet_reduce followed by reduce_unit_normal.
DiffExpr boundary_normal_form(const DiffExpr& e, const JetSpace& space);

}  // namespace elid::sym

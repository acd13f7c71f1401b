#pragma once

#include <functional>

#include "elid/symbolic/calculus.hpp"

namespace elid::sym {

/// Supplies C(i, k, j, l), the coefficient of u^i_k u^j_l, either as a modulus
/// atom or as an exact rational.
using ModuliFn = std::function<DiffExpr(int i, int k, int j, int l)>;

ModuliFn symbolic_moduli(ModuliSymmetry symmetry = ModuliSymmetry::Full);
/// lambda d_ik d_jl + mu (d_ij d_kl + d_il d_kj).
ModuliFn isotropic_moduli(const Rational& mu, const Rational& lambda);

/// sum C(i,k,j,l) a^i_k b^j_l over spatial directions.
DiffExpr elastic_form(int n, const ModuliFn& C, Field a, Field b);
/// sum C(i,k,j,l) e^i_k e^j_l with e^i_k = (u^i_k + u^k_i)/2.
DiffExpr strain_form(int n, const ModuliFn& C);
/// sum_i a^i_t b^i_t.
DiffExpr kinetic_form(int n, Field a, Field b);

/// mu/2 |grad u|^2 + (mu + lambda)/2 (div u)^2.
DiffExpr lame_energy(int n, const Rational& mu, const Rational& lambda);

/// C e e / 2 - F.
DiffExpr static_lagrangian(int n, const ModuliFn& C);
/// C grad u grad u / 2 - F.
DiffExpr static_gradient_lagrangian(int n, const ModuliFn& C);
/// Static Lagrangian with a prescribed source: C grad u grad u / 2 - F - G^i(x) u^i.
DiffExpr forced_static_lagrangian(int n, const ModuliFn& C);
/// C grad u grad u / 2 - |u_t|^2 / 2 - F.
DiffExpr dynamic_lagrangian(int n, const ModuliFn& C);
/// C grad u grad v / 2 - u_t . v_t - H: the coupled form as usually quoted.
DiffExpr coupled_lagrangian_quoted(int n, const ModuliFn& C);
/// C grad u grad v - u_t . v_t - H: the form whose Euler expressions are the coupled system.
DiffExpr coupled_lagrangian(int n, const ModuliFn& C);

/// sum_k s^k dF/ds^k written with the formal partials F_{u^k}.
DiffExpr u_dot_Fu(int n);
DiffExpr u_dot_Hu(int n);
DiffExpr v_dot_Hv(int n);

}  // namespace elid::sym

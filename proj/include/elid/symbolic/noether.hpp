#pragma once

#include <vector>

#include "elid/symbolic/calculus.hpp"

namespace elid::sym {

/// Infinitesimal generator xi^d d/dx_d + phi^{f,k} d/du^{f,k}.
/// xi is indexed by direction (0 = t, unused and zero for static spaces);
/// phi is indexed [field][component - 1].
struct VectorFieldGenerator {
  JetSpace space;
  std::vector<DiffExpr> xi;
  std::vector<std::vector<DiffExpr>> phi;

  explicit VectorFieldGenerator(JetSpace s);

  [[nodiscard]] const DiffExpr& xi_at(int dir) const { return xi.at(static_cast<std::size_t>(dir)); }
  [[nodiscard]] const DiffExpr& phi_at(Field f, int comp) const {
    return phi.at(static_cast<std::size_t>(f)).at(static_cast<std::size_t>(comp - 1));
  }
  DiffExpr& xi_at(int dir) { return xi.at(static_cast<std::size_t>(dir)); }
  DiffExpr& phi_at(Field f, int comp) { return phi.at(static_cast<std::size_t>(f)).at(static_cast<std::size_t>(comp - 1)); }

  /// Coefficients may depend on (t, x, u, v) only.
  void validate() const;
};

struct ProlongedField {
  VectorFieldGenerator base;
  /// phi_d[field][comp - 1][dir]
  std::vector<std::vector<std::vector<DiffExpr>>> phi_d;

  [[nodiscard]] const DiffExpr& at(Field f, int comp, int dir) const {
    return phi_d.at(static_cast<std::size_t>(f)).at(static_cast<std::size_t>(comp - 1)).at(static_cast<std::size_t>(dir));
  }
};

ProlongedField prolong(const VectorFieldGenerator& v);

/// pr^(1) v (L).
DiffExpr apply_prolonged(const ProlongedField& pv, const DiffExpr& L);

/// sum_d D_d xi^d.
DiffExpr generator_divergence(const VectorFieldGenerator& v);

/// Characteristic Q^{f,k} = phi^{f,k} - u^{f,k}_d xi^d.
DiffExpr characteristic(const VectorFieldGenerator& v, Field f, int comp);

/// pr v(L) + L Div xi - E(L).Q - Div P; identically zero.
DiffExpr noether_residual(const VectorFieldGenerator& v, const DiffExpr& L);

/// Both sides of the Noether identity, split the way integral identities use them:
/// interior = pr v(L) + L Div xi,  interior = euler_term + sum_d D_d flux[d].
struct ScalingIdentity {
  DiffExpr interior;
  DiffExpr euler_term;
  std::vector<DiffExpr> flux;  ///< indexed by direction, flux[0] is the t-component
};

ScalingIdentity derive_scaling_identity(const VectorFieldGenerator& v, const DiffExpr& L);

// Generators used by the elastic identities.
VectorFieldGenerator translation_generator(const JetSpace& space, int dir);
/// x_i d/dx_i + ((2 - n)/2) u^i d/du^i
VectorFieldGenerator static_dilation(int n);
/// t d/dt + x_i d/dx_i + ((1 - n)/2) u^i d/du^i
VectorFieldGenerator dynamic_dilation(int n);
/// t d/dt + x_i d/dx_i + (a(1 - n)/2) u^i d/du^i + (b(1 - n)/2) v^i d/dv^i
VectorFieldGenerator hamiltonian_dilation(int n, const Rational& a, const Rational& b);

}  // namespace elid::sym

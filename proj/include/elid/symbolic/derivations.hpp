#pragma once

#include <string>
#include <vector>

#include "elid/symbolic/boundary.hpp"
#include "elid/symbolic/lagrangians.hpp"
#include "elid/symbolic/noether.hpp"

namespace elid::sym {

/// Side-by-side coefficients of a quoted expression and its machine derivation.
struct CoefficientRow {
  Monomial monomial;
  Rational reference;
  Rational derived;
};

struct CoefficientTable {
  std::string title;
  std::vector<CoefficientRow> rows;

  [[nodiscard]] bool agrees() const;
  [[nodiscard]] std::string str() const;
};

CoefficientTable compare_coefficients(std::string title, const DiffExpr& reference, const DiffExpr& derived);

/// Quoted forms of the scaling identities, typed in as they are usually stated.
/// Boundary forms are integrands of the boundary integral on the right-hand side.
namespace reference {
DiffExpr static_interior(int n);
DiffExpr static_boundary(int n, const ModuliFn& C);
DiffExpr static_system(int n, const ModuliFn& C, int comp);
DiffExpr dynamic_interior(int n);
DiffExpr dynamic_density(int n, const ModuliFn& C);
DiffExpr dynamic_boundary(int n, const ModuliFn& C);
DiffExpr dynamic_system(int n, const ModuliFn& C, int comp);
DiffExpr coupled_interior(int n, const Rational& a, const Rational& b);
DiffExpr coupled_density(int n, const ModuliFn& C, const Rational& a, const Rational& b);
DiffExpr coupled_boundary(int n, const ModuliFn& C);
}  // namespace reference

/// One machine derivation of an integral identity:
///   static:   int interior dx = int boundary ds
///   dynamic:  d/dt int density dx = int interior dx + int boundary ds
/// with boundary = +P.nu (static) or -P_x.nu (dynamic).
struct Derivation {
  std::string id;
  JetSpace space;
  VectorFieldGenerator generator;
  DiffExpr lagrangian;
  ProlongedField prolonged;
  ScalingIdentity identity;
  DiffExpr density;
  DiffExpr boundary;
  DiffExpr boundary_dirichlet;
  /// +1 or -1 relating the Euler expressions of `lagrangian` to the quoted system; 0 if unrelated.
  int euler_sign{0};
  std::vector<CoefficientTable> tables;

  Derivation(std::string name, JetSpace sp, VectorFieldGenerator v, DiffExpr L);
  [[nodiscard]] const DiffExpr& interior() const { return identity.interior; }
};

Derivation derive_static(int n, ModuliSymmetry symmetry = ModuliSymmetry::Full);
/// Static identity for L - G(x).u; the explicit x-dependence of G enters the interior term.
Derivation derive_static_forced(int n, ModuliSymmetry symmetry = ModuliSymmetry::Full);
Derivation derive_dynamic(int n, ModuliSymmetry symmetry = ModuliSymmetry::Full);
/// `quoted` selects C grad u grad v / 2 - u_t.v_t - H instead of C grad u grad v - u_t.v_t - H.
Derivation derive_coupled(int n, const Rational& a, const Rational& b, bool quoted = false,
                          ModuliSymmetry symmetry = ModuliSymmetry::Full);

/// Deterministic text log of a derivation and its comparison tables.
std::string derivation_log(const Derivation& d);

}  // namespace elid::sym

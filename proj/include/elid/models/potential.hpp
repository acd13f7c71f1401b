#pragma once

#include <optional>
#include <string>
#include <vector>

#include "elid/symbolic/diff_expr.hpp"

namespace elid {

using sym::Rational;

enum class PotentialKind { Zero, Quadratic, Power, Polynomial, Tabulated };

/// One monomial coef * s_1^e1 ... s_n^en of a polynomial potential.
struct PolyTerm {
  Rational coef;
  std::vector<int> exponents;
};

/// Radial table: F(s) = phi(|s|) with phi and phi' given at increasing radii starting at 0.
struct RadialTable {
  std::vector<double> r;
  std::vector<double> value;
  std::vector<double> slope;
};

/// Body-force potential F(s), normalized so that F(0) = 0.
class BodyForcePotential {
 public:
  BodyForcePotential() = default;

  static BodyForcePotential zero();
  /// kappa |s|^2 / 2
  static BodyForcePotential quadratic(const Rational& kappa);
  /// c (|s|^2)^(p/2), p >= 2
  static BodyForcePotential power(const Rational& c, const Rational& p);
  static BodyForcePotential polynomial(std::vector<PolyTerm> terms);
  static BodyForcePotential tabulated(RadialTable table);

  [[nodiscard]] PotentialKind kind() const { return kind_; }
  [[nodiscard]] const Rational& coefficient() const { return coef_; }
  [[nodiscard]] const Rational& exponent() const { return exponent_; }
  [[nodiscard]] const std::vector<PolyTerm>& terms() const { return terms_; }
  [[nodiscard]] const RadialTable& table() const { return table_; }

  [[nodiscard]] double value(const std::vector<double>& s) const;
  /// f_i = dF/ds^i
  [[nodiscard]] std::vector<double> gradient(const std::vector<double>& s) const;
  /// Row-major n x n matrix of second partials.
  [[nodiscard]] std::vector<double> hessian(const std::vector<double>& s) const;

  /// F as a polynomial in u^1..u^n (nullopt for non-polynomial kinds).
  [[nodiscard]] std::optional<sym::DiffExpr> symbolic(int n) const;
  [[nodiscard]] std::optional<sym::DiffExpr> symbolic_gradient(int n, int i) const;

  /// True when f is linear in s (zero or quadratic kinds).
  [[nodiscard]] bool is_linear() const { return kind_ == PotentialKind::Zero || kind_ == PotentialKind::Quadratic; }
  [[nodiscard]] std::string describe() const;

 private:
  PotentialKind kind_{PotentialKind::Zero};
  Rational coef_{0};
  Rational exponent_{2};
  double coef_d_{0.0};
  double exponent_d_{2.0};
  std::vector<PolyTerm> terms_;
  RadialTable table_;
};

/// ((n-2)/2) s.f(s) - n F(s)
double scaling_deficit(const BodyForcePotential& F, const std::vector<double>& s, int n);

enum class CouplingKind { Zero, Bilinear, DotPower };

/// Coupling potential H(u, v) of the Hamiltonian system, with H(0, 0) = 0.
class CouplingPotential {
 public:
  CouplingPotential() = default;
  static CouplingPotential zero();
  /// c u.v
  static CouplingPotential bilinear(const Rational& c);
  /// c (u.v)^m, m >= 1
  static CouplingPotential dot_power(const Rational& c, int m);

  [[nodiscard]] CouplingKind kind() const { return kind_; }
  [[nodiscard]] double value(const std::vector<double>& u, const std::vector<double>& v) const;
  [[nodiscard]] std::vector<double> grad_u(const std::vector<double>& u, const std::vector<double>& v) const;
  [[nodiscard]] std::vector<double> grad_v(const std::vector<double>& u, const std::vector<double>& v) const;
  [[nodiscard]] bool is_bilinear() const { return kind_ != CouplingKind::DotPower || power_ == 1; }
  [[nodiscard]] std::string describe() const;

 private:
  CouplingKind kind_{CouplingKind::Zero};
  Rational coef_{0};
  int power_{1};
  double coef_d_{0.0};
};

}  // namespace elid

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace elid::sym {

using Rational = mpq_class;

/// Parses "3", "-1/2", "0.25", "1e-3" or "2.5e2" into an exact rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
/// Canonical num/den.
Rational frac(long num, long den = 1);

enum class Field : int8_t { U = 0, V = 1 };

/// Opaque scalar functions. F = F(u), H = H(u, v), G = G^i(x) (a prescribed source).
enum class FuncSym : int8_t { F = 0, H = 1, G = 2 };

/// Constant symbols used in boundary reductions: W^k = normal derivative of u^k,
/// Wv^k = normal derivative of v^k, Nu_s = outward unit normal.
enum class AuxSym : int8_t { W = 0, Wv = 1, Nu = 2 };

// Kind order fixes the monomial order and therefore the printed normal form.
enum class AtomKind : int8_t { Indep = 0, Dep = 1, D1 = 2, D2 = 3, Func = 4, Modulus = 5, Aux = 6 };

/// Derivative directions are 0 = t and 1..n = x_1..x_n; components are 1-based.
struct Atom {
  AtomKind kind{AtomKind::Indep};
  std::array<int8_t, 4> idx{-1, -1, -1, -1};

  auto operator<=>(const Atom&) const = default;

  static Atom indep(int dir);
  static Atom dep(Field f, int comp);
  static Atom d1(Field f, int comp, int dir);
  static Atom d2(Field f, int comp, int dir_a, int dir_b);
  /// `args` are argument codes (see arg_code); at most two.
  static Atom func(FuncSym s, int comp, std::vector<int> args = {});
  static Atom aux(AuxSym s, int comp);

  [[nodiscard]] Field field() const { return static_cast<Field>(idx[0]); }
  [[nodiscard]] int comp() const { return idx[1]; }
  [[nodiscard]] FuncSym func_sym() const { return static_cast<FuncSym>(idx[0]); }
  [[nodiscard]] int func_order() const { return (idx[2] >= 0) + (idx[3] >= 0); }
  [[nodiscard]] bool is_constant() const { return kind == AtomKind::Modulus || kind == AtomKind::Aux; }

  [[nodiscard]] std::string name() const;
};

/// Argument codes identify the jet coordinate a formal partial is taken with respect to.
int arg_code(const Atom& coordinate);
Atom coordinate_from_code(int code);

/// Elastic modulus symbol C^{kl}_{ij} stored as (i, k, j, l): it multiplies u^i_k u^j_l.
enum class ModuliSymmetry { Full, MajorOnly };
Atom modulus_atom(int i, int k, int j, int l, ModuliSymmetry symmetry = ModuliSymmetry::Full);

struct Factor {
  Atom atom;
  int power{1};
  auto operator<=>(const Factor&) const = default;
};

using Monomial = std::vector<Factor>;

class DiffExpr {
 public:
  using TermMap = std::map<Monomial, Rational>;

  DiffExpr() = default;
  DiffExpr(const Rational& c);  // NOLINT(google-explicit-constructor)
  DiffExpr(long c) : DiffExpr(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  DiffExpr(int c) : DiffExpr(Rational(c)) {}   // NOLINT(google-explicit-constructor)

  static DiffExpr of(const Atom& a, int power = 1);
  static DiffExpr from_terms(TermMap terms);

  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] Rational coefficient(const Monomial& m) const;
  [[nodiscard]] std::optional<Rational> as_constant() const;

  /// Highest derivative order among atoms (0 when no derivative atoms occur).
  [[nodiscard]] int derivative_order() const;
  [[nodiscard]] bool any_atom(const std::function<bool(const Atom&)>& pred) const;

  /// Deterministic text dump: monomials in canonical order, rationals exact.
  [[nodiscard]] std::string str() const;

  DiffExpr& operator+=(const DiffExpr& o);
  DiffExpr& operator-=(const DiffExpr& o);
  DiffExpr& operator*=(const DiffExpr& o);
  DiffExpr& operator*=(const Rational& c);

  friend DiffExpr operator+(DiffExpr a, const DiffExpr& b) { return a += b; }
  friend DiffExpr operator-(DiffExpr a, const DiffExpr& b) { return a -= b; }
  friend DiffExpr operator*(DiffExpr a, const DiffExpr& b) { return a *= b; }
  friend DiffExpr operator*(const Rational& c, DiffExpr a) { return a *= c; }
  friend DiffExpr operator*(int c, DiffExpr a) { return a *= Rational(c); }
  friend DiffExpr operator-(DiffExpr a) { return a *= Rational(-1); }
  friend bool operator==(const DiffExpr& a, const DiffExpr& b) { return a.terms_ == b.terms_; }

  void add_term(const Monomial& m, const Rational& c);

 private:
  TermMap terms_;
};

DiffExpr pow(const DiffExpr& e, int k);

/// Re-sorts and merges an arbitrary factor list into canonical monomial form.
Monomial normalize_monomial(Monomial m);
/// Rebuilds every monomial through normalize_monomial; identity on normal forms.
DiffExpr normalize(const DiffExpr& e);

/// Replaces atoms by expressions; atoms for which `rule` returns nullopt are kept.
DiffExpr substitute(const DiffExpr& e, const std::function<std::optional<DiffExpr>(const Atom&)>& rule);

// Short constructors.
inline DiffExpr t_() { return DiffExpr::of(Atom::indep(0)); }
inline DiffExpr x_(int j) { return DiffExpr::of(Atom::indep(j)); }
inline DiffExpr u_(int k) { return DiffExpr::of(Atom::dep(Field::U, k)); }
inline DiffExpr v_(int k) { return DiffExpr::of(Atom::dep(Field::V, k)); }
inline DiffExpr dep_(Field f, int k) { return DiffExpr::of(Atom::dep(f, k)); }
inline DiffExpr d1_(Field f, int k, int dir) { return DiffExpr::of(Atom::d1(f, k, dir)); }
inline DiffExpr d2_(Field f, int k, int a, int b) { return DiffExpr::of(Atom::d2(f, k, a, b)); }
DiffExpr F_();
DiffExpr F_u(int k);
DiffExpr H_();
DiffExpr H_u(int k);
DiffExpr H_v(int k);
DiffExpr G_(int i);

class OrderError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace elid::sym

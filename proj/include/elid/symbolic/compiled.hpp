#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "elid/symbolic/diff_expr.hpp"

namespace elid::sym {

/// Fixed slot numbering for numeric jets of (t, x, u, v, first derivatives,
/// potential values and boundary symbols) in dimension n.
class JetLayout {
 public:
  explicit JetLayout(int n);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int size() const { return size_; }

  [[nodiscard]] int indep(int dir) const { return dir; }
  [[nodiscard]] int dep(Field f, int comp) const { return dep_ + static_cast<int>(f) * n_ + comp - 1; }
  [[nodiscard]] int d1(Field f, int comp, int dir) const {
    return d1_ + (static_cast<int>(f) * n_ + comp - 1) * (n_ + 1) + dir;
  }
  [[nodiscard]] int F() const { return f_; }
  [[nodiscard]] int F_u(int k) const { return f_ + k; }
  [[nodiscard]] int H() const { return h_; }
  [[nodiscard]] int H_u(int k) const { return h_ + k; }
  [[nodiscard]] int H_v(int k) const { return h_ + n_ + k; }
  [[nodiscard]] int G(int i) const { return g_ + (i - 1) * (n_ + 1); }
  [[nodiscard]] int G_x(int i, int j) const { return g_ + (i - 1) * (n_ + 1) + j; }
  [[nodiscard]] int aux(AuxSym s, int comp) const { return aux_ + static_cast<int>(s) * n_ + comp - 1; }

  /// Slot of a jet, potential or boundary atom; throws for moduli and second derivatives.
  [[nodiscard]] int slot(const Atom& a) const;

 private:
  int n_;
  int dep_, d1_, f_, h_, g_, aux_, size_;
};

/// Numeric moduli C(i, k, j, l) used to fold modulus atoms into coefficients.
using NumericModuli = std::function<double(int i, int k, int j, int l)>;

/// A DiffExpr lowered to double arithmetic over a JetLayout.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  CompiledExpr(const DiffExpr& e, const JetLayout& layout, const NumericModuli& moduli = {});

  [[nodiscard]] double operator()(const std::vector<double>& jet) const;
  [[nodiscard]] std::size_t term_count() const { return terms_.size(); }

 private:
  struct Term {
    double coef;
    std::vector<std::pair<int, int>> factors;
  };
  std::vector<Term> terms_;
};

}  // namespace elid::sym

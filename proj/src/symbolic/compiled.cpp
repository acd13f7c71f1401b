#include "elid/symbolic/compiled.hpp"

#include <map>
#include <stdexcept>

namespace elid::sym {

JetLayout::JetLayout(int n) : n_(n) {
  dep_ = n + 1;
  d1_ = dep_ + 2 * n;
  f_ = d1_ + 2 * n * (n + 1);
  h_ = f_ + n + 1;
  g_ = h_ + 2 * n + 1;
  aux_ = g_ + n * (n + 1);
  size_ = aux_ + 3 * n;
}

int JetLayout::slot(const Atom& a) const {
  switch (a.kind) {
    case AtomKind::Indep:
      return indep(a.idx[0]);
    case AtomKind::Dep:
      return dep(a.field(), a.comp());
    case AtomKind::D1:
      return d1(a.field(), a.comp(), a.idx[2]);
    case AtomKind::Func: {
      if (a.func_order() > 1) throw OrderError("compiled expressions support first formal partials only");
      if (a.func_order() == 0) {
        if (a.func_sym() == FuncSym::F) return F();
        if (a.func_sym() == FuncSym::H) return H();
        return G(a.comp());
      }
      Atom c = coordinate_from_code(a.idx[2]);
      if (a.func_sym() == FuncSym::G) return G_x(a.comp(), c.idx[0]);
      if (a.func_sym() == FuncSym::F) return F_u(c.comp());
      return c.field() == Field::U ? H_u(c.comp()) : H_v(c.comp());
    }
    case AtomKind::Aux:
      return aux(static_cast<AuxSym>(a.idx[0]), a.idx[1]);
    case AtomKind::D2:
    case AtomKind::Modulus:
      break;
  }
  throw std::invalid_argument("atom " + a.name() + " has no numeric slot");
}

CompiledExpr::CompiledExpr(const DiffExpr& e, const JetLayout& layout, const NumericModuli& moduli) {
  std::map<std::vector<std::pair<int, int>>, double> merged;
  for (const auto& [m, c] : e.terms()) {
    double coef = c.get_d();
    std::vector<std::pair<int, int>> factors;
    for (const Factor& f : m) {
      if (f.atom.kind == AtomKind::Modulus) {
        if (!moduli) throw std::invalid_argument("modulus atom without numeric moduli");
        double cv = moduli(f.atom.idx[0], f.atom.idx[1], f.atom.idx[2], f.atom.idx[3]);
        for (int p = 0; p < f.power; ++p) coef *= cv;
      } else {
        factors.emplace_back(layout.slot(f.atom), f.power);
      }
    }
    merged[factors] += coef;
  }
  for (auto& [factors, coef] : merged)
    if (coef != 0.0) terms_.push_back({coef, factors});
}

double CompiledExpr::operator()(const std::vector<double>& jet) const {
  double sum = 0.0;
  for (const Term& t : terms_) {
    double v = t.coef;
    for (const auto& [s, p] : t.factors) {
      double x = jet[static_cast<std::size_t>(s)];
      for (int k = 0; k < p; ++k) v *= x;
    }
    sum += v;
  }
  return sum;
}

}  // namespace elid::sym

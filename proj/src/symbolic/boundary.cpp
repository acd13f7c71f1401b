#include "elid/symbolic/boundary.hpp"

namespace elid::sym {

DiffExpr x_dot_nu(int n) {
  DiffExpr out;
  for (int s = 1; s <= n; ++s) out += x_(s) * nu_(s);
  return out;
}

DiffExpr contract_normal(const std::vector<DiffExpr>& flux, int n) {
  DiffExpr out;
  for (int j = 1; j <= n; ++j) out += flux.at(static_cast<std::size_t>(j)) * nu_(j);
  return out;
}

DiffExpr dirichlet_reduce(const DiffExpr& e, const JetSpace& space) {
  if (e.derivative_order() > 1) throw OrderError("boundary reduction expects first-order expressions");
  return substitute(e, [&](const Atom& a) -> std::optional<DiffExpr> {
    switch (a.kind) {
      case AtomKind::Dep:
        return DiffExpr();
      case AtomKind::D1:
        if (a.idx[2] == 0) return DiffExpr();
        return w_(a.field(), a.comp()) * nu_(a.idx[2]);
      case AtomKind::Func:
        // F(0) = 0 and H(0, 0) = 0; partials at the origin stay symbolic.
        if (a.func_sym() != FuncSym::G && a.func_order() == 0) return DiffExpr();
        return std::nullopt;
      default:
        (void)space;
        return std::nullopt;
    }
  });
}

DiffExpr reduce_unit_normal(const DiffExpr& e, int n) {
  const Atom last = Atom::aux(AuxSym::Nu, n);
  DiffExpr rest(1);
  for (int s = 1; s < n; ++s) rest -= pow(nu_(s), 2);
  DiffExpr out;
  DiffExpr pending = e;
  while (!pending.is_zero()) {
    DiffExpr next;
    for (const auto& [m, c] : pending.terms()) {
      int p = 0;
      Monomial other;
      for (const Factor& f : m) {
        if (f.atom == last)
          p = f.power;
        else
          other.push_back(f);
      }
      if (p < 2) {
        out.add_term(m, c);
        continue;
      }
      DiffExpr t;
      Monomial reduced = other;
      if (p - 2 > 0) reduced.push_back({last, p - 2});
      t.add_term(normalize_monomial(reduced), c);
      next += t * rest;
    }
    pending = std::move(next);
  }
  return out;
}

DiffExpr boundary_normal_form(const DiffExpr& e, const JetSpace& space) {
  return reduce_unit_normal(dirichlet_reduce(e, space), space.n);
}

}  // namespace elid::sym

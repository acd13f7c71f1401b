#include "elid/symbolic/noether.hpp"

namespace elid::sym {

VectorFieldGenerator::VectorFieldGenerator(JetSpace s) : space(s) {
  space.validate();
  xi.assign(static_cast<std::size_t>(space.n + 1), DiffExpr());
  phi.assign(static_cast<std::size_t>(space.fields), std::vector<DiffExpr>(static_cast<std::size_t>(space.n)));
}

void VectorFieldGenerator::validate() const {
  auto bad = [&](const Atom& a) {
    if (a.kind == AtomKind::D1 || a.kind == AtomKind::D2 || a.kind == AtomKind::Func) return true;
    if (a.kind == AtomKind::Indep && a.idx[0] == 0 && !space.time) return true;
    if (a.kind == AtomKind::Dep && static_cast<int>(a.field()) >= space.fields) return true;
    return false;
  };
  for (const auto& c : xi)
    if (c.any_atom(bad)) throw std::invalid_argument("generator coefficients must depend on (t, x, u) only");
  for (const auto& row : phi)
    for (const auto& c : row)
      if (c.any_atom(bad)) throw std::invalid_argument("generator coefficients must depend on (t, x, u) only");
  if (!space.time && !xi[0].is_zero()) throw std::invalid_argument("static generator with a time component");
}

ProlongedField prolong(const VectorFieldGenerator& v) {
  v.validate();
  const JetSpace& sp = v.space;
  ProlongedField pv{v, {}};
  pv.phi_d.assign(static_cast<std::size_t>(sp.fields),
                  std::vector<std::vector<DiffExpr>>(static_cast<std::size_t>(sp.n),
                                                     std::vector<DiffExpr>(static_cast<std::size_t>(sp.n + 1))));
  std::vector<std::vector<DiffExpr>> dxi(static_cast<std::size_t>(sp.n + 1));
  for (int d : sp.directions()) {
    auto& row = dxi[static_cast<std::size_t>(d)];
    row.resize(static_cast<std::size_t>(sp.n + 1));
    for (int e : sp.directions()) row[static_cast<std::size_t>(e)] = total_derivative(v.xi_at(e), d, sp);
  }
  for (Field f : sp.field_list())
    for (int k = 1; k <= sp.n; ++k)
      for (int d : sp.directions()) {
        DiffExpr c = total_derivative(v.phi_at(f, k), d, sp);
        for (int e : sp.directions())
          c -= dxi[static_cast<std::size_t>(d)][static_cast<std::size_t>(e)] * d1_(f, k, e);
        pv.phi_d[static_cast<std::size_t>(f)][static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(d)] = std::move(c);
      }
  return pv;
}

DiffExpr apply_prolonged(const ProlongedField& pv, const DiffExpr& L) {
  const JetSpace& sp = pv.base.space;
  if (L.derivative_order() > 1) throw OrderError("first prolongation acts on first-order Lagrangians");
  DiffExpr out;
  for (int d : sp.directions()) {
    const DiffExpr& xi = pv.base.xi_at(d);
    if (!xi.is_zero()) out += xi * partial_coordinate(L, Atom::indep(d), sp);
  }
  for (Field f : sp.field_list())
    for (int k = 1; k <= sp.n; ++k) {
      const DiffExpr& phi = pv.base.phi_at(f, k);
      if (!phi.is_zero()) out += phi * partial_coordinate(L, Atom::dep(f, k), sp);
      for (int d : sp.directions()) {
        const DiffExpr& pd = pv.at(f, k, d);
        if (!pd.is_zero()) out += pd * partial_atom(L, Atom::d1(f, k, d));
      }
    }
  return out;
}

DiffExpr generator_divergence(const VectorFieldGenerator& v) {
  DiffExpr out;
  for (int d : v.space.directions()) out += total_derivative(v.xi_at(d), d, v.space);
  return out;
}

DiffExpr characteristic(const VectorFieldGenerator& v, Field f, int comp) {
  DiffExpr q = v.phi_at(f, comp);
  for (int d : v.space.directions()) q -= d1_(f, comp, d) * v.xi_at(d);
  return q;
}

ScalingIdentity derive_scaling_identity(const VectorFieldGenerator& v, const DiffExpr& L) {
  const JetSpace& sp = v.space;
  ProlongedField pv = prolong(v);
  ScalingIdentity id;
  id.interior = apply_prolonged(pv, L) + L * generator_divergence(v);
  id.flux.assign(static_cast<std::size_t>(sp.n + 1), DiffExpr());
  for (int d : sp.directions()) id.flux[static_cast<std::size_t>(d)] = L * v.xi_at(d);
  for (Field f : sp.field_list())
    for (int k = 1; k <= sp.n; ++k) {
      DiffExpr q = characteristic(v, f, k);
      id.euler_term += euler_operator(L, f, k, sp) * q;
      for (int d : sp.directions()) id.flux[static_cast<std::size_t>(d)] += partial_atom(L, Atom::d1(f, k, d)) * q;
    }
  return id;
}

DiffExpr noether_residual(const VectorFieldGenerator& v, const DiffExpr& L) {
  ScalingIdentity id = derive_scaling_identity(v, L);
  DiffExpr r = id.interior - id.euler_term;
  for (int d : v.space.directions()) r -= total_derivative(id.flux[static_cast<std::size_t>(d)], d, v.space);
  return r;
}

VectorFieldGenerator translation_generator(const JetSpace& space, int dir) {
  VectorFieldGenerator v(space);
  v.xi_at(dir) = DiffExpr(1);
  return v;
}

VectorFieldGenerator static_dilation(int n) {
  VectorFieldGenerator v(JetSpace{n, false, 1});
  for (int j = 1; j <= n; ++j) v.xi_at(j) = x_(j);
  for (int k = 1; k <= n; ++k) v.phi_at(Field::U, k) = frac(2 - n, 2) * u_(k);
  return v;
}

VectorFieldGenerator dynamic_dilation(int n) {
  VectorFieldGenerator v(JetSpace{n, true, 1});
  v.xi_at(0) = t_();
  for (int j = 1; j <= n; ++j) v.xi_at(j) = x_(j);
  for (int k = 1; k <= n; ++k) v.phi_at(Field::U, k) = frac(1 - n, 2) * u_(k);
  return v;
}

VectorFieldGenerator hamiltonian_dilation(int n, const Rational& a, const Rational& b) {
  VectorFieldGenerator v(JetSpace{n, true, 2});
  v.xi_at(0) = t_();
  for (int j = 1; j <= n; ++j) v.xi_at(j) = x_(j);
  Rational wu = a * frac(1 - n, 2);
  Rational wv = b * frac(1 - n, 2);
  for (int k = 1; k <= n; ++k) {
    v.phi_at(Field::U, k) = wu * u_(k);
    v.phi_at(Field::V, k) = wv * v_(k);
  }
  return v;
}

}  // namespace elid::sym

#include "elid/symbolic/calculus.hpp"

#include <algorithm>

namespace elid::sym {

std::vector<int> JetSpace::directions() const {
  std::vector<int> d;
  if (time) d.push_back(0);
  for (int j = 1; j <= n; ++j) d.push_back(j);
  return d;
}

std::vector<Field> JetSpace::field_list() const {
  if (fields == 2) return {Field::U, Field::V};
  return {Field::U};
}

void JetSpace::validate() const {
  if (n < 2 || n > 4) throw std::invalid_argument("spatial dimension must be 2, 3 or 4");
  if (fields != 1 && fields != 2) throw std::invalid_argument("one or two dependent fields are supported");
}

std::vector<Atom> function_arguments(FuncSym s, const JetSpace& space) {
  std::vector<Atom> args;
  switch (s) {
    case FuncSym::F:
      for (int k = 1; k <= space.n; ++k) args.push_back(Atom::dep(Field::U, k));
      break;
    case FuncSym::H:
      for (int k = 1; k <= space.n; ++k) args.push_back(Atom::dep(Field::U, k));
      for (int k = 1; k <= space.n; ++k) args.push_back(Atom::dep(Field::V, k));
      break;
    case FuncSym::G:
      for (int j = 1; j <= space.n; ++j) args.push_back(Atom::indep(j));
      break;
  }
  return args;
}

namespace {

std::vector<int> func_args_of(const Atom& a) {
  std::vector<int> args;
  for (int m = 2; m < 4; ++m)
    if (a.idx[m] >= 0) args.push_back(a.idx[m]);
  return args;
}

Atom extend_func(const Atom& a, const Atom& coordinate) {
  auto args = func_args_of(a);
  args.push_back(arg_code(coordinate));
  return Atom::func(a.func_sym(), a.comp(), std::move(args));
}

bool depends_on(const Atom& func, const Atom& coordinate, const JetSpace& space) {
  auto args = function_arguments(func.func_sym(), space);
  return std::find(args.begin(), args.end(), coordinate) != args.end();
}

}  // namespace

DiffExpr differentiate(const DiffExpr& e, const std::function<DiffExpr(const Atom&)>& datom) {
  std::map<Atom, DiffExpr> cache;
  DiffExpr out;
  for (const auto& [m, c] : e.terms()) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      const Factor& f = m[i];
      auto it = cache.find(f.atom);
      if (it == cache.end()) it = cache.emplace(f.atom, datom(f.atom)).first;
      const DiffExpr& d = it->second;
      if (d.is_zero()) continue;
      Monomial rest = m;
      if (--rest[i].power == 0) rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      DiffExpr term;
      term.add_term(rest, c * f.power);
      term *= d;
      out += term;
    }
  }
  return out;
}

DiffExpr total_derivative(const DiffExpr& e, int dir, const JetSpace& space) {
  if (dir == 0 && !space.time) throw std::invalid_argument("time derivative in a static jet space");
  std::function<DiffExpr(const Atom&)> coordinate_derivative = [&](const Atom& c) -> DiffExpr {
    if (c.kind == AtomKind::Indep) return c.idx[0] == dir ? DiffExpr(1) : DiffExpr();
    return DiffExpr::of(Atom::d1(c.field(), c.comp(), dir));
  };
  return differentiate(e, [&](const Atom& a) -> DiffExpr {
    switch (a.kind) {
      case AtomKind::Indep:
      case AtomKind::Dep:
        return coordinate_derivative(a);
      case AtomKind::D1:
        return DiffExpr::of(Atom::d2(a.field(), a.comp(), a.idx[2], dir));
      case AtomKind::D2:
        throw OrderError("total derivative of a second-order expression exceeds the represented jet order");
      case AtomKind::Func: {
        DiffExpr out;
        for (const Atom& arg : function_arguments(a.func_sym(), space)) {
          DiffExpr darg = coordinate_derivative(arg);
          if (darg.is_zero()) continue;
          out += DiffExpr::of(extend_func(a, arg)) * darg;
        }
        return out;
      }
      case AtomKind::Modulus:
      case AtomKind::Aux:
        return DiffExpr();
    }
    return DiffExpr();
  });
}

DiffExpr partial_coordinate(const DiffExpr& e, const Atom& coordinate, const JetSpace& space) {
  if (coordinate.kind != AtomKind::Indep && coordinate.kind != AtomKind::Dep)
    throw std::invalid_argument("partial_coordinate expects an independent or dependent coordinate");
  return differentiate(e, [&](const Atom& a) -> DiffExpr {
    if (a == coordinate) return DiffExpr(1);
    if (a.kind == AtomKind::Func && depends_on(a, coordinate, space)) return DiffExpr::of(extend_func(a, coordinate));
    return DiffExpr();
  });
}

DiffExpr partial_atom(const DiffExpr& e, const Atom& target) {
  return differentiate(e, [&](const Atom& a) { return a == target ? DiffExpr(1) : DiffExpr(); });
}

DiffExpr euler_operator(const DiffExpr& L, Field f, int comp, const JetSpace& space) {
  if (L.derivative_order() > 1) throw OrderError("Euler operator expects a first-order Lagrangian");
  DiffExpr out = partial_coordinate(L, Atom::dep(f, comp), space);
  for (int d : space.directions()) out -= total_derivative(partial_atom(L, Atom::d1(f, comp, d)), d, space);
  return out;
}

}  // namespace elid::sym

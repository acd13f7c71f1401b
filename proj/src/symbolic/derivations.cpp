#include "elid/symbolic/derivations.hpp"

#include <iomanip>
#include <set>
#include <sstream>

namespace elid::sym {

namespace {

std::string monomial_str(const Monomial& m) {
  DiffExpr e;
  e.add_term(m, Rational(1));
  return e.str();
}

int proportionality_sign(const DiffExpr& machine, const DiffExpr& quoted) {
  if (machine == quoted) return 1;
  if (machine == -quoted) return -1;
  return 0;
}

DiffExpr x_dot_grad(int n, Field f, int comp) {
  DiffExpr out;
  for (int k = 1; k <= n; ++k) out += x_(k) * d1_(f, comp, k);
  return out;
}

}  // namespace

bool CoefficientTable::agrees() const {
  for (const auto& r : rows)
    if (r.reference != r.derived) return false;
  return true;
}

std::string CoefficientTable::str() const {
  std::ostringstream os;
  os << "table: " << title << (agrees() ? " [agree]" : " [differ]") << "\n";
  os << "  " << std::left << std::setw(34) << "monomial" << std::setw(12) << "reference" << std::setw(12) << "derived"
     << "status\n";
  for (const auto& r : rows) {
    os << "  " << std::left << std::setw(34) << monomial_str(r.monomial) << std::setw(12) << r.reference.get_str()
       << std::setw(12) << r.derived.get_str() << (r.reference == r.derived ? "same" : "DIFF") << "\n";
  }
  return os.str();
}

CoefficientTable compare_coefficients(std::string title, const DiffExpr& reference, const DiffExpr& derived) {
  CoefficientTable t{std::move(title), {}};
  std::set<Monomial> keys;
  for (const auto& [m, c] : reference.terms()) keys.insert(m);
  for (const auto& [m, c] : derived.terms()) keys.insert(m);
  for (const auto& m : keys) t.rows.push_back({m, reference.coefficient(m), derived.coefficient(m)});
  return t;
}

namespace reference {

DiffExpr static_interior(int n) { return frac(n - 2, 2) * u_dot_Fu(n) - Rational(n) * F_(); }

DiffExpr static_boundary(int n, const ModuliFn& C) {
  return frac(-1, 2) * elastic_form(n, C, Field::U, Field::U) * x_dot_nu(n);
}

DiffExpr static_system(int n, const ModuliFn& C, int comp) {
  DiffExpr out = F_u(comp);
  for (int k = 1; k <= n; ++k)
    for (int j = 1; j <= n; ++j)
      for (int l = 1; l <= n; ++l) out += C(comp, k, j, l) * d2_(Field::U, j, k, l);
  return out;
}

DiffExpr dynamic_interior(int n) { return frac(n - 1, 2) * u_dot_Fu(n) - Rational(n + 1) * F_(); }

DiffExpr dynamic_density(int n, const ModuliFn& C) {
  DiffExpr energy = frac(1, 2) * (elastic_form(n, C, Field::U, Field::U) + kinetic_form(n, Field::U, Field::U)) - F_();
  DiffExpr out = t_() * energy;
  for (int i = 1; i <= n; ++i) {
    out += d1_(Field::U, i, 0) * x_dot_grad(n, Field::U, i);
    out += frac(n - 1, 2) * u_(i) * d1_(Field::U, i, 0);
  }
  return out;
}

DiffExpr dynamic_boundary(int n, const ModuliFn& C) {
  DiffExpr cuu = elastic_form(n, C, Field::U, Field::U);
  return frac(1, 2) * (cuu + frac(1, 2) * kinetic_form(n, Field::U, Field::U)) * x_dot_nu(n) + t_() * cuu;
}

DiffExpr dynamic_system(int n, const ModuliFn& C, int comp) {
  return static_system(n, C, comp) - d2_(Field::U, comp, 0, 0);
}

DiffExpr coupled_interior(int n, const Rational& a, const Rational& b) {
  return frac(n - 1, 2) * (a * u_dot_Hu(n) + b * v_dot_Hv(n));
}

DiffExpr coupled_density(int n, const ModuliFn& C, const Rational& a, const Rational& b) {
  DiffExpr energy = elastic_form(n, C, Field::U, Field::V) + kinetic_form(n, Field::U, Field::V) - H_();
  DiffExpr out = t_() * energy;
  for (int j = 1; j <= n; ++j) {
    out += x_dot_grad(n, Field::U, j) * d1_(Field::V, j, 0) + x_dot_grad(n, Field::V, j) * d1_(Field::U, j, 0);
    out += frac(n - 1, 2) * (a * u_(j) * d1_(Field::V, j, 0) + b * v_(j) * d1_(Field::U, j, 0));
  }
  return out;
}

DiffExpr coupled_boundary(int n, const ModuliFn& C) {
  DiffExpr out = (elastic_form(n, C, Field::U, Field::V) + kinetic_form(n, Field::U, Field::V)) * x_dot_nu(n);
  DiffExpr tail;
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l) {
          DiffExpr c = C(i, k, j, l);
          if (c.is_zero()) continue;
          tail += c * (d1_(Field::U, i, 0) * d1_(Field::V, j, l) * nu_(k) + d1_(Field::V, j, 0) * d1_(Field::U, i, k) * nu_(l));
        }
  return out + t_() * tail;
}

}  // namespace reference

Derivation::Derivation(std::string name, JetSpace sp, VectorFieldGenerator v, DiffExpr L)
    : id(std::move(name)),
      space(sp),
      generator(std::move(v)),
      lagrangian(std::move(L)),
      prolonged(prolong(generator)),
      identity(derive_scaling_identity(generator, lagrangian)) {
  if (space.time) {
    density = identity.flux[0];
    boundary = -contract_normal(identity.flux, space.n);
  } else {
    boundary = contract_normal(identity.flux, space.n);
  }
  boundary_dirichlet = boundary_normal_form(boundary, space);
}

namespace {

Derivation static_common(std::string name, int n, DiffExpr L, ModuliSymmetry symmetry, bool forced) {
  ModuliFn C = symbolic_moduli(symmetry);
  Derivation d(std::move(name), JetSpace{n, false, 1}, static_dilation(n), std::move(L));
  DiffExpr ref_interior = reference::static_interior(n);
  d.euler_sign = 1;
  for (int i = 1; i <= n; ++i) {
    DiffExpr quoted = reference::static_system(n, C, i);
    if (forced) quoted += G_(i);
    int s = proportionality_sign(euler_operator(d.lagrangian, Field::U, i, d.space), quoted);
    if (i == 1)
      d.euler_sign = s;
    else if (s != d.euler_sign)
      d.euler_sign = 0;
  }
  d.tables.push_back(compare_coefficients("interior density", ref_interior, d.interior()));
  d.tables.push_back(compare_coefficients("boundary integrand, Dirichlet data",
                                          boundary_normal_form(reference::static_boundary(n, C), d.space),
                                          d.boundary_dirichlet));
  return d;
}

}  // namespace

Derivation derive_static(int n, ModuliSymmetry symmetry) {
  ModuliFn C = symbolic_moduli(symmetry);
  DiffExpr L = symmetry == ModuliSymmetry::Full ? static_lagrangian(n, C) : static_gradient_lagrangian(n, C);
  return static_common("pohozhaev", n, std::move(L), symmetry, false);
}

Derivation derive_static_forced(int n, ModuliSymmetry symmetry) {
  return static_common("pohozhaev-generalized", n, forced_static_lagrangian(n, symbolic_moduli(symmetry)), symmetry,
                       true);
}

Derivation derive_dynamic(int n, ModuliSymmetry symmetry) {
  ModuliFn C = symbolic_moduli(symmetry);
  JetSpace sp{n, true, 1};
  Derivation d("morawetz", sp, dynamic_dilation(n), dynamic_lagrangian(n, C));
  d.euler_sign = 1;
  for (int i = 1; i <= n; ++i) {
    int s = proportionality_sign(euler_operator(d.lagrangian, Field::U, i, sp), reference::dynamic_system(n, C, i));
    if (i == 1)
      d.euler_sign = s;
    else if (s != d.euler_sign)
      d.euler_sign = 0;
  }
  d.tables.push_back(compare_coefficients("interior density", reference::dynamic_interior(n), d.interior()));
  d.tables.push_back(compare_coefficients("time density", reference::dynamic_density(n, C), d.density));
  d.tables.push_back(compare_coefficients("boundary integrand, general data",
                                          reduce_unit_normal(reference::dynamic_boundary(n, C), n),
                                          reduce_unit_normal(d.boundary, n)));
  d.tables.push_back(compare_coefficients("boundary integrand, Dirichlet data",
                                          boundary_normal_form(reference::dynamic_boundary(n, C), sp),
                                          d.boundary_dirichlet));
  return d;
}

Derivation derive_coupled(int n, const Rational& a, const Rational& b, bool quoted, ModuliSymmetry symmetry) {
  if (a + b != 2) throw std::invalid_argument("scaling weights must satisfy a + b = 2");
  if (n % 2 != 0) throw std::invalid_argument("the coupled system is posed in even dimension");
  ModuliFn C = symbolic_moduli(symmetry);
  JetSpace sp{n, true, 2};
  DiffExpr L = quoted ? coupled_lagrangian_quoted(n, C) : coupled_lagrangian(n, C);
  Derivation d(quoted ? "hamiltonian-quoted" : "hamiltonian", sp, hamiltonian_dilation(n, a, b), std::move(L));
  // E_u pairs with the v-equation (forced by H_u), E_v with the u-equation (forced by H_v).
  d.euler_sign = 1;
  bool first = true;
  for (int i = 1; i <= n; ++i) {
    DiffExpr qv = -d2_(Field::V, i, 0, 0) + H_u(i);
    DiffExpr qu = -d2_(Field::U, i, 0, 0) + H_v(i);
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l) {
          qv += C(i, k, j, l) * d2_(Field::V, j, k, l);
          qu += C(i, k, j, l) * d2_(Field::U, j, k, l);
        }
    for (auto [machine, ref] : {std::pair{euler_operator(d.lagrangian, Field::U, i, sp), qv},
                                std::pair{euler_operator(d.lagrangian, Field::V, i, sp), qu}}) {
      int s = proportionality_sign(machine, ref);
      if (first)
        d.euler_sign = s;
      else if (s != d.euler_sign)
        d.euler_sign = 0;
      first = false;
    }
  }
  d.tables.push_back(compare_coefficients("interior density", reference::coupled_interior(n, a, b), d.interior()));
  d.tables.push_back(compare_coefficients("time density", reference::coupled_density(n, C, a, b), d.density));
  d.tables.push_back(compare_coefficients("boundary integrand, general data",
                                          reduce_unit_normal(reference::coupled_boundary(n, C), n),
                                          reduce_unit_normal(d.boundary, n)));
  d.tables.push_back(compare_coefficients("boundary integrand, Dirichlet data",
                                          boundary_normal_form(reference::coupled_boundary(n, C), sp),
                                          d.boundary_dirichlet));
  return d;
}

std::string derivation_log(const Derivation& d) {
  const JetSpace& sp = d.space;
  std::ostringstream os;
  os << "identity: " << d.id << "\n";
  os << "dimension: " << sp.n << (sp.time ? " (+ time)" : "") << ", fields: " << sp.fields << "\n";
  os << "lagrangian: " << d.lagrangian.str() << "\n";
  os << "euler sign (machine E(L) = sign * quoted system): ";
  if (d.euler_sign == 0)
    os << "none (Euler expressions are not proportional to the quoted system)\n";
  else
    os << (d.euler_sign > 0 ? "+1" : "-1") << "\n";
  os << "generator:\n";
  for (int dir : sp.directions())
    if (!d.generator.xi_at(dir).is_zero())
      os << "  xi[" << Atom::indep(dir).name() << "] = " << d.generator.xi_at(dir).str() << "\n";
  for (Field f : sp.field_list())
    for (int k = 1; k <= sp.n; ++k)
      os << "  phi[" << Atom::dep(f, k).name() << "] = " << d.generator.phi_at(f, k).str() << "\n";
  os << "prolongation:\n";
  for (Field f : sp.field_list())
    for (int k = 1; k <= sp.n; ++k)
      for (int dir : sp.directions())
        os << "  phi[" << Atom::d1(f, k, dir).name() << "] = " << d.prolonged.at(f, k, dir).str() << "\n";
  os << "interior: " << d.interior().str() << "\n";
  os << "flux:\n";
  for (int dir : sp.directions())
    os << "  P[" << Atom::indep(dir).name() << "] = " << d.identity.flux[static_cast<std::size_t>(dir)].str() << "\n";
  if (sp.time) os << "time density: " << d.density.str() << "\n";
  os << "boundary integrand: " << d.boundary.str() << "\n";
  os << "boundary integrand, Dirichlet data: " << d.boundary_dirichlet.str() << "\n";
  for (const auto& t : d.tables) os << t.str();
  return os.str();
}

}  // namespace elid::sym

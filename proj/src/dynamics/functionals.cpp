#include "elid/dynamics/functionals.hpp"

#include <cmath>

#include "elid/symbolic/boundary.hpp"

namespace elid {

namespace {

sym::Derivation make_derivation(const DynamicModel& m) {
  const auto symmetry = m.C.symmetry_class();
  return m.coupled() ? sym::derive_coupled(m.n(), m.a, m.b, false, symmetry) : sym::derive_dynamic(m.n(), symmetry);
}

/// E(u) = (C grad u grad u + |u_t|^2)/2 - F, or E(u, v) = C grad u grad v + u_t.v_t - H.
sym::DiffExpr energy_density_expr(const DynamicModel& m) {
  const int n = m.n();
  auto C = m.C.symbolic();
  if (m.coupled()) return sym::elastic_form(n, C, sym::Field::U, sym::Field::V) + sym::kinetic_form(n, sym::Field::U, sym::Field::V) - sym::H_();
  return sym::Rational(1, 2) * (sym::elastic_form(n, C, sym::Field::U, sym::Field::U) + sym::kinetic_form(n, sym::Field::U, sym::Field::U)) -
         sym::F_();
}

}  // namespace

MorawetzFunctionals::MorawetzFunctionals(GridPtr grid, const DynamicModel& model)
    : grid_(std::move(grid)), model_(model), derivation_(make_derivation(model)), layout_(model.n()) {
  const int n = model.n();
  auto moduli = model.C.numeric();
  density_ = sym::CompiledExpr(derivation_.density, layout_, moduli);
  interior_ = sym::CompiledExpr(derivation_.interior(), layout_, moduli);
  boundary_ = sym::CompiledExpr(derivation_.boundary, layout_, moduli);
  auto Csym = model.C.symbolic();
  boundary_quoted_ = sym::CompiledExpr(model.coupled() ? sym::reference::coupled_boundary(n, Csym)
                                                       : sym::reference::dynamic_boundary(n, Csym),
                                       layout_, moduli);
  energy_density_ = sym::CompiledExpr(energy_density_expr(model), layout_, moduli);

  const Grid& g = *grid_;
  const long N = g.node_count();
  for (int d = 0; d < n; ++d) {
    std::vector<Eigen::Triplet<double>> trip;
    for (long node = 0; node < N; ++node) {
      if (!g.has_value(node)) continue;
      auto st = g.gradient_stencil(node, true);
      for (const auto& [q, w] : st[static_cast<std::size_t>(d)]) trip.emplace_back(node, q, w);
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor> G(N, N);
    G.setFromTriplets(trip.begin(), trip.end());
    grad_.push_back(std::move(G));
  }
}

std::vector<std::vector<double>> MorawetzFunctionals::integrate(const DynamicState& s,
                                                               const std::vector<const sym::CompiledExpr*>& exprs,
                                                               bool absolute) const {
  const Grid& g = *grid_;
  const int n = g.n();
  const long N = g.node_count();
  std::vector<std::pair<sym::Field, const GridField*>> fields{{sym::Field::U, &s.u}};
  std::vector<const GridField*> rates{&s.u_t};
  if (model_.coupled()) {
    fields.emplace_back(sym::Field::V, &s.v);
    rates.push_back(&s.v_t);
  }
  // Gradients of every component over all nodes, [field][comp][dir].
  std::vector<std::vector<std::vector<Eigen::VectorXd>>> grads(fields.size());
  Eigen::VectorXd comp(N);
  for (std::size_t fi = 0; fi < fields.size(); ++fi)
    for (int c = 0; c < n; ++c) {
      for (long node = 0; node < N; ++node) comp(node) = g.has_value(node) ? fields[fi].second->at(node, c) : 0.0;
      std::vector<Eigen::VectorXd> per_dir;
      for (int d = 0; d < n; ++d) per_dir.emplace_back(grad_[static_cast<std::size_t>(d)] * comp);
      grads[fi].push_back(std::move(per_dir));
    }
  std::vector<std::vector<double>> dens(exprs.size(), std::vector<double>(static_cast<std::size_t>(N), 0.0));
  std::vector<double> j(static_cast<std::size_t>(layout_.size()), 0.0);
  auto slot = [&j](int k) -> double& { return j[static_cast<std::size_t>(k)]; };
  for (long node = 0; node < N; ++node) {
    if (!g.has_value(node)) continue;
    std::fill(j.begin(), j.end(), 0.0);
    slot(layout_.indep(0)) = s.t;
    Point x = g.position(node);
    for (int d = 1; d <= n; ++d) slot(layout_.indep(d)) = x[static_cast<std::size_t>(d - 1)];
    for (std::size_t fi = 0; fi < fields.size(); ++fi) {
      auto f = fields[fi].first;
      for (int c = 1; c <= n; ++c) {
        slot(layout_.dep(f, c)) = fields[fi].second->at(node, c - 1);
        slot(layout_.d1(f, c, 0)) = rates[fi]->at(node, c - 1);
        for (int d = 1; d <= n; ++d)
          slot(layout_.d1(f, c, d)) = grads[fi][static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(d - 1)](node);
      }
    }
    auto u = s.u.vec(node);
    if (!model_.coupled()) {
      slot(layout_.F()) = model_.F.value(u);
      auto f = model_.F.gradient(u);
      for (int k = 1; k <= n; ++k) slot(layout_.F_u(k)) = f[static_cast<std::size_t>(k - 1)];
    } else {
      auto v = s.v.vec(node);
      slot(layout_.H()) = model_.H.value(u, v);
      auto hu = model_.H.grad_u(u, v), hv = model_.H.grad_v(u, v);
      for (int k = 1; k <= n; ++k) {
        slot(layout_.H_u(k)) = hu[static_cast<std::size_t>(k - 1)];
        slot(layout_.H_v(k)) = hv[static_cast<std::size_t>(k - 1)];
      }
    }
    for (std::size_t e = 0; e < exprs.size(); ++e) {
      double val = (*exprs[e])(j);
      dens[e][static_cast<std::size_t>(node)] = absolute ? std::abs(val) : val;
    }
  }
  return dens;
}

std::vector<double> MorawetzFunctionals::facet_jet(const DynamicState& s, std::size_t f) const {
  // Dirichlet data: values and time derivatives vanish, potentials sit at the origin.
  const int n = grid_->n();
  const Facet& fc = grid_->mesh().facets[f];
  std::vector<double> j(static_cast<std::size_t>(layout_.size()), 0.0);
  j[static_cast<std::size_t>(layout_.indep(0))] = s.t;
  for (int d = 1; d <= n; ++d) {
    j[static_cast<std::size_t>(layout_.indep(d))] = fc.x[static_cast<std::size_t>(d - 1)];
    j[static_cast<std::size_t>(layout_.aux(sym::AuxSym::Nu, d))] = fc.normal[static_cast<std::size_t>(d - 1)];
  }
  std::vector<std::pair<sym::Field, const GridField*>> fields{{sym::Field::U, &s.u}};
  if (model_.coupled()) fields.emplace_back(sym::Field::V, &s.v);
  for (auto [fld, field] : fields) {
    auto J = facet_gradient(*field, f);
    for (int c = 1; c <= n; ++c)
      for (int d = 1; d <= n; ++d)
        j[static_cast<std::size_t>(layout_.d1(fld, c, d))] = J[static_cast<std::size_t>((c - 1) * n + d - 1)];
  }
  return j;
}

double MorawetzFunctionals::functional(const DynamicState& s) const {
  return volume_integral(*grid_, integrate(s, {&density_}, false)[0]);
}

double MorawetzFunctionals::energy_scale(const DynamicState& s) const {
  return volume_integral(*grid_, integrate(s, {&energy_density_}, true)[0]);
}

MorawetzRhs MorawetzFunctionals::rhs(const DynamicState& s, double* functional) const {
  MorawetzRhs r;
  auto dens = functional ? integrate(s, {&interior_, &density_}, false) : integrate(s, {&interior_}, false);
  r.interior = volume_integral(*grid_, dens[0]);
  if (functional) *functional = volume_integral(*grid_, dens[1]);
  const auto& mesh = grid_->mesh();
  std::vector<double> flux(mesh.facets.size()), quoted(mesh.facets.size());
  for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
    auto j = facet_jet(s, f);
    flux[f] = boundary_(j);
    quoted[f] = boundary_quoted_(j);
  }
  r.boundary = boundary_integral(mesh, flux);
  r.boundary_quoted = boundary_integral(mesh, quoted);
  return r;
}

}  // namespace elid

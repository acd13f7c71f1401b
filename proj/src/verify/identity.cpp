#include "elid/verify/identity.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "elid/io/csv.hpp"
#include "elid/symbolic/compiled.hpp"
#include "elid/symbolic/derivations.hpp"
#include "elid/util/numeric.hpp"

namespace elid {

namespace {

/// Evaluates static identity integrands on a solved field.
class StaticEvaluator {
 public:
  StaticEvaluator(const StaticProblem& p, const sym::Derivation& d) : p_(p), layout_(p.n()) {
    auto moduli = p.C.numeric();
    interior_ = sym::CompiledExpr(d.interior(), layout_, moduli);
    boundary_ = sym::CompiledExpr(d.boundary, layout_, moduli);
  }

  double interior(const GridField& u) const {
    const Grid& g = *p_.grid;
    const int n = g.n();
    std::vector<double> dens(static_cast<std::size_t>(g.node_count()), 0.0), j(static_cast<std::size_t>(layout_.size()));
    for (long node = 0; node < g.node_count(); ++node) {
      if (!g.has_value(node)) continue;
      std::fill(j.begin(), j.end(), 0.0);
      Point x = g.position(node);
      auto s = u.vec(node);
      for (int d = 1; d <= n; ++d) at(j, layout_.indep(d)) = x[static_cast<std::size_t>(d - 1)];
      for (int c = 1; c <= n; ++c) at(j, layout_.dep(sym::Field::U, c)) = s[static_cast<std::size_t>(c - 1)];
      at(j, layout_.F()) = p_.F.value(s);
      auto f = p_.F.gradient(s);
      for (int k = 1; k <= n; ++k) at(j, layout_.F_u(k)) = f[static_cast<std::size_t>(k - 1)];
      if (p_.source) {
        auto gv = p_.source.value(x);
        auto gj = p_.source.jacobian(x);
        for (int i = 1; i <= n; ++i) {
          at(j, layout_.G(i)) = gv[static_cast<std::size_t>(i - 1)];
          for (int m = 1; m <= n; ++m) at(j, layout_.G_x(i, m)) = gj[static_cast<std::size_t>((i - 1) * n + m - 1)];
        }
      }
      dens[static_cast<std::size_t>(node)] = interior_(j);
    }
    return volume_integral(g, dens);
  }

  /// Boundary integral of `expr` (defaults to the derived boundary form) with Dirichlet facet jets.
  double boundary(const GridField& u, const sym::CompiledExpr* expr = nullptr) const {
    const Grid& g = *p_.grid;
    const int n = g.n();
    const auto& mesh = g.mesh();
    std::vector<double> flux(mesh.facets.size()), j(static_cast<std::size_t>(layout_.size()));
    for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
      std::fill(j.begin(), j.end(), 0.0);
      const Facet& fc = mesh.facets[f];
      for (int d = 1; d <= n; ++d) {
        at(j, layout_.indep(d)) = fc.x[static_cast<std::size_t>(d - 1)];
        at(j, layout_.aux(sym::AuxSym::Nu, d)) = fc.normal[static_cast<std::size_t>(d - 1)];
      }
      auto J = facet_gradient(u, f);
      for (int c = 1; c <= n; ++c)
        for (int d = 1; d <= n; ++d) at(j, layout_.d1(sym::Field::U, c, d)) = J[static_cast<std::size_t>((c - 1) * n + d - 1)];
      flux[f] = expr ? (*expr)(j) : boundary_(j);
    }
    return boundary_integral(mesh, flux);
  }

  [[nodiscard]] const sym::JetLayout& layout() const { return layout_; }

 private:
  static double& at(std::vector<double>& j, int k) { return j[static_cast<std::size_t>(k)]; }
  const StaticProblem& p_;
  sym::JetLayout layout_;
  sym::CompiledExpr interior_, boundary_;
};

/// int [|C grad u grad u| / 2 + |F| + |g.u|] dx.
double static_energy_scale(const StaticProblem& p, const GridField& u) {
  const Grid& g = *p.grid;
  const int n = g.n();
  std::vector<double> dens(static_cast<std::size_t>(g.node_count()), 0.0);
  for (long node = 0; node < g.node_count(); ++node) {
    if (!g.has_value(node)) continue;
    auto J = gradient_at(u, node);
    double q = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int jj = 0; jj < n; ++jj)
          for (int l = 0; l < n; ++l)
            q += p.C.value(i + 1, k + 1, jj + 1, l + 1) * J[static_cast<std::size_t>(i * n + k)] * J[static_cast<std::size_t>(jj * n + l)];
    auto s = u.vec(node);
    double e = 0.5 * std::abs(q) + std::abs(p.F.value(s));
    if (p.source) {
      auto gv = p.source.value(g.position(node));
      double gu = 0.0;
      for (int c = 0; c < n; ++c) gu += gv[static_cast<std::size_t>(c)] * s[static_cast<std::size_t>(c)];
      e += std::abs(gu);
    }
    dens[static_cast<std::size_t>(node)] = e;
  }
  return volume_integral(g, dens);
}

IdentityReport static_report(const std::string& id, const StaticSolution& sol, const StaticProblem& p, const sym::Derivation& d) {
  if (!sol.u.grid() || sol.u.grid() != p.grid) throw std::invalid_argument("solution and problem live on different grids");
  StaticEvaluator ev(p, d);
  IdentityReport r;
  r.id = id;
  r.h = p.grid->h();
  r.lhs = ev.interior(sol.u);
  r.rhs = ev.boundary(sol.u);
  auto Csym = p.C.symbolic();
  sym::CompiledExpr quoted(sym::reference::static_boundary(p.n(), Csym), ev.layout(), p.C.numeric());
  r.rhs_quoted = ev.boundary(sol.u, &quoted);
  finish_report(r, static_energy_scale(p, sol.u));
  std::ostringstream os;
  os << "solver residual " << sol.residual_norm << ", quoted boundary form gives " << r.rhs_quoted;
  r.notes.push_back(os.str());
  if (p.grid->domain().kind != DomainKind::Annulus && is_star_shaped(p.grid->domain()).star_shaped && check_positivity(p.C).pass) {
    // Star-shaped domain and positive moduli: the boundary side cannot be positive.
    const double tol = 1e-2 * r.scale;
    r.notes.push_back(std::string("star-shaped sign check: rhs ") + (r.rhs <= tol ? "<= 0 (ok)" : "> 0 (VIOLATED)"));
  }
  return r;
}

}  // namespace

void finish_report(IdentityReport& r, double energy_scale) {
  r.gap = std::abs(r.lhs - r.rhs);
  r.scale = std::max({std::abs(r.lhs), std::abs(r.rhs), energy_scale});
  if (!(r.scale > 0)) r.scale = 1.0;
  r.relative_gap = r.gap / r.scale;
}

std::string IdentityReport::text() const {
  std::ostringstream os;
  os.precision(10);
  os << "identity " << id << "\n"
     << "  h = " << h;
  if (dt > 0) os << ", dt = " << dt;
  os << "\n  lhs = " << lhs << "\n  rhs = " << rhs << "\n  gap = " << gap << ", scale = " << scale
     << ", relative gap = " << relative_gap << "\n";
  if (!times.empty()) os << "  " << times.size() << " time samples, worst at t = " << times[0] << "\n";
  for (const auto& n : notes) os << "  " << n << "\n";
  return os.str();
}

IdentityReport verify_pohozhaev(const StaticSolution& sol, const StaticProblem& p) {
  if (p.source)
    throw std::invalid_argument("the unforced identity does not apply with a source; use pohozhaev-generalized");
  return static_report("pohozhaev", sol, p, sym::derive_static(p.n(), p.C.symmetry_class()));
}

IdentityReport verify_pohozhaev_isotropic(const StaticSolution& sol, const StaticProblem& p, const IsotropicModuli& iso) {
  const int n = p.n();
  ElasticModuli expect = moduli_from_lame(iso, n);
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l)
          if (expect.at(i, k, j, l) != p.C.at(i, k, j, l)) throw std::invalid_argument("problem moduli are not the given isotropic ones");
  IdentityReport r = verify_pohozhaev(sol, p);
  r.id = "pohozhaev-isotropic";
  // -(1/2) [mu |grad u|^2 + (mu + lambda)(div u)^2](x, nu), and the printed display with an extra 1/2.
  const double mu = iso.mu.get_d(), lam = iso.lame_lambda.get_d();
  const auto& mesh = p.grid->mesh();
  std::vector<double> flux(mesh.facets.size());
  for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
    auto J = facet_gradient(sol.u, f);
    double g2 = 0.0, div = 0.0, xnu = 0.0;
    for (double v : J) g2 += v * v;
    for (int c = 0; c < n; ++c) {
      div += J[static_cast<std::size_t>(c * n + c)];
      xnu += mesh.facets[f].x[static_cast<std::size_t>(c)] * mesh.facets[f].normal[static_cast<std::size_t>(c)];
    }
    flux[f] = -0.5 * (mu * g2 + (mu + lam) * div * div) * xnu;
  }
  const double iso_rhs = boundary_integral(mesh, flux);
  r.rhs_quoted = 0.5 * iso_rhs;
  std::ostringstream os;
  os << "isotropic boundary form " << iso_rhs << " (general form " << r.rhs << "); printed display gives " << r.rhs_quoted;
  r.notes.push_back(os.str());
  r.rhs = iso_rhs;
  finish_report(r, r.scale);
  return r;
}

IdentityReport verify_pohozhaev_generalized(const StaticSolution& sol, const StaticProblem& p) {
  if (!p.source) {
    IdentityReport r = verify_pohozhaev(sol, p);
    r.id = "pohozhaev-generalized";
    return r;
  }
  if (!p.source.jacobian) throw std::invalid_argument("the generalized identity needs the source Jacobian");
  return static_report("pohozhaev-generalized", sol, p, sym::derive_static_forced(p.n(), p.C.symmetry_class()));
}

namespace {

IdentityReport dynamic_report(const std::string& id, const Trajectory& tr) {
  if (tr.freespace && !tr.window_ok()) {
    std::ostringstream os;
    os << "free-space run reached t = " << tr.end_time << " past the contact time " << tr.contact_time;
    throw std::runtime_error(os.str());
  }
  IdentityReport r;
  r.id = id;
  r.h = tr.h;
  r.dt = tr.dt;
  double worst = -1.0, scale = tr.energy_scale;
  for (const auto& s : tr.samples) {
    const double rhs = s.rhs_interior + (tr.freespace ? 0.0 : s.rhs_boundary);
    r.times.push_back(s.t);
    r.lhs_series.push_back(s.dM_dt);
    r.rhs_series.push_back(rhs);
    scale = std::max({scale, std::abs(s.dM_dt), std::abs(rhs)});
    if (std::abs(s.gap) > worst) {
      worst = std::abs(s.gap);
      r.lhs = s.dM_dt;
      r.rhs = rhs;
      r.rhs_quoted = s.rhs_interior + (tr.freespace ? 0.0 : s.rhs_boundary_quoted);
    }
  }
  finish_report(r, scale);
  // Worst sample first in the text block.
  for (std::size_t k = 0; k < r.times.size(); ++k)
    if (r.lhs_series[k] == r.lhs && r.rhs_series[k] == r.rhs) {
      std::swap(r.times[0], r.times[k]);
      std::swap(r.lhs_series[0], r.lhs_series[k]);
      std::swap(r.rhs_series[0], r.rhs_series[k]);
      break;
    }
  std::ostringstream os;
  os << "energy drift " << tr.max_energy_drift() << " of " << tr.energy0;
  if (tr.freespace) os << "; boundary term dropped, run ends at " << tr.end_time << " before contact at " << tr.contact_time;
  r.notes.push_back(os.str());
  return r;
}

}  // namespace

IdentityReport verify_morawetz(const Trajectory& tr, const DynamicModel& model) {
  if (model.coupled()) throw std::invalid_argument("use the conformal identity for the coupled system");
  return dynamic_report(tr.freespace ? "morawetz-freespace" : "morawetz", tr);
}

IdentityReport verify_hamiltonian_conformal(const Trajectory& tr, const DynamicModel& model) {
  if (!model.coupled()) throw std::invalid_argument("the conformal identity needs the coupled system");
  if (model.n() % 2 != 0) throw std::invalid_argument("the coupled system is only defined in even dimensions");
  Rational s = model.a + model.b;
  s.canonicalize();
  if (s != 2) throw std::invalid_argument("dilation weights must satisfy a + b = 2");
  return dynamic_report("hamiltonian-conformal", tr);
}

bool RefinementStudy::monotone() const {
  // An exactly satisfied identity stays satisfied; zero after zero counts as decreasing.
  for (std::size_t k = 1; k < levels.size(); ++k) {
    const double prev = levels[k - 1].relative_gap, cur = levels[k].relative_gap;
    if (!(cur < prev) && !(cur == 0.0 && prev == 0.0)) return false;
  }
  return true;
}

bool RefinementStudy::pass(double threshold) const {
  return levels.size() >= 3 && levels.front().relative_gap <= threshold && monotone();
}

std::string RefinementStudy::text() const {
  std::ostringstream os;
  for (const auto& l : levels) os << l.text();
  os << "observed order in " << order_label << ": " << order << (monotone() ? "" : " (gaps not monotone)") << "\n";
  return os.str();
}

std::string RefinementStudy::csv() const {
  CsvTable t({"identity", "h", "dt", "lhs", "rhs", "gap", "relative_gap", "order"});
  for (const auto& l : levels)
    t.add_row(std::vector<std::string>{l.id, format_double(l.h), format_double(l.dt), format_double(l.lhs), format_double(l.rhs),
                                       format_double(l.gap), format_double(l.relative_gap), format_double(order)});
  return t.str();
}

RefinementStudy h_refinement(std::vector<IdentityReport> levels) {
  RefinementStudy s;
  s.levels = std::move(levels);
  std::vector<double> hs, gaps;
  for (const auto& l : s.levels) {
    hs.push_back(l.h);
    gaps.push_back(l.relative_gap);
  }
  s.order = s.levels.size() >= 2 ? observed_order(hs, gaps) : std::numeric_limits<double>::quiet_NaN();
  return s;
}

double richardson_dt_order(const std::vector<Trajectory>& runs, bool freespace) {
  if (runs.size() != 3) throw std::invalid_argument("the Richardson estimate needs three runs");
  const auto& a = runs[0].samples;
  const auto& b = runs[1].samples;
  const auto& c = runs[2].samples;
  if (a.size() != b.size() || b.size() != c.size() || a.empty()) throw std::invalid_argument("runs have different sample times");
  const double r1 = runs[0].dt / runs[1].dt, r2 = runs[1].dt / runs[2].dt;
  if (std::abs(r1 - r2) > 1e-9 * r1) throw std::invalid_argument("step sizes are not in geometric progression");
  auto gap = [freespace](const TimeSample& s) {
    return s.dM_dt - (s.rhs_interior + (freespace ? 0.0 : s.rhs_boundary));
  };
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k].t - b[k].t) > 1e-9 || std::abs(b[k].t - c[k].t) > 1e-9) throw std::invalid_argument("runs have different sample times");
    d1 = std::max(d1, std::abs(gap(a[k]) - gap(b[k])));
    d2 = std::max(d2, std::abs(gap(b[k]) - gap(c[k])));
  }
  if (d2 == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(d1 / d2) / std::log(r1);
}

}  // namespace elid

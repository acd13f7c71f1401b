#include "elid/dynamics/integrator.hpp"

#include <cmath>
#include <sstream>

#include "elid/util/numeric.hpp"

namespace elid {

namespace {

using Vec = Eigen::VectorXd;

Vec gather(const GridField& f) {
  auto x = gather_unknowns(f);
  return Eigen::Map<Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
}

void scatter(GridField& f, const Vec& x) {
  const Grid& g = *f.grid();
  const int n = f.comps();
  const auto& inside = g.inside_nodes();
  for (std::size_t u = 0; u < inside.size(); ++u)
    for (int c = 0; c < n; ++c) f.at(inside[u], c) = x(static_cast<Eigen::Index>(u * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)));
}

std::vector<double> block(const Vec& x, std::size_t u, int n) {
  return {x.data() + u * static_cast<std::size_t>(n), x.data() + (u + 1) * static_cast<std::size_t>(n)};
}

}  // namespace

DynamicModel DynamicModel::potential(ElasticModuli C, BodyForcePotential F) {
  DynamicModel m;
  m.kind = DynamicKind::Potential;
  m.C = std::move(C);
  m.F = std::move(F);
  return m;
}

DynamicModel DynamicModel::hamiltonian(ElasticModuli C, CouplingPotential H, const Rational& a, const Rational& b) {
  if (C.n() % 2 != 0) throw std::invalid_argument("the coupled system is only defined in even dimensions");
  Rational s = a + b;
  s.canonicalize();
  if (s != 2) throw std::invalid_argument("dilation weights must satisfy a + b = 2, got a + b = " + sym::to_string(s));
  if (!has_major_symmetry(C)) throw std::invalid_argument("the coupled system needs moduli with major symmetry");
  DynamicModel m;
  m.kind = DynamicKind::Hamiltonian;
  m.C = std::move(C);
  m.H = std::move(H);
  m.a = a;
  m.b = b;
  return m;
}

std::string DynamicModel::describe() const {
  std::ostringstream os;
  if (coupled())
    os << "coupled system, n = " << n() << ", H = " << H.describe() << ", a = " << sym::to_string(a)
       << ", b = " << sym::to_string(b);
  else
    os << "potential system, n = " << n() << ", F = " << F.describe();
  return os.str();
}

double stable_time_step(const Grid& grid, const ElasticModuli& C, double cfl) {
  return cfl * grid.h() / max_wave_speed(C);
}

Integrator::Integrator(GridPtr grid, DynamicModel model, double dt, double cfl)
    : grid_(std::move(grid)), model_(std::move(model)), dt_(dt) {
  if (grid_->n() != model_.n()) throw std::invalid_argument("grid and model disagree on the dimension");
  if (!(dt > 0)) throw IntegrationError("time step must be positive", -1);
  const double bound = stable_time_step(*grid_, model_.C, cfl);
  if (dt > bound * (1 + 1e-12)) {
    std::ostringstream os;
    os << "time step " << dt << " exceeds the stability bound " << bound << " (cfl " << cfl << ")";
    throw IntegrationError(os.str(), -1);
  }
  A_ = assemble_operator(*grid_, model_.C, Scheme::Staircase);
  std::vector<double> zero(static_cast<std::size_t>(model_.n()), 0.0);
  auto vanishes = [](const std::vector<double>& f) {
    for (double x : f)
      if (x != 0.0) return false;
    return true;
  };
  forcing_vanishes_at_zero_ = model_.coupled() ? vanishes(model_.H.grad_u(zero, zero)) && vanishes(model_.H.grad_v(zero, zero))
                                               : vanishes(model_.F.gradient(zero));
}

DynamicState Integrator::zero_state() const {
  DynamicState s;
  const int n = model_.n();
  s.u = GridField(grid_, n);
  s.u_t = GridField(grid_, n);
  if (model_.coupled()) {
    s.v = GridField(grid_, n);
    s.v_t = GridField(grid_, n);
  }
  return s;
}

Vec Integrator::accel(const Vec& x, const Vec& partner, bool for_v) const {
  const int n = model_.n();
  Vec a = A_ * x;
  if (!model_.coupled() && model_.F.kind() == PotentialKind::Zero) return a;
  const std::size_t m = grid_->inside_nodes().size();
  auto zero_block = [&](const Vec& y, std::size_t u) {
    for (int c = 0; c < n; ++c)
      if (y(static_cast<Eigen::Index>(u * static_cast<std::size_t>(n) + static_cast<std::size_t>(c))) != 0.0) return false;
    return true;
  };
  std::vector<double> self(static_cast<std::size_t>(n)), other(static_cast<std::size_t>(n));
  auto load = [n](std::vector<double>& dst, const Vec& y, std::size_t u) {
    for (int c = 0; c < n; ++c) dst[static_cast<std::size_t>(c)] = y(static_cast<Eigen::Index>(u * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)));
  };
  for (std::size_t u = 0; u < m; ++u) {
    if (forcing_vanishes_at_zero_ && zero_block(x, u) && (!model_.coupled() || zero_block(partner, u))) continue;
    std::vector<double> f;
    if (!model_.coupled()) {
      load(self, x, u);
      f = model_.F.gradient(self);
    } else {
      // u is driven by H_v and v by H_u.
      load(self, x, u);
      load(other, partner, u);
      f = for_v ? model_.H.grad_u(other, self) : model_.H.grad_v(self, other);
    }
    for (int c = 0; c < n; ++c) a(static_cast<Eigen::Index>(u * static_cast<std::size_t>(n) + static_cast<std::size_t>(c))) += f[static_cast<std::size_t>(c)];
  }
  return a;
}

void Integrator::advance(DynamicState& s, double dt) {
  Vec u = gather(s.u), ut = gather(s.u_t);
  Vec v, vt;
  if (model_.coupled()) {
    v = gather(s.v);
    vt = gather(s.v_t);
  }
  // The closing kick of one step is the opening kick of the next when positions are unchanged.
  if (!(cache_valid_ && cache_u_ == u && cache_v_ == v)) {
    cache_au_ = accel(u, v, false);
    if (model_.coupled()) cache_av_ = accel(v, u, true);
  }
  ut += 0.5 * dt * cache_au_;
  u += dt * ut;
  if (model_.coupled()) {
    vt += 0.5 * dt * cache_av_;
    v += dt * vt;
  }
  cache_au_ = accel(u, v, false);
  ut += 0.5 * dt * cache_au_;
  if (model_.coupled()) {
    cache_av_ = accel(v, u, true);
    vt += 0.5 * dt * cache_av_;
  }
  cache_u_ = u;
  cache_v_ = v;
  cache_valid_ = true;
  const bool finite = u.allFinite() && ut.allFinite() && (!model_.coupled() || (v.allFinite() && vt.allFinite()));
  if (!finite) {
    cache_valid_ = false;
    throw IntegrationError("non-finite values at step " + std::to_string(steps_ + 1), steps_ + 1);
  }
  scatter(s.u, u);
  scatter(s.u_t, ut);
  if (model_.coupled()) {
    scatter(s.v, v);
    scatter(s.v_t, vt);
  }
  s.t += dt;
  ++steps_;
}

void Integrator::step(DynamicState& s) { advance(s, dt_); }
void Integrator::step_backward(DynamicState& s) { advance(s, -dt_); }

double Integrator::energy(const DynamicState& s) const {
  const int n = model_.n();
  const double vol = std::pow(grid_->h(), n);
  Vec u = gather(s.u), ut = gather(s.u_t);
  const std::size_t m = grid_->inside_nodes().size();
  std::vector<double> terms(m);
  if (!model_.coupled()) {
    for (std::size_t k = 0; k < m; ++k) {
      auto w = block(ut, k, n);
      double kin = 0.0;
      for (double x : w) kin += 0.5 * x * x;
      terms[k] = kin - model_.F.value(block(u, k, n));
    }
    return vol * pairwise_sum(terms) - 0.5 * vol * u.dot(A_ * u);
  }
  Vec v = gather(s.v), vt = gather(s.v_t);
  for (std::size_t k = 0; k < m; ++k) {
    auto a = block(ut, k, n), b = block(vt, k, n);
    double kin = 0.0;
    for (int c = 0; c < n; ++c) kin += a[static_cast<std::size_t>(c)] * b[static_cast<std::size_t>(c)];
    terms[k] = kin - model_.H.value(block(u, k, n), block(v, k, n));
  }
  return vol * pairwise_sum(terms) - vol * u.dot(A_ * v);
}

}  // namespace elid

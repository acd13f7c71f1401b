#include "elid/dynamics/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "elid/io/csv.hpp"
#include "elid/statics/static_solver.hpp"

namespace elid {

namespace {

std::vector<double> unit_direction(const std::vector<double>& dir, int n) {
  std::vector<double> d = dir.empty() ? std::vector<double>(static_cast<std::size_t>(n), 0.0) : dir;
  if (dir.empty()) d[0] = 1.0;
  if (static_cast<int>(d.size()) != n) throw std::invalid_argument("bump direction has the wrong length");
  double len = 0.0;
  for (double v : d) len += v * v;
  if (!(len > 0)) throw std::invalid_argument("bump direction must be nonzero");
  for (double& v : d) v /= std::sqrt(len);
  return d;
}

}  // namespace

DynamicState bump_state(const Integrator& integ, const BumpData& bump) {
  const int n = integ.model().n();
  if (static_cast<int>(bump.center.size()) != n) throw std::invalid_argument("bump center has the wrong length");
  if (!(bump.width > 0)) throw std::invalid_argument("bump width must be positive");
  auto dir = unit_direction(bump.direction, n);
  DynamicState s = integ.zero_state();
  s.u = GridField::sample(integ.grid(), n, [&](const Point& x) {
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) r2 += std::pow(x[static_cast<std::size_t>(d)] - bump.center[static_cast<std::size_t>(d)], 2);
    double q = r2 / (bump.width * bump.width);
    double a = q < 1.0 ? bump.amplitude * std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) v[static_cast<std::size_t>(d)] = a * dir[static_cast<std::size_t>(d)];
    return v;
  });
  if (integ.model().coupled()) s.v = s.u;
  return s;
}

DynamicState eigenmode_state(const Integrator& integ, double amplitude, double* kappa) {
  StaticProblem p;
  p.grid = integ.grid();
  p.C = integ.model().C;
  p.F = BodyForcePotential::zero();
  EigenPair ep = smallest_eigenpair(p);
  if (kappa) *kappa = ep.kappa;
  DynamicState s = integ.zero_state();
  s.u = ep.u;
  for (double& v : s.u.values()) v *= amplitude;
  if (integ.model().coupled()) s.v = s.u;
  return s;
}

double contact_time(const DomainSpec& box, const BumpData& bump, const ElasticModuli& C) {
  double dist = 0.0;
  if (box.kind == DomainKind::Rectangle) {
    dist = INFINITY;
    for (int d = 0; d < box.n; ++d) {
      auto k = static_cast<std::size_t>(d);
      dist = std::min({dist, box.hi[k] - bump.center[k], bump.center[k] - box.lo[k]});
    }
  } else if (box.kind == DomainKind::Ball) {
    double r = 0.0;
    for (int d = 0; d < box.n; ++d) r += std::pow(bump.center[static_cast<std::size_t>(d)] - box.center[static_cast<std::size_t>(d)], 2);
    dist = box.radius - std::sqrt(r);
  } else {
    throw std::invalid_argument("free-space runs need a rectangle or ball box");
  }
  return std::max(0.0, dist - bump.width) / max_wave_speed(C);
}

double Trajectory::max_energy_drift() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.energy - energy0));
  return m;
}

std::string Trajectory::csv() const {
  CsvTable t({"t", "M", "dM_dt_centered", "rhs_interior", "rhs_boundary", "gap", "energy"});
  for (const auto& s : samples) t.add_row(std::vector<double>{s.t, s.M, s.dM_dt, s.rhs_interior, s.rhs_boundary, s.gap, s.energy});
  return t.str();
}

Trajectory run_trajectory(GridPtr grid, const DynamicModel& model, const std::function<DynamicState(const Integrator&)>& init,
                          const TrajectoryOptions& opts) {
  if (opts.samples < 1) throw std::invalid_argument("need at least one sample");
  if (!(opts.horizon > 0)) throw std::invalid_argument("horizon must be positive");
  double dt_req = opts.dt > 0 ? opts.dt : stable_time_step(*grid, model.C, opts.cfl);
  const long K = std::max<long>(2, static_cast<long>(std::ceil(opts.horizon / (opts.samples * dt_req) - 1e-9)));
  const double dt = opts.horizon / (static_cast<double>(opts.samples) * static_cast<double>(K));

  Integrator integ(grid, model, dt, opts.cfl);
  MorawetzFunctionals fn(grid, model);
  DynamicState s = init(integ);
  s.t = 0.0;

  Trajectory tr;
  tr.h = grid->h();
  tr.dt = dt;
  tr.freespace = opts.freespace;
  tr.contact_time = opts.contact_time;
  tr.energy0 = integ.energy(s);
  tr.energy_scale = fn.energy_scale(s);

  std::map<long, double> M;
  std::map<long, TimeSample> pending;
  const long last = static_cast<long>(opts.samples) * K + 1;
  for (long k = 0; k <= last; ++k) {
    if (k > 0) integ.step(s);
    auto is_sample = [&](long m) { return m % K == 0 && m / K >= 1 && m / K <= opts.samples; };
    const bool needed = is_sample(k) || is_sample(k - 1) || is_sample(k + 1);
    const bool at_sample = is_sample(k);
    if (needed && !at_sample) M[k] = fn.functional(s);
    if (at_sample) {
      MorawetzRhs rhs = fn.rhs(s, &M[k]);
      TimeSample ts{};
      ts.t = s.t;
      ts.rhs_interior = rhs.interior;
      ts.rhs_boundary = rhs.boundary;
      ts.rhs_boundary_quoted = rhs.boundary_quoted;
      ts.energy = integ.energy(s);
      pending[k] = ts;
    }
  }
  for (auto& [k, ts] : pending) {
    ts.M = M.at(k);
    ts.dM_dt = (M.at(k + 1) - M.at(k - 1)) / (2 * dt);
    ts.gap = ts.dM_dt - (ts.rhs_interior + (opts.freespace ? 0.0 : ts.rhs_boundary));
    tr.samples.push_back(ts);
  }
  tr.steps = integ.steps_taken();
  tr.end_time = s.t;
  return tr;
}

}  // namespace elid

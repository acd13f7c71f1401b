#include "elid/statics/static_solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/SparseLU>

#include "elid/util/numeric.hpp"

namespace elid {

namespace {

using Vec = Eigen::VectorXd;

std::vector<double> node_vec(const Vec& x, std::size_t u, int n) {
  return {x.data() + u * static_cast<std::size_t>(n), x.data() + (u + 1) * static_cast<std::size_t>(n)};
}

/// Node-wise f(x) + g for the unknown layout.
Vec forcing(const StaticProblem& p, const Vec& x) {
  const int n = p.n();
  const auto& inside = p.grid->inside_nodes();
  Vec out = Vec::Zero(x.size());
  for (std::size_t u = 0; u < inside.size(); ++u) {
    auto f = p.F.gradient(node_vec(x, u, n));
    std::vector<double> g = p.source ? p.source.value(p.grid->position(inside[u])) : std::vector<double>(static_cast<std::size_t>(n), 0.0);
    for (int c = 0; c < n; ++c) out(static_cast<Eigen::Index>(u * static_cast<std::size_t>(n) + static_cast<std::size_t>(c))) = f[static_cast<std::size_t>(c)] + g[static_cast<std::size_t>(c)];
  }
  return out;
}

Vec source_vector(const StaticProblem& p) {
  const int n = p.n();
  const auto& inside = p.grid->inside_nodes();
  Vec out = Vec::Zero(static_cast<Eigen::Index>(inside.size() * static_cast<std::size_t>(n)));
  if (!p.source) return out;
  for (std::size_t u = 0; u < inside.size(); ++u) {
    auto g = p.source.value(p.grid->position(inside[u]));
    for (int c = 0; c < n; ++c) out(static_cast<Eigen::Index>(u * static_cast<std::size_t>(n) + static_cast<std::size_t>(c))) = g[static_cast<std::size_t>(c)];
  }
  return out;
}

double potential_sum(const StaticProblem& p, const Vec& x) {
  const int n = p.n();
  const std::size_t m = p.grid->inside_nodes().size();
  std::vector<double> terms(m);
  for (std::size_t u = 0; u < m; ++u) terms[u] = p.F.value(node_vec(x, u, n));
  return pairwise_sum(terms);
}

/// sum of F(x + a d) - F(x), node by node to limit cancellation.
double potential_change(const StaticProblem& p, const Vec& x, const Vec& d, double a) {
  if (p.F.kind() == PotentialKind::Zero) return 0.0;
  const int n = p.n();
  const std::size_t m = p.grid->inside_nodes().size();
  std::vector<double> terms(m);
  for (std::size_t u = 0; u < m; ++u) {
    auto s = node_vec(x, u, n);
    auto t = s;
    for (int c = 0; c < n; ++c) t[static_cast<std::size_t>(c)] += a * d(static_cast<Eigen::Index>(u * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)));
    terms[u] = p.F.value(t) - p.F.value(s);
  }
  return pairwise_sum(terms);
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }
std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

double StaticProblem::scale() const {
  double m = 1.0;
  if (!source) return m;
  for (long node : grid->inside_nodes())
    for (double v : source.value(grid->position(node))) m = std::max(m, std::abs(v));
  return m;
}

GridField assemble_residual(const StaticProblem& p, const GridField& u) {
  const Grid& g = *p.grid;
  const int n = g.n();
  const bool cut = p.scheme == Scheme::ShortleyWeller;
  GridField r(p.grid, n, true);
  auto value = [&](const Grid::Arm& a, int j) { return a.node >= 0 ? u.at(a.node, j) : 0.0; };
  // Second derivative of u^j along a lattice offset, using the arm geometry on both sides.
  auto d2 = [&](long node, Offset off, int j) {
    Offset back{-off[0], -off[1], -off[2]};
    Grid::Arm ap = g.arm(node, off, cut), am = g.arm(node, back, cut);
    double u0 = u.at(node, j);
    double slope_p = (value(ap, j) - u0) / ap.length;
    double slope_m = (u0 - value(am, j)) / am.length;
    return 2.0 * (slope_p - slope_m) / (ap.length + am.length);
  };
  std::vector<double> hess(static_cast<std::size_t>(n * n * n));
  for (long node : g.inside_nodes()) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) {
          double v;
          if (k == l) {
            Offset e{0, 0, 0};
            e[static_cast<std::size_t>(k)] = 1;
            v = d2(node, e, j);
          } else {
            Offset a{0, 0, 0}, b{0, 0, 0};
            a[static_cast<std::size_t>(k)] = 1;
            a[static_cast<std::size_t>(l)] = 1;
            b[static_cast<std::size_t>(k)] = 1;
            b[static_cast<std::size_t>(l)] = -1;
            v = 0.5 * (d2(node, a, j) - d2(node, b, j));
          }
          hess[static_cast<std::size_t>((j * n + k) * n + l)] = v;
          hess[static_cast<std::size_t>((j * n + l) * n + k)] = v;
        }
    auto f = p.F.gradient(u.vec(node));
    std::vector<double> src = p.source ? p.source.value(g.position(node)) : std::vector<double>(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l) s += p.C.value(i + 1, k + 1, j + 1, l + 1) * hess[static_cast<std::size_t>((j * n + k) * n + l)];
      r.at(node, i) = s + f[static_cast<std::size_t>(i)] + src[static_cast<std::size_t>(i)];
    }
  }
  return r;
}

double residual_max_norm(const StaticProblem& p, const GridField& u) { return assemble_residual(p, u).max_abs(); }

double discrete_energy(const StaticProblem& p, const GridField& u) {
  SparseMatrix A = assemble_operator(*p.grid, p.C, p.scheme);
  Vec x = to_vec(gather_unknowns(u));
  const double vol = std::pow(p.grid->h(), p.n());
  return vol * (-0.5 * x.dot(A * x) - potential_sum(p, x) - source_vector(p).dot(x));
}

StaticSolution solve_static(const StaticProblem& p, const GridField& init, const SolveOptions& opts) {
  const int n = p.n();
  if (p.C.n() != n) throw std::invalid_argument("moduli and grid disagree on the dimension");
  const double tol = opts.tol_res > 0 ? opts.tol_res : 1e-8 * p.scale();
  const long unknowns = static_cast<long>(p.grid->inside_nodes().size()) * n;
  const long max_iter = opts.max_iter > 0 ? opts.max_iter : 10 * unknowns;
  const double vol = std::pow(p.grid->h(), n);
  SparseMatrix A = assemble_operator(*p.grid, p.C, p.scheme);
  StaticSolution sol;

  if (p.scheme == Scheme::ShortleyWeller && !p.grid->aligned()) {
    if (!p.F.is_linear())
      throw std::invalid_argument("nonlinear potentials need the symmetric staircase scheme");
    SparseMatrix K = A;
    if (p.F.kind() == PotentialKind::Quadratic) {
      double kappa = p.F.coefficient().get_d();
      for (Eigen::Index i = 0; i < K.rows(); ++i) K.coeffRef(i, i) += kappa;
    }
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    Eigen::SparseMatrix<double> Kc = K;
    lu.compute(Kc);
    if (lu.info() != Eigen::Success) throw std::runtime_error("sparse factorization failed");
    Vec x = lu.solve(Vec(-source_vector(p)));
    sol.u = scatter_unknowns(p.grid, n, to_std(x));
    sol.iterations = 1;
    sol.residual_norm = residual_max_norm(p, sol.u);
    sol.energy = discrete_energy(p, sol.u);
    sol.converged = sol.residual_norm <= tol;
    sol.status = sol.converged ? "converged (direct solve)" : "direct solve above tolerance";
    return sol;
  }

  Vec x = to_vec(gather_unknowns(init));
  Vec Ax = A * x;
  Vec g = source_vector(p);
  Vec r = Ax + forcing(p, x);
  double energy = vol * (-0.5 * x.dot(Ax) - potential_sum(p, x) - g.dot(x));
  Vec d = r;
  long it = 0;
  sol.status = "iteration limit reached";
  for (; it < max_iter; ++it) {
    double rmax = r.lpNorm<Eigen::Infinity>();
    sol.history.push_back({it, energy, rmax});
    if (rmax <= 0.5 * tol) {
      sol.converged = true;
      sol.status = "converged";
      break;
    }
    if (energy < opts.energy_floor) {
      sol.unbounded = true;
      sol.status = "energy below floor: descent appears unbounded";
      break;
    }
    if (r.dot(d) <= 0) d = r;
    Vec Ad = A * d;
    // Energy change along x + a d: quadratic part exact, potential part node by node.
    const double slope = -vol * r.dot(d);
    const double curv = -vol * d.dot(Ad);
    const double dAx = d.dot(Ax), gd = g.dot(d);
    auto delta = [&](double a) {
      return vol * (-a * dAx - 0.5 * a * a * d.dot(Ad) - a * gd) - vol * potential_change(p, x, d, a);
    };
    double a = curv > 0 ? -slope / curv : 1.0;
    double dE = delta(a);
    int shrink = 0;
    while (dE > 1e-4 * a * slope && shrink < 60) {
      a *= 0.5;
      dE = delta(a);
      ++shrink;
    }
    if (dE > 1e-4 * a * slope) {
      if (d.isApprox(r)) {
        sol.status = "line search failed along steepest descent";
        break;
      }
      d = r;
      continue;
    }
    x += a * d;
    Ax += a * Ad;
    energy += dE;
    Vec r_new = Ax + forcing(p, x);
    double beta = std::max(0.0, r_new.dot(r_new - r) / r.dot(r));
    d = r_new + beta * d;
    r = std::move(r_new);
  }
  sol.iterations = it;
  sol.u = scatter_unknowns(p.grid, n, to_std(x));
  sol.residual_norm = residual_max_norm(p, sol.u);
  sol.energy = discrete_energy(p, sol.u);
  if (sol.converged && sol.residual_norm > tol) {
    sol.converged = false;
    sol.status = "internal residual below tolerance but the independent residual is not";
  }
  return sol;
}

EigenPair smallest_eigenpair(const StaticProblem& p, double tol, long max_iter) {
  const int n = p.n();
  const auto& inside = p.grid->inside_nodes();
  if (inside.empty()) throw std::runtime_error("eigenproblem on an empty grid");
  Eigen::SparseMatrix<double> K = -assemble_operator(*p.grid, p.C, p.scheme);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(K);
  if (lu.info() != Eigen::Success) throw std::runtime_error("sparse factorization failed");
  // Deterministic start with every component excited.
  Vec x(K.rows());
  for (std::size_t u = 0; u < inside.size(); ++u) {
    Point pos = p.grid->position(inside[u]);
    for (int c = 0; c < n; ++c) {
      double s = 1.0 + 0.3 * c;
      for (int a = 0; a < n; ++a) s += 0.1 * (a + 1) * pos[static_cast<std::size_t>(a)];
      x(static_cast<Eigen::Index>(u * static_cast<std::size_t>(n) + static_cast<std::size_t>(c))) = s;
    }
  }
  x.normalize();
  EigenPair ep;
  double kappa = 0.0, res = INFINITY;
  long it = 0;
  for (; it < max_iter; ++it) {
    Vec y = lu.solve(x);
    x = y / y.norm();
    Vec Kx = K * x;
    kappa = x.dot(Kx);
    res = (Kx - kappa * x).norm();
    if (res <= tol * std::max(1.0, std::abs(kappa))) break;
  }
  if (it == max_iter) {
    std::ostringstream os;
    os << "inverse iteration stagnated: residual " << res << " after " << it << " iterations";
    throw std::runtime_error(os.str());
  }
  Eigen::Index imax;
  x.cwiseAbs().maxCoeff(&imax);
  x /= x(imax);
  ep.kappa = kappa;
  ep.residual = res;
  ep.iterations = it + 1;
  ep.u = scatter_unknowns(p.grid, n, to_std(x));
  return ep;
}

}  // namespace elid

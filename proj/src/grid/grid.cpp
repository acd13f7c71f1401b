#include "elid/grid/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "elid/util/numeric.hpp"

namespace elid {

namespace {

/// d/ds at s = 0 of the Lagrange interpolant through (s_j, value_j).
std::vector<double> lagrange_derivative_weights(const std::vector<double>& s) {
  const std::size_t m = s.size();
  std::vector<double> w(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double denom = 1.0;
    for (std::size_t q = 0; q < m; ++q)
      if (q != j) denom *= s[j] - s[q];
    double num = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == j) continue;
      double prod = 1.0;
      for (std::size_t q = 0; q < m; ++q)
        if (q != j && q != k) prod *= -s[q];
      num += prod;
    }
    w[j] = num / denom;
  }
  return w;
}

Offset axis_offset(int d, int step) {
  Offset o{0, 0, 0};
  o[static_cast<std::size_t>(d)] = step;
  return o;
}

}  // namespace

std::shared_ptr<const Grid> Grid::make(DomainSpec dom, double h) {
  return std::shared_ptr<const Grid>(new Grid(std::move(dom), h));
}

Grid::Grid(DomainSpec dom, double h) : dom_(std::move(dom)), n_(dom_.n), h_(h) {
  if (!(h > 0)) throw std::invalid_argument("grid spacing must be positive");
  aligned_ = dom_.aligned_with(h);
  Point lo, hi;
  dom_.bounds(lo, hi);
  for (int a = 0; a < n_; ++a) {
    auto i = static_cast<std::size_t>(a);
    long l = static_cast<long>(std::floor(lo[i] / h + 1e-9)) - 1;
    long u = static_cast<long>(std::ceil(hi[i] / h - 1e-9)) + 1;
    lo_[i] = l;
    shape_[i] = u - l + 1;
  }
  long total = shape_[0] * shape_[1] * shape_[2];
  if (total > 50'000'000) throw std::invalid_argument("grid too large");
  classify();
  compute_weights();
  mesh_ = make_boundary_mesh(dom_, h_);
  if (aligned_)
    for (auto& f : mesh_.facets) f.node = find_node(f.x);
}

std::array<long, 3> Grid::index(long node) const {
  std::array<long, 3> idx{0, 0, 0};
  long r = node;
  for (std::size_t a = 0; a < 3; ++a) {
    idx[a] = r % shape_[a] + lo_[a];
    r /= shape_[a];
  }
  return idx;
}

long Grid::node_at(const std::array<long, 3>& idx) const {
  long node = 0, stride = 1;
  for (std::size_t a = 0; a < 3; ++a) {
    long k = idx[a] - lo_[a];
    if (k < 0 || k >= shape_[a]) return -1;
    node += k * stride;
    stride *= shape_[a];
  }
  return node;
}

Point Grid::position(long node) const {
  auto idx = index(node);
  Point x(static_cast<std::size_t>(n_));
  for (int a = 0; a < n_; ++a) x[static_cast<std::size_t>(a)] = static_cast<double>(idx[static_cast<std::size_t>(a)]) * h_;
  return x;
}

long Grid::neighbor(long node, const Offset& off) const {
  auto idx = index(node);
  for (std::size_t a = 0; a < 3; ++a) idx[a] += off[a];
  return node_at(idx);
}

long Grid::find_node(const Point& x) const {
  std::array<long, 3> idx{0, 0, 0};
  for (int a = 0; a < n_; ++a) {
    double q = x[static_cast<std::size_t>(a)] / h_;
    long k = std::lround(q);
    if (std::abs(q - static_cast<double>(k)) > 1e-9) return -1;
    idx[static_cast<std::size_t>(a)] = k;
  }
  return node_at(idx);
}

void Grid::classify() {
  const long total = shape_[0] * shape_[1] * shape_[2];
  flags_.assign(static_cast<std::size_t>(total), NodeFlag::Outside);
  unknown_.assign(static_cast<std::size_t>(total), -1);
  const double tol = 1e-10 * h_;
  for (long node = 0; node < total; ++node) {
    double lev = dom_.level(position(node));
    NodeFlag f = std::abs(lev) <= tol ? NodeFlag::Boundary : (lev < 0 ? NodeFlag::Inside : NodeFlag::Outside);
    flags_[static_cast<std::size_t>(node)] = f;
    if (f == NodeFlag::Inside) {
      unknown_[static_cast<std::size_t>(node)] = static_cast<long>(inside_.size());
      inside_.push_back(node);
    }
  }
}

void Grid::compute_weights() {
  const long total = node_count();
  weights_.assign(static_cast<std::size_t>(total), 0.0);
  const double full = std::pow(h_, n_);
  const double reach = 0.5 * h_ * std::sqrt(static_cast<double>(n_)) * (1 + 1e-12);
  for (long node = 0; node < total; ++node) {
    Point x = position(node);
    double lev = dom_.level(x);
    double w;
    if (lev < -reach && dom_.kind != DomainKind::Rectangle) {
      w = full;
    } else if (lev > reach) {
      w = 0.0;
    } else {
      Point a(x), b(x);
      for (auto& v : a) v -= 0.5 * h_;
      for (auto& v : b) v += 0.5 * h_;
      w = dom_.box_intersection(a, b);
    }
    weights_[static_cast<std::size_t>(node)] = w;
  }
  // Move the cut-cell mass of Outside nodes onto neighbors that carry values.
  std::vector<Offset> stencil;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j)
      for (int k = (n_ == 3 ? -1 : 0); k <= (n_ == 3 ? 1 : 0); ++k)
        if (i != 0 || j != 0 || k != 0) stencil.push_back({i, j, k});
  std::vector<double> moved(weights_.size(), 0.0);
  for (long node = 0; node < total; ++node) {
    auto s = static_cast<std::size_t>(node);
    if (flags_[s] != NodeFlag::Outside || weights_[s] == 0.0) continue;
    std::vector<long> targets;
    for (NodeFlag want : {NodeFlag::Inside, NodeFlag::Boundary}) {
      for (const auto& off : stencil) {
        long q = neighbor(node, off);
        if (q >= 0 && flag(q) == want) targets.push_back(q);
      }
      if (!targets.empty()) break;
    }
    for (long q : targets) moved[static_cast<std::size_t>(q)] += weights_[s] / static_cast<double>(targets.size());
    weights_[s] = 0.0;
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) weights_[i] += moved[i];
}

Grid::Arm Grid::arm(long node, const Offset& off, bool cut) const {
  double len2 = 0.0;
  for (int a : off) len2 += a * a;
  const double full = h_ * std::sqrt(len2);
  long nb = neighbor(node, off);
  bool nb_inside = nb >= 0 && flag(nb) == NodeFlag::Inside;
  if (!cut) return {full, nb_inside ? nb : -1};
  Point x = position(node);
  Point dir(static_cast<std::size_t>(n_));
  for (int a = 0; a < n_; ++a) dir[static_cast<std::size_t>(a)] = off[static_cast<std::size_t>(a)] * h_ / full;
  double t = dom_.ray_exit(x, dir, full);
  if (nb_inside && t >= full * (1 - 1e-12)) return {full, nb};
  return {t, -1};
}

std::vector<NodeStencil> Grid::gradient_stencil(long node, bool dirichlet) const {
  if (!has_value(node)) throw std::invalid_argument("gradient requested at a node outside the domain");
  std::vector<NodeStencil> out(static_cast<std::size_t>(n_));
  for (int d = 0; d < n_; ++d) {
    std::vector<double> s;
    std::vector<long> nodes;
    if (dirichlet && flag(node) == NodeFlag::Inside) {
      Arm back = arm(node, axis_offset(d, -1), true);
      Arm fwd = arm(node, axis_offset(d, 1), true);
      s = {-back.length, 0.0, fwd.length};
      nodes = {back.node, node, fwd.node};
    } else {
      auto avail = [&](int k) {
        long q = neighbor(node, axis_offset(d, k));
        return has_value(q) ? q : -1;
      };
      long p1 = avail(1), m1 = avail(-1);
      if (p1 >= 0 && m1 >= 0) {
        s = {-h_, 0.0, h_};
        nodes = {m1, node, p1};
      } else if (p1 >= 0 && avail(2) >= 0) {
        s = {0.0, h_, 2 * h_};
        nodes = {node, p1, avail(2)};
      } else if (m1 >= 0 && avail(-2) >= 0) {
        s = {0.0, -h_, -2 * h_};
        nodes = {node, m1, avail(-2)};
      } else if (p1 >= 0) {
        s = {0.0, h_};
        nodes = {node, p1};
      } else if (m1 >= 0) {
        s = {0.0, -h_};
        nodes = {node, m1};
      } else if (dirichlet && flag(node) == NodeFlag::Boundary) {
        // The axis touches the domain only here, so it is tangent to the boundary, where a
        // Dirichlet field has zero derivative.
        continue;
      } else {
        std::ostringstream os;
        os << "insufficient stencil for a derivative at node " << node;
        throw std::runtime_error(os.str());
      }
    }
    auto w = lagrange_derivative_weights(s);
    for (std::size_t j = 0; j < s.size(); ++j)
      if (nodes[j] >= 0 && w[j] != 0.0) {
        if (dirichlet && flag(nodes[j]) == NodeFlag::Boundary) continue;
        out[static_cast<std::size_t>(d)].emplace_back(nodes[j], w[j]);
      }
  }
  return out;
}

std::vector<NodeStencil> Grid::least_squares_stencil(const Facet& f) const {
  const int cols = n_ + 1;
  for (double rho = 2.5 * h_; rho <= 6.0 * h_; rho += 0.5 * h_) {
    std::array<long, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < n_; ++a) {
      auto i = static_cast<std::size_t>(a);
      lo[i] = static_cast<long>(std::floor((f.x[i] - rho) / h_));
      hi[i] = static_cast<long>(std::ceil((f.x[i] + rho) / h_));
    }
    std::vector<long> nodes;
    for (long i = lo[0]; i <= hi[0]; ++i)
      for (long j = lo[1]; j <= hi[1]; ++j)
        for (long k = lo[2]; k <= hi[2]; ++k) {
          long q = node_at({i, j, k});
          if (q < 0 || flag(q) != NodeFlag::Inside) continue;
          Point x = position(q);
          double r2 = 0.0;
          for (int a = 0; a < n_; ++a) r2 += std::pow(x[static_cast<std::size_t>(a)] - f.x[static_cast<std::size_t>(a)], 2);
          if (r2 <= rho * rho) nodes.push_back(q);
        }
    if (static_cast<int>(nodes.size()) < 2 * cols) continue;
    Eigen::MatrixXd M(static_cast<Eigen::Index>(nodes.size()), cols);
    for (std::size_t r = 0; r < nodes.size(); ++r) {
      Point x = position(nodes[r]);
      double phi = dom_.piece_phi(f.piece, x) / h_;
      auto row = static_cast<Eigen::Index>(r);
      M(row, 0) = phi;
      for (int a = 0; a < n_; ++a) M(row, a + 1) = phi * (x[static_cast<std::size_t>(a)] - f.x[static_cast<std::size_t>(a)]) / h_;
    }
    Eigen::MatrixXd G = M.transpose() * M;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
    if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-10) continue;
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(cols);
    e0(0) = 1.0;
    Eigen::VectorXd row0 = M * ldlt.solve(e0);
    std::vector<NodeStencil> out(static_cast<std::size_t>(n_));
    for (int d = 0; d < n_; ++d)
      for (std::size_t r = 0; r < nodes.size(); ++r)
        out[static_cast<std::size_t>(d)].emplace_back(
            nodes[r], row0(static_cast<Eigen::Index>(r)) / h_ * f.normal[static_cast<std::size_t>(d)]);
    return out;
  }
  throw std::runtime_error("least-squares boundary fit has too few interior nodes");
}

const std::vector<std::vector<NodeStencil>>& Grid::facet_stencils() const {
  if (!facet_stencils_ready_) {
    facet_stencils_.clear();
    facet_stencils_.reserve(mesh_.facets.size());
    for (const auto& f : mesh_.facets)
      facet_stencils_.push_back(f.node >= 0 ? gradient_stencil(f.node, true) : least_squares_stencil(f));
    facet_stencils_ready_ = true;
  }
  return facet_stencils_;
}

GridField::GridField(GridPtr grid, int comps, bool dirichlet)
    : grid_(std::move(grid)), comps_(comps), dirichlet_(dirichlet) {
  values_.assign(static_cast<std::size_t>(grid_->node_count() * comps), 0.0);
}

std::vector<double> GridField::vec(long node) const {
  auto first = values_.begin() + node * comps_;
  return {first, first + comps_};
}

GridField GridField::sample(const GridPtr& grid, int comps, const std::function<std::vector<double>(const Point&)>& fn,
                            bool dirichlet) {
  GridField f(grid, comps, dirichlet);
  for (long node = 0; node < grid->node_count(); ++node) {
    NodeFlag fl = grid->flag(node);
    if (fl == NodeFlag::Outside || (fl == NodeFlag::Boundary && dirichlet)) continue;
    auto v = fn(grid->position(node));
    for (int c = 0; c < comps; ++c) f.at(node, c) = v[static_cast<std::size_t>(c)];
  }
  return f;
}

double GridField::max_abs() const {
  double m = 0.0;
  for (long node = 0; node < grid_->node_count(); ++node) {
    if (!grid_->has_value(node)) continue;
    for (int c = 0; c < comps_; ++c) m = std::max(m, std::abs(at(node, c)));
  }
  return m;
}

namespace {

std::vector<double> apply_stencils(const GridField& field, const std::vector<NodeStencil>& st, int first) {
  const int n = field.grid()->n();
  std::vector<double> J(static_cast<std::size_t>(n * n), 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (const auto& [q, w] : st[static_cast<std::size_t>(i)]) s += w * field.at(q, first + k);
      J[static_cast<std::size_t>(k * n + i)] = s;
    }
  return J;
}

}  // namespace

std::vector<double> gradient_at(const GridField& field, long node, int first) {
  return apply_stencils(field, field.grid()->gradient_stencil(node, field.dirichlet()), first);
}

std::vector<double> facet_gradient(const GridField& field, std::size_t f, int first) {
  return apply_stencils(field, field.grid()->facet_stencils()[f], first);
}

double volume_integral(const Grid& grid, const std::vector<double>& density) {
  if (grid.inside_nodes().empty()) throw std::runtime_error("volume integral over an empty interior");
  const auto& w = grid.weights();
  std::vector<double> terms;
  terms.reserve(grid.inside_nodes().size());
  for (long node = 0; node < grid.node_count(); ++node) {
    double wn = w[static_cast<std::size_t>(node)];
    if (wn != 0.0 && grid.has_value(node)) terms.push_back(wn * density[static_cast<std::size_t>(node)]);
  }
  return pairwise_sum(terms);
}

double boundary_integral(const BoundaryMesh& mesh, const std::vector<double>& flux) {
  if (flux.size() != mesh.facets.size()) throw std::invalid_argument("boundary flux has the wrong length");
  std::vector<double> terms(flux.size());
  for (std::size_t i = 0; i < flux.size(); ++i) {
    if (!(mesh.facets[i].ds > 0)) throw std::runtime_error("degenerate boundary facet");
    terms[i] = mesh.facets[i].ds * flux[i];
  }
  return pairwise_sum(terms);
}

}  // namespace elid

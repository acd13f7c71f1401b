#include "elid/statics/operator.hpp"

#include <stdexcept>

namespace elid {

std::vector<double> gather_unknowns(const GridField& f) {
  const Grid& g = *f.grid();
  const int m = f.comps();
  std::vector<double> x(g.inside_nodes().size() * static_cast<std::size_t>(m));
  for (std::size_t u = 0; u < g.inside_nodes().size(); ++u)
    for (int c = 0; c < m; ++c) x[u * static_cast<std::size_t>(m) + static_cast<std::size_t>(c)] = f.at(g.inside_nodes()[u], c);
  return x;
}

GridField scatter_unknowns(const GridPtr& grid, int comps, const std::vector<double>& x) {
  GridField f(grid, comps, true);
  const auto& inside = grid->inside_nodes();
  if (x.size() != inside.size() * static_cast<std::size_t>(comps)) throw std::invalid_argument("unknown vector has the wrong length");
  for (std::size_t u = 0; u < inside.size(); ++u)
    for (int c = 0; c < comps; ++c) f.at(inside[u], c) = x[u * static_cast<std::size_t>(comps) + static_cast<std::size_t>(c)];
  return f;
}

namespace {

struct Builder {
  const Grid& grid;
  int n;
  bool cut;
  std::vector<Eigen::Triplet<double>> triplets;

  long col(long node, int comp) const { return grid.unknown(node) * n + comp; }

  /// coef * second derivative of u^comp along the lattice offset `off`, added to `row`.
  void second_derivative(long row, long node, const Offset& off, double coef, int comp) {
    Offset back{-off[0], -off[1], -off[2]};
    Grid::Arm p = grid.arm(node, off, cut);
    Grid::Arm m = grid.arm(node, back, cut);
    double cp = 2.0 / ((p.length + m.length) * p.length);
    double cm = 2.0 / ((p.length + m.length) * m.length);
    if (p.node >= 0) triplets.emplace_back(row, col(p.node, comp), coef * cp);
    if (m.node >= 0) triplets.emplace_back(row, col(m.node, comp), coef * cm);
    triplets.emplace_back(row, col(node, comp), -coef * (cp + cm));
  }
};

}  // namespace

SparseMatrix assemble_operator(const Grid& grid, const ElasticModuli& C, Scheme scheme) {
  const int n = grid.n();
  if (C.n() != n) throw std::invalid_argument("moduli and grid disagree on the dimension");
  Builder b{grid, n, scheme == Scheme::ShortleyWeller, {}};
  b.triplets.reserve(grid.inside_nodes().size() * static_cast<std::size_t>(n * n * (2 * n * n + 1)));
  for (long node : grid.inside_nodes())
    for (int i = 1; i <= n; ++i) {
      long row = b.col(node, i - 1);
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
          Offset ek{0, 0, 0};
          ek[static_cast<std::size_t>(k - 1)] = 1;
          double ckk = C.value(i, k, j, k);
          if (ckk != 0.0) b.second_derivative(row, node, ek, ckk, j - 1);
          for (int l = k + 1; l <= n; ++l) {
            // u_kl = (D_aa - D_bb) / 2 with a = e_k + e_l, b = e_k - e_l (unit-direction derivatives).
            double c = C.value(i, k, j, l) + C.value(i, l, j, k);
            if (c == 0.0) continue;
            Offset a = ek, d = ek;
            a[static_cast<std::size_t>(l - 1)] = 1;
            d[static_cast<std::size_t>(l - 1)] = -1;
            b.second_derivative(row, node, a, 0.5 * c, j - 1);
            b.second_derivative(row, node, d, -0.5 * c, j - 1);
          }
        }
    }
  const auto size = static_cast<Eigen::Index>(grid.inside_nodes().size() * static_cast<std::size_t>(n));
  SparseMatrix A(size, size);
  A.setFromTriplets(b.triplets.begin(), b.triplets.end());
  A.makeCompressed();
  return A;
}

}  // namespace elid

#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "elid/grid/grid.hpp"
#include "elid/models/moduli.hpp"

namespace elid {

/// Staircase: full lattice steps, zero beyond Inside nodes (symmetric).
/// ShortleyWeller: arms stop at the boundary crossing (second order on curved boundaries).
/// Both coincide on rectangles aligned with the grid.
enum class Scheme { Staircase, ShortleyWeller };

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Unknown vector layout: entry unknown(node) * comps + c.
std::vector<double> gather_unknowns(const GridField& f);
GridField scatter_unknowns(const GridPtr& grid, int comps, const std::vector<double>& x);

/// Matrix A with (A u)_i = C(i,k,j,l) u^j_kl at Inside nodes, homogeneous Dirichlet data.
/// Mixed derivatives use second differences along the lattice diagonals.
SparseMatrix assemble_operator(const Grid& grid, const ElasticModuli& C, Scheme scheme);

}  // namespace elid

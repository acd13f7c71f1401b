#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "elid/grid/domain.hpp"

namespace elid {

enum class NodeFlag : std::uint8_t { Outside = 0, Inside = 1, Boundary = 2 };

using Offset = std::array<int, 3>;
/// Sparse linear functional: sum of weight * value(node).
using NodeStencil = std::vector<std::pair<long, double>>;

/// Uniform grid x = index * h covering the domain with a one-node margin. Unknowns
/// are the Inside nodes; Boundary nodes lie on the boundary (to 1e-10 h).
class Grid {
 public:
  static std::shared_ptr<const Grid> make(DomainSpec dom, double h);

  [[nodiscard]] const DomainSpec& domain() const { return dom_; }
  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double h() const { return h_; }
  [[nodiscard]] bool aligned() const { return aligned_; }

  [[nodiscard]] long node_count() const { return static_cast<long>(flags_.size()); }
  [[nodiscard]] const std::array<long, 3>& shape() const { return shape_; }
  [[nodiscard]] std::array<long, 3> index(long node) const;
  [[nodiscard]] long node_at(const std::array<long, 3>& idx) const;
  [[nodiscard]] Point position(long node) const;
  /// -1 when the neighbor falls outside the index box.
  [[nodiscard]] long neighbor(long node, const Offset& off) const;
  /// Node whose position is x to within 1e-9 h, or -1.
  [[nodiscard]] long find_node(const Point& x) const;

  [[nodiscard]] NodeFlag flag(long node) const { return flags_[static_cast<std::size_t>(node)]; }
  [[nodiscard]] bool has_value(long node) const { return node >= 0 && flag(node) != NodeFlag::Outside; }
  [[nodiscard]] const std::vector<long>& inside_nodes() const { return inside_; }
  /// Position of node among inside_nodes(), or -1.
  [[nodiscard]] long unknown(long node) const { return unknown_[static_cast<std::size_t>(node)]; }

  /// Volume weight per node: |dual cell intersect domain|, with the mass of cut cells
  /// around Outside nodes moved onto neighboring Inside nodes.
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] const BoundaryMesh& mesh() const { return mesh_; }

  struct Arm {
    double length;
    /// Neighbor node carrying the value, or -1 for a Dirichlet zero at `length`.
    long node;
  };
  /// Arm from an Inside node along a lattice offset. `cut` stops at the first boundary
  /// crossing (Shortley-Weller); otherwise the full lattice step with zero beyond Inside nodes.
  [[nodiscard]] Arm arm(long node, const Offset& off, bool cut) const;

  /// d/dx_d stencils (d = 0..n-1) at a node. `dirichlet` fields vanish on the boundary and
  /// use boundary crossings as zero-valued stencil points.
  [[nodiscard]] std::vector<NodeStencil> gradient_stencil(long node, bool dirichlet) const;
  /// d/dx_d stencils at each facet of mesh() for Dirichlet fields.
  [[nodiscard]] const std::vector<std::vector<NodeStencil>>& facet_stencils() const;

 private:
  Grid(DomainSpec dom, double h);
  void classify();
  void compute_weights();
  [[nodiscard]] std::vector<NodeStencil> least_squares_stencil(const Facet& f) const;

  DomainSpec dom_;
  int n_;
  double h_;
  bool aligned_;
  std::array<long, 3> lo_{0, 0, 0};
  std::array<long, 3> shape_{1, 1, 1};
  std::vector<NodeFlag> flags_;
  std::vector<long> inside_;
  std::vector<long> unknown_;
  std::vector<double> weights_;
  BoundaryMesh mesh_;
  mutable std::vector<std::vector<NodeStencil>> facet_stencils_;
  mutable bool facet_stencils_ready_{false};
};

using GridPtr = std::shared_ptr<const Grid>;

/// Node-major samples of a `comps`-component field. Values at Outside nodes are unused;
/// Dirichlet fields are exactly 0 on Boundary nodes.
class GridField {
 public:
  GridField() = default;
  GridField(GridPtr grid, int comps, bool dirichlet = true);

  [[nodiscard]] const GridPtr& grid() const { return grid_; }
  [[nodiscard]] int comps() const { return comps_; }
  [[nodiscard]] bool dirichlet() const { return dirichlet_; }
  [[nodiscard]] double& at(long node, int c) { return values_[static_cast<std::size_t>(node * comps_ + c)]; }
  [[nodiscard]] double at(long node, int c) const { return values_[static_cast<std::size_t>(node * comps_ + c)]; }
  [[nodiscard]] std::vector<double> vec(long node) const;
  [[nodiscard]] std::vector<double>& values() { return values_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }

  /// Samples fn at Inside nodes (and Boundary nodes for non-Dirichlet fields).
  static GridField sample(const GridPtr& grid, int comps, const std::function<std::vector<double>(const Point&)>& fn,
                          bool dirichlet = true);
  /// Max |value| over Inside and Boundary nodes.
  [[nodiscard]] double max_abs() const;

 private:
  GridPtr grid_;
  int comps_{0};
  bool dirichlet_{true};
  std::vector<double> values_;
};

/// Row-major n x n Jacobian: entry [k * n + i] = d u^(k+1) / d x_(i+1), for components
/// first..first+n-1 of the field.
std::vector<double> gradient_at(const GridField& field, long node, int first = 0);
/// Jacobian at facet `f` of the grid's mesh (Dirichlet fields).
std::vector<double> facet_gradient(const GridField& field, std::size_t f, int first = 0);

/// Weighted sum of node samples (Inside and Boundary nodes). Throws on an empty interior.
double volume_integral(const Grid& grid, const std::vector<double>& density);
/// Facet midpoint rule.
double boundary_integral(const BoundaryMesh& mesh, const std::vector<double>& flux);

}  // namespace elid

#pragma once

#include <array>
#include <vector>

#include "elid/dynamics/integrator.hpp"
#include "elid/symbolic/compiled.hpp"
#include "elid/symbolic/derivations.hpp"

namespace elid {

struct MorawetzRhs {
  double interior{0.0};
  double boundary{0.0};
  /// Boundary term with the quoted coefficients, for comparison only.
  double boundary_quoted{0.0};
};

/// The dilational identity d/dt int M dx = int interior dx + int boundary ds evaluated on
/// grid states, with every integrand compiled from the machine derivation.
class MorawetzFunctionals {
 public:
  MorawetzFunctionals(GridPtr grid, const DynamicModel& model);

  [[nodiscard]] const sym::Derivation& derivation() const { return derivation_; }

  /// int density dx over Inside and Boundary nodes.
  [[nodiscard]] double functional(const DynamicState& s) const;
  /// `functional`, when given, receives functional(s) from the same pass.
  [[nodiscard]] MorawetzRhs rhs(const DynamicState& s, double* functional = nullptr) const;
  /// int |pointwise energy density| dx, used as a scale floor.
  [[nodiscard]] double energy_scale(const DynamicState& s) const;

 private:
  /// Node densities (indexed by node) of each expression.
  [[nodiscard]] std::vector<std::vector<double>> integrate(const DynamicState& s,
                                                           const std::vector<const sym::CompiledExpr*>& exprs,
                                                           bool absolute) const;
  [[nodiscard]] std::vector<double> facet_jet(const DynamicState& s, std::size_t f) const;

  GridPtr grid_;
  DynamicModel model_;
  sym::Derivation derivation_;
  sym::JetLayout layout_;
  sym::CompiledExpr density_, interior_, boundary_, boundary_quoted_, energy_density_;
  /// d/dx_d over all nodes as sparse matrices (rows without values are empty).
  std::vector<Eigen::SparseMatrix<double, Eigen::RowMajor>> grad_;
};

}  // namespace elid

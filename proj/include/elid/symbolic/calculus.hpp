#pragma once

#include <vector>

#include "elid/symbolic/diff_expr.hpp"

namespace elid::sym {

/// The jet space a computation lives in: spatial dimension, whether t is an
/// independent variable, and how many dependent vector fields (u, or u and v).
struct JetSpace {
  int n{2};
  bool time{false};
  int fields{1};

  /// Derivative directions: {1..n}, preceded by 0 when time is present.
  [[nodiscard]] std::vector<int> directions() const;
  [[nodiscard]] std::vector<Field> field_list() const;
  void validate() const;
};

/// Jet coordinates an opaque function atom depends on.
std::vector<Atom> function_arguments(FuncSym s, const JetSpace& space);

/// Chain-rule derivation: `datom` gives the derivative of each atom.
DiffExpr differentiate(const DiffExpr& e, const std::function<DiffExpr(const Atom&)>& datom);

/// D_dir e. Throws OrderError when e contains second-derivative atoms.
DiffExpr total_derivative(const DiffExpr& e, int dir, const JetSpace& space);

/// Partial with respect to an independent or dependent coordinate, including the
/// dependence carried by potentials (dF/du^k = F_{u^k}, dG^i/dx_j = G^i_{x_j}).
DiffExpr partial_coordinate(const DiffExpr& e, const Atom& coordinate, const JetSpace& space);

/// Formal partial with respect to a derivative atom (e.g. u^i_j).
DiffExpr partial_atom(const DiffExpr& e, const Atom& target);

/// E_{field,comp}(L) = dL/du - sum_d D_d (dL/du_d). L must be first order.
DiffExpr euler_operator(const DiffExpr& L, Field f, int comp, const JetSpace& space);

}  // namespace elid::sym

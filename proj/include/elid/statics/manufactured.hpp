#pragma once

#include <vector>

#include "elid/models/moduli.hpp"
#include "elid/models/potential.hpp"
#include "elid/statics/static_solver.hpp"

namespace elid {

/// amp * prod_d sin(omega_d x_d + phase_d)
struct TrigProduct {
  double amp{0.0};
  std::vector<double> omega;
  std::vector<double> phase;

  /// Mixed partial with orders[d] derivatives in x_d.
  [[nodiscard]] double derivative(const Point& x, const std::vector<int>& orders) const;
  [[nodiscard]] double value(const Point& x) const;
};

/// One TrigProduct per component.
struct ManufacturedSolution {
  std::vector<TrigProduct> comps;

  [[nodiscard]] int n() const { return static_cast<int>(comps.size()); }
  [[nodiscard]] std::vector<double> value(const Point& x) const;
  /// Row-major [k * n + i] = d u^(k+1) / d x_(i+1).
  [[nodiscard]] std::vector<double> gradient(const Point& x) const;

  /// sin(pi x_1) ... sin(pi x_n) in the first component on the unit cube.
  static ManufacturedSolution unit_cube_mode(int n, double amp = 1.0);
};

/// g with C u*_kl + f(u*) + g = 0, and its Jacobian from third derivatives of u*.
VectorSource manufactured_source(const ElasticModuli& C, const BodyForcePotential& F, const ManufacturedSolution& u);

}  // namespace elid

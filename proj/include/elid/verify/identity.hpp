#pragma once

#include <string>
#include <vector>

#include "elid/dynamics/trajectory.hpp"
#include "elid/statics/static_solver.hpp"

namespace elid {

/// Both sides of one integral identity at one resolution. Dynamic identities compare
/// dM/dt with the right-hand side at every sample; the scalars then hold the worst sample.
struct IdentityReport {
  std::string id;
  double h{0.0};
  double dt{0.0};
  double lhs{0.0};
  double rhs{0.0};
  double gap{0.0};
  double scale{0.0};
  double relative_gap{0.0};
  /// Right-hand side with the quoted coefficients (static: printed isotropic display).
  double rhs_quoted{0.0};
  std::vector<double> times, lhs_series, rhs_series;
  std::vector<std::string> notes;

  [[nodiscard]] std::string text() const;
};

/// gap / scale with scale = max(|lhs|, |rhs|, energy scale), falling back to 1 when all vanish.
void finish_report(IdentityReport& r, double energy_scale);

/// int [((n-2)/2) u.f - n F] dx against the boundary term of the machine derivation.
/// Throws std::invalid_argument when the problem carries a source.
IdentityReport verify_pohozhaev(const StaticSolution& sol, const StaticProblem& p);
/// As verify_pohozhaev, with the isotropic boundary form -(1/2) int [mu |grad u|^2 + (mu + lambda)(div u)^2](x, nu) ds.
IdentityReport verify_pohozhaev_isotropic(const StaticSolution& sol, const StaticProblem& p, const IsotropicModuli& iso);
/// Identity for L - g(x).u, with the correction from the x-dependence of g derived symbolically.
/// Without a source this is verify_pohozhaev under a different id.
IdentityReport verify_pohozhaev_generalized(const StaticSolution& sol, const StaticProblem& p);

/// Throws std::runtime_error when a free-space trajectory ran past the contact time.
IdentityReport verify_morawetz(const Trajectory& tr, const DynamicModel& model);
/// Throws std::invalid_argument unless the model is the coupled system (even n, a + b = 2).
IdentityReport verify_hamiltonian_conformal(const Trajectory& tr, const DynamicModel& model);

/// Reports over successive refinements.
struct RefinementStudy {
  std::vector<IdentityReport> levels;
  /// Observed order of relative_gap against h (static) or the Richardson dt-order (dynamic).
  double order{0.0};
  std::string order_label{"h"};

  /// relative_gap strictly decreasing across the levels (exact zeros may repeat).
  [[nodiscard]] bool monotone() const;
  /// relative_gap <= threshold at the coarsest level, monotone over at least three levels.
  [[nodiscard]] bool pass(double threshold = 5e-2) const;
  [[nodiscard]] std::string text() const;
  /// identity, h, dt, lhs, rhs, gap, relative_gap, order
  [[nodiscard]] std::string csv() const;
};

RefinementStudy h_refinement(std::vector<IdentityReport> levels);

/// Three runs at fixed h with dt, dt/r, dt/r^2 and common sample times. The gap differences
/// cancel the spatial error: order = log(max|g1 - g2| / max|g2 - g3|) / log r.
double richardson_dt_order(const std::vector<Trajectory>& runs, bool freespace);

}  // namespace elid

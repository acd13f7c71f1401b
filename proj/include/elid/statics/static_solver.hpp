#pragma once

#include <functional>
#include <string>
#include <vector>

#include "elid/grid/grid.hpp"
#include "elid/models/moduli.hpp"
#include "elid/models/potential.hpp"
#include "elid/statics/operator.hpp"

namespace elid {

/// Prescribed vector field g(x) with its Jacobian (row-major, [i * n + j] = dg^i/dx_j).
struct VectorSource {
  std::function<std::vector<double>(const Point&)> value;
  std::function<std::vector<double>(const Point&)> jacobian;

  [[nodiscard]] explicit operator bool() const { return static_cast<bool>(value); }
};

/// C(i,k,j,l) u^j_kl + f_i(u) + g_i = 0 in the domain, u = 0 on the boundary.
struct StaticProblem {
  GridPtr grid;
  ElasticModuli C{2};
  BodyForcePotential F;
  VectorSource source;
  Scheme scheme{Scheme::Staircase};

  [[nodiscard]] int n() const { return grid->n(); }
  /// max(1, max |g|) over Inside nodes.
  [[nodiscard]] double scale() const;
};

struct SolverTelemetry {
  long iteration;
  double energy;
  double residual;
};

struct StaticSolution {
  GridField u;
  /// Max-norm of the independently assembled residual.
  double residual_norm{0.0};
  double energy{0.0};
  long iterations{0};
  bool converged{false};
  bool unbounded{false};
  std::string status;
  std::vector<SolverTelemetry> history;
};

struct SolveOptions {
  /// 0 selects 1e-8 * problem scale.
  double tol_res{0.0};
  /// 0 selects 10 * number of unknowns.
  long max_iter{0};
  double energy_floor{-1e30};
};

/// Node-wise C u_kl + f(u) + g by direct stencil loops (zero off the Inside nodes).
GridField assemble_residual(const StaticProblem& p, const GridField& u);
double residual_max_norm(const StaticProblem& p, const GridField& u);

/// h^n sum over Inside nodes of [-u.Au/2 - F(u) - g.u]; the quadratic term is the
/// summation-by-parts form of C grad u grad u / 2.
double discrete_energy(const StaticProblem& p, const GridField& u);

/// Minimizes the discrete energy by Polak-Ribiere+ conjugate gradients: exact step on the
/// quadratic part, then Armijo backtracking (factor 0.5, slope 1e-4) on the full energy.
/// The Shortley-Weller scheme is not symmetric, so there linear problems are solved directly.
StaticSolution solve_static(const StaticProblem& p, const GridField& init, const SolveOptions& opts = {});

struct EigenPair {
  double kappa{0.0};
  GridField u;
  double residual{0.0};
  long iterations{0};
};

/// Smallest eigenvalue of -A (F and g ignored) by inverse iteration with a sparse LU
/// factorization; u is normalized to unit max-norm.
EigenPair smallest_eigenpair(const StaticProblem& p, double tol = 1e-10, long max_iter = 2000);

}  // namespace elid

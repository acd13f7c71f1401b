#pragma once

#include <stdexcept>
#include <string>

#include "elid/grid/grid.hpp"
#include "elid/models/moduli.hpp"
#include "elid/models/potential.hpp"
#include "elid/statics/operator.hpp"

namespace elid {

enum class DynamicKind { Potential, Hamiltonian };

/// u_tt = C u_kl + f(u), or the coupled pair u_tt = C u_kl + H_v, v_tt = C v_kl + H_u.
struct DynamicModel {
  DynamicKind kind{DynamicKind::Potential};
  ElasticModuli C{2};
  BodyForcePotential F;
  CouplingPotential H;
  /// Dilation weights of the coupled identity (a + b = 2).
  Rational a{1}, b{1};

  static DynamicModel potential(ElasticModuli C, BodyForcePotential F);
  /// Throws for odd dimensions, a + b != 2 or moduli without major symmetry.
  static DynamicModel hamiltonian(ElasticModuli C, CouplingPotential H, const Rational& a = 1, const Rational& b = 1);

  [[nodiscard]] int n() const { return C.n(); }
  [[nodiscard]] bool coupled() const { return kind == DynamicKind::Hamiltonian; }
  [[nodiscard]] std::string describe() const;
};

/// Time t and the fields; v and v_t are empty for the potential system.
struct DynamicState {
  double t{0.0};
  GridField u, u_t, v, v_t;
};

/// Non-finite values or a step-size violation during integration.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
  [[nodiscard]] long step() const { return step_; }

 private:
  long step_;
};

constexpr double kDefaultCfl = 0.5;

/// cfl * h / c_max with c_max the largest acoustic wave speed of C.
double stable_time_step(const Grid& grid, const ElasticModuli& C, double cfl = kDefaultCfl);

/// Velocity Verlet on the staircase discretization.
class Integrator {
 public:
  /// Throws IntegrationError (step -1) when dt exceeds the stability bound.
  Integrator(GridPtr grid, DynamicModel model, double dt, double cfl = kDefaultCfl);

  [[nodiscard]] const GridPtr& grid() const { return grid_; }
  [[nodiscard]] const DynamicModel& model() const { return model_; }
  [[nodiscard]] double dt() const { return dt_; }
  [[nodiscard]] long steps_taken() const { return steps_; }

  /// Zero fields of the right shape at t = 0.
  [[nodiscard]] DynamicState zero_state() const;
  /// Half kick, drift, half kick. Boundary values stay exactly zero.
  void step(DynamicState& s);
  /// Runs with dt replaced by -dt.
  void step_backward(DynamicState& s);

  /// Discrete conserved energy: h^n sum[|u_t|^2/2 - F] - h^n u.Au/2, or
  /// h^n sum[u_t.v_t - H] - h^n u.Av for the coupled system.
  [[nodiscard]] double energy(const DynamicState& s) const;

 private:
  void advance(DynamicState& s, double dt);
  [[nodiscard]] Eigen::VectorXd accel(const Eigen::VectorXd& x, const Eigen::VectorXd& partner, bool for_v) const;

  GridPtr grid_;
  DynamicModel model_;
  double dt_;
  SparseMatrix A_;
  long steps_{0};
  bool forcing_vanishes_at_zero_{false};
  bool cache_valid_{false};
  Eigen::VectorXd cache_u_, cache_v_, cache_au_, cache_av_;
};

}  // namespace elid

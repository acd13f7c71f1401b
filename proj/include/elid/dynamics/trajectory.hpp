#pragma once

#include <string>
#include <vector>

#include "elid/dynamics/functionals.hpp"
#include "elid/dynamics/integrator.hpp"

namespace elid {

/// Compact bump A exp(1 - 1/(1 - r^2/w^2)) along a fixed direction, zero for r >= w.
struct BumpData {
  Point center;
  double width{0.75};
  double amplitude{0.5};
  std::vector<double> direction;  ///< empty selects the first axis
};

DynamicState bump_state(const Integrator& integ, const BumpData& bump);

/// Lowest discrete eigenfield of -A scaled to max-norm `amplitude`, zero velocity; v = u for
/// the coupled system. `kappa` receives the eigenvalue.
DynamicState eigenmode_state(const Integrator& integ, double amplitude, double* kappa = nullptr);

/// (distance from the bump support to the box boundary) / c_max.
double contact_time(const DomainSpec& box, const BumpData& bump, const ElasticModuli& C);

struct TimeSample {
  double t;
  double M;
  double dM_dt;
  double rhs_interior;
  double rhs_boundary;
  double rhs_boundary_quoted;
  double gap;
  double energy;
};

struct TrajectoryOptions {
  double dt{0.0};  ///< requested step; 0 selects cfl * h / c_max
  double horizon{0.5};
  int samples{16};
  double cfl{kDefaultCfl};
  /// Drop the boundary term; the run must end before `contact_time`.
  bool freespace{false};
  double contact_time{0.0};
};

struct Trajectory {
  double h{0.0};
  double dt{0.0};
  long steps{0};
  bool freespace{false};
  double contact_time{0.0};
  /// Largest time the functional was evaluated at.
  double end_time{0.0};
  double energy0{0.0};
  double energy_scale{0.0};
  std::vector<TimeSample> samples;

  [[nodiscard]] bool window_ok() const { return !freespace || end_time <= contact_time; }
  [[nodiscard]] double max_energy_drift() const;
  /// t, M, dM_dt_centered, rhs_interior, rhs_boundary, gap, energy
  [[nodiscard]] std::string csv() const;
};

/// Steps from `init` and samples the identity at `samples` equally spaced times in
/// (0, horizon]. dt is shrunk so that every sample time is a whole number of steps; dM/dt is the
/// centered difference over one step around each sample.
Trajectory run_trajectory(GridPtr grid, const DynamicModel& model, const std::function<DynamicState(const Integrator&)>& init,
                          const TrajectoryOptions& opts);

}  // namespace elid

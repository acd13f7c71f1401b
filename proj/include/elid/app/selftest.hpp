#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace elid::app {

struct SelfCheck {
  std::string name;
  bool pass{false};
  std::string detail;
};

/// Symbolic and integrator self-tests: the Euler operator kills random total divergences,
/// leapfrog runs backward to the initial state, and the energy drift is second order in dt.
std::vector<SelfCheck> run_selftest(std::uint64_t seed = 1, int divergence_cases = 100);

}  // namespace elid::app

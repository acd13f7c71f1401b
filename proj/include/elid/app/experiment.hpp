#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "elid/app/config.hpp"
#include "elid/grid/domain.hpp"
#include "elid/models/moduli.hpp"
#include "elid/models/potential.hpp"
#include "elid/symbolic/derivations.hpp"

namespace elid::app {

inline constexpr std::string_view kVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kIdentityFail = 1, kInputError = 2, kSolverFailure = 3 };

/// Solver did not reach its tolerance; maps to exit code 3.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

DomainSpec build_domain(const ExperimentConfig& cfg);
/// `iso` receives the Lame pair for isotropic moduli and is cleared otherwise.
ElasticModuli build_moduli(const ExperimentConfig& cfg, std::optional<IsotropicModuli>* iso = nullptr);
BodyForcePotential build_potential(const ExperimentConfig& cfg);
CouplingPotential build_coupling(const ExperimentConfig& cfg);

/// Physical admissibility of the configured model for a command; throws ConfigError.
void check_admissible(const ExperimentConfig& cfg, std::string_view command);

/// The derivations behind an identity name; the coupled identity also carries the
/// derivation from the quoted Lagrangian.
std::vector<sym::Derivation> derivations_for(const std::string& identity, int n, const sym::Rational& a, const sym::Rational& b,
                                             sym::ModuliSymmetry symmetry);
std::string derivation_text(const std::vector<sym::Derivation>& ds);

std::uint64_t fnv1a64(std::string_view data);

/// --out flag, else output.dir, else $ELID_OUTPUT_DIR, else "elid-out".
std::string resolve_output_dir(const ExperimentConfig& cfg, const std::string& flag = "");

/// Each command writes its files and a manifest into `out_dir`, prints a summary to `out`
/// and returns an ExitCode. Errors are reported on `err`.
int cmd_derive(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out, std::ostream& err);
int cmd_verify_static(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out, std::ostream& err);
int cmd_verify_dynamic(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out, std::ostream& err);
int cmd_certify(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out, std::ostream& err);
int cmd_selftest(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out, std::ostream& err);

/// Dispatches on the command name ("derive", "verify-static", ...).
int run_command(const std::string& command, const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out,
                std::ostream& err);

}  // namespace elid::app

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "elid/grid/domain.hpp"
#include "elid/models/moduli.hpp"
#include "elid/models/potential.hpp"

namespace elid {

struct CertificateClause {
  std::string id;
  std::string statement;
  bool pass{false};
  /// False when the verdict rests on sampling only.
  bool proven{false};
  std::string detail;
};

/// The four hypotheses under which the potential system has no non-trivial classical
/// solution with homogeneous Dirichlet data.
struct CertificateReport {
  std::vector<CertificateClause> clauses;

  [[nodiscard]] bool pass() const;
  [[nodiscard]] bool proven() const;
  /// Ids of failing clauses, e.g. "ii".
  [[nodiscard]] std::vector<std::string> failed() const;
  [[nodiscard]] std::string str() const;
};

struct CertificateOptions {
  int samples{4000};
  std::uint64_t seed{1};
  /// Mesh spacing for the star-shape test; 0 picks a default from the domain size.
  double mesh_h{0.0};
};

CertificateReport nonexistence_certificate(const BodyForcePotential& F, const ElasticModuli& C, const DomainSpec& dom,
                                           const CertificateOptions& opts = {});

}  // namespace elid

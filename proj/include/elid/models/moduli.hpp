#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elid/symbolic/compiled.hpp"
#include "elid/symbolic/lagrangians.hpp"

namespace elid {

using sym::Rational;

/// Constant rank-4 tensor C(i, k, j, l), the coefficient of u^i_k u^j_l (1-based
/// indices). Entries are exact; a double view is kept alongside.
class ElasticModuli {
 public:
  explicit ElasticModuli(int n);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] const Rational& at(int i, int k, int j, int l) const { return exact_[index(i, k, j, l)]; }
  [[nodiscard]] double value(int i, int k, int j, int l) const { return numeric_[index(i, k, j, l)]; }
  void set(int i, int k, int j, int l, const Rational& c);

  [[nodiscard]] sym::ModuliFn symbolic() const;
  [[nodiscard]] sym::NumericModuli numeric() const;
  /// Symmetry class used when canonicalizing modulus atoms.
  [[nodiscard]] sym::ModuliSymmetry symmetry_class() const;

  [[nodiscard]] ElasticModuli operator-() const;

 private:
  [[nodiscard]] std::size_t index(int i, int k, int j, int l) const;
  int n_;
  std::vector<Rational> exact_;
  std::vector<double> numeric_;
};

struct IsotropicModuli {
  Rational mu;
  Rational lame_lambda;
};

/// lambda d_ik d_jl + mu (d_ij d_kl + d_il d_kj); C e e / 2 = mu |e|^2 + lambda/2 (tr e)^2.
ElasticModuli moduli_from_lame(const IsotropicModuli& iso, int n);
/// d_ij d_kl: one Laplacian per component (major symmetry only).
ElasticModuli laplacian_moduli(int n, const Rational& scale = 1);

struct SymmetryCheck {
  bool pass{true};
  std::array<int, 4> index{0, 0, 0, 0};
  std::string relation;
};

/// The three generating relations: swap (i,k), swap (j,l), swap pairs.
SymmetryCheck check_symmetries(const ElasticModuli& C);
bool has_major_symmetry(const ElasticModuli& C);
/// Average over the orbit of the symmetry group.
ElasticModuli symmetrize(const ElasticModuli& C);

struct FormCheck {
  bool pass{false};
  double min_value{0.0};
  double max_value{0.0};
  std::string detail;
};

constexpr double kTolEig = 1e-12;

/// C a a >= 0 for all n x n matrices a: eigenvalues of the induced n^2 x n^2 form,
/// plus `trials` random matrices.
FormCheck check_positivity(const ElasticModuli& C, int trials = 200, std::uint64_t seed = 1);
/// C v v w w > 0 on rank-one matrices: random unit pairs plus a direction grid.
FormCheck check_legendre_hadamard(const ElasticModuli& C, int trials = 200, std::uint64_t seed = 1);

/// Acoustic tensor A(w)_ij = C(i,k,j,l) w_k w_l.
std::vector<double> acoustic_tensor(const ElasticModuli& C, const std::vector<double>& w);
/// sqrt of the largest acoustic eigenvalue over a direction grid (unit density).
double max_wave_speed(const ElasticModuli& C);

}  // namespace elid

#include "elid/models/moduli.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace elid {

ElasticModuli::ElasticModuli(int n) : n_(n) {
  if (n < 2 || n > 4) throw std::invalid_argument("moduli dimension must be 2, 3 or 4");
  std::size_t size = static_cast<std::size_t>(n * n * n * n);
  exact_.assign(size, Rational(0));
  numeric_.assign(size, 0.0);
}

std::size_t ElasticModuli::index(int i, int k, int j, int l) const {
  return static_cast<std::size_t>((((i - 1) * n_ + (k - 1)) * n_ + (j - 1)) * n_ + (l - 1));
}

void ElasticModuli::set(int i, int k, int j, int l, const Rational& c) {
  exact_[index(i, k, j, l)] = c;
  numeric_[index(i, k, j, l)] = c.get_d();
}

sym::ModuliFn ElasticModuli::symbolic() const {
  ElasticModuli copy = *this;
  return [copy](int i, int k, int j, int l) { return sym::DiffExpr(copy.at(i, k, j, l)); };
}

sym::NumericModuli ElasticModuli::numeric() const {
  std::vector<double> values = numeric_;
  int n = n_;
  return [values, n](int i, int k, int j, int l) {
    return values[static_cast<std::size_t>((((i - 1) * n + (k - 1)) * n + (j - 1)) * n + (l - 1))];
  };
}

sym::ModuliSymmetry ElasticModuli::symmetry_class() const {
  return check_symmetries(*this).pass ? sym::ModuliSymmetry::Full : sym::ModuliSymmetry::MajorOnly;
}

ElasticModuli ElasticModuli::operator-() const {
  ElasticModuli out(n_);
  for (int i = 1; i <= n_; ++i)
    for (int k = 1; k <= n_; ++k)
      for (int j = 1; j <= n_; ++j)
        for (int l = 1; l <= n_; ++l) out.set(i, k, j, l, -at(i, k, j, l));
  return out;
}

namespace {

int delta(int a, int b) { return a == b ? 1 : 0; }

}  // namespace

ElasticModuli moduli_from_lame(const IsotropicModuli& iso, int n) {
  if (iso.mu <= 0) throw std::invalid_argument("shear modulus mu must be positive");
  if (iso.mu + iso.lame_lambda <= 0) throw std::invalid_argument("mu + lambda must be positive");
  ElasticModuli C(n);
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l)
          C.set(i, k, j, l,
                iso.lame_lambda * delta(i, k) * delta(j, l) +
                    iso.mu * (delta(i, j) * delta(k, l) + delta(i, l) * delta(k, j)));
  return C;
}

ElasticModuli laplacian_moduli(int n, const Rational& scale) {
  ElasticModuli C(n);
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k) C.set(i, k, i, k, scale);
  return C;
}

SymmetryCheck check_symmetries(const ElasticModuli& C) {
  const int n = C.n();
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l) {
          const Rational& c = C.at(i, k, j, l);
          if (c != C.at(k, i, j, l)) return {false, {i, k, j, l}, "C(i,k,j,l) = C(k,i,j,l)"};
          if (c != C.at(i, k, l, j)) return {false, {i, k, j, l}, "C(i,k,j,l) = C(i,k,l,j)"};
          if (c != C.at(j, l, i, k)) return {false, {i, k, j, l}, "C(i,k,j,l) = C(j,l,i,k)"};
        }
  return {};
}

bool has_major_symmetry(const ElasticModuli& C) {
  const int n = C.n();
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l)
          if (C.at(i, k, j, l) != C.at(j, l, i, k)) return false;
  return true;
}

ElasticModuli symmetrize(const ElasticModuli& C) {
  const int n = C.n();
  ElasticModuli out(n);
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l) {
          Rational s = C.at(i, k, j, l) + C.at(k, i, j, l) + C.at(i, k, l, j) + C.at(k, i, l, j) + C.at(j, l, i, k) +
                       C.at(l, j, i, k) + C.at(j, l, k, i) + C.at(l, j, k, i);
          out.set(i, k, j, l, s / 8);
        }
  return out;
}

namespace {

double form_value(const ElasticModuli& C, const std::vector<double>& a) {
  const int n = C.n();
  double s = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l)
          s += C.value(i, k, j, l) * a[static_cast<std::size_t>((i - 1) * n + k - 1)] *
               a[static_cast<std::size_t>((j - 1) * n + l - 1)];
  return s;
}

std::vector<double> random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  double norm = 0.0;
  while (norm < 1e-8) {
    norm = 0.0;
    for (auto& x : v) {
      x = g(rng);
      norm += x * x;
    }
  }
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

/// Unit directions covering a half-sphere (the forms are even in w).
std::vector<std::vector<double>> direction_grid(int n) {
  std::vector<std::vector<double>> dirs;
  const double pi = std::acos(-1.0);
  if (n == 2) {
    const int m = 720;
    for (int a = 0; a < m; ++a) {
      double th = pi * a / m;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  } else if (n == 3) {
    const int mt = 90, mp = 180;
    for (int a = 0; a <= mt; ++a) {
      double th = 0.5 * pi * a / mt;
      for (int b = 0; b < mp; ++b) {
        double ph = 2.0 * pi * b / mp;
        dirs.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
      }
    }
  } else {
    const int m = 16;
    for (int a = 0; a <= m; ++a)
      for (int b = 0; b <= m; ++b)
        for (int c = 0; c < 2 * m; ++c) {
          double t1 = 0.5 * pi * a / m, t2 = pi * b / m, t3 = pi * c / m;
          dirs.push_back({std::cos(t1), std::sin(t1) * std::cos(t2), std::sin(t1) * std::sin(t2) * std::cos(t3),
                          std::sin(t1) * std::sin(t2) * std::sin(t3)});
        }
  }
  return dirs;
}

double min_acoustic_eigen(const ElasticModuli& C, const std::vector<double>& w, double* max_eig) {
  const int n = C.n();
  std::vector<double> A = acoustic_tensor(C, w);
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      M(i, j) = 0.5 * (A[static_cast<std::size_t>(i * n + j)] + A[static_cast<std::size_t>(j * n + i)]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  if (max_eig) *max_eig = es.eigenvalues().maxCoeff();
  return es.eigenvalues().minCoeff();
}

}  // namespace

FormCheck check_positivity(const ElasticModuli& C, int trials, std::uint64_t seed) {
  const int n = C.n();
  const int m = n * n;
  Eigen::MatrixXd M(m, m);
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l)
          M((i - 1) * n + k - 1, (j - 1) * n + l - 1) = 0.5 * (C.value(i, k, j, l) + C.value(j, l, i, k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  FormCheck out;
  out.min_value = es.eigenvalues().minCoeff();
  out.max_value = es.eigenvalues().maxCoeff();
  double scale = std::max(1.0, std::abs(out.max_value));
  bool eig_ok = out.min_value >= -kTolEig * scale;

  std::mt19937_64 rng(seed);
  double sample_min = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) sample_min = std::min(sample_min, form_value(C, random_unit(rng, m)));
  bool sample_ok = trials == 0 || sample_min >= -kTolEig * scale;
  out.pass = eig_ok && sample_ok;
  std::ostringstream os;
  os << "min eigenvalue of the induced form " << out.min_value;
  if (trials > 0) os << ", min over " << trials << " random unit matrices " << sample_min;
  out.detail = os.str();
  return out;
}

FormCheck check_legendre_hadamard(const ElasticModuli& C, int trials, std::uint64_t seed) {
  const int n = C.n();
  FormCheck out;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto visit = [&](const std::vector<double>& w) {
    double mx = 0.0;
    lo = std::min(lo, min_acoustic_eigen(C, w, &mx));
    hi = std::max(hi, mx);
  };
  for (const auto& w : direction_grid(n)) visit(w);
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) visit(random_unit(rng, n));
  out.min_value = lo;
  out.max_value = hi;
  out.pass = lo > kTolEig * std::max(1.0, std::abs(hi));
  std::ostringstream os;
  os << "min over unit v, w of C v v w w = " << lo;
  out.detail = os.str();
  return out;
}

std::vector<double> acoustic_tensor(const ElasticModuli& C, const std::vector<double>& w) {
  const int n = C.n();
  std::vector<double> A(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      double s = 0.0;
      for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l)
          s += C.value(i, k, j, l) * w[static_cast<std::size_t>(k - 1)] * w[static_cast<std::size_t>(l - 1)];
      A[static_cast<std::size_t>((i - 1) * n + j - 1)] = s;
    }
  return A;
}

double max_wave_speed(const ElasticModuli& C) {
  double hi = 0.0;
  for (const auto& w : direction_grid(C.n())) {
    double mx = 0.0;
    min_acoustic_eigen(C, w, &mx);
    hi = std::max(hi, mx);
  }
  return std::sqrt(std::max(hi, 0.0));
}

}  // namespace elid

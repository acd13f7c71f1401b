#include "elid/models/certificate.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace elid {

namespace {

struct ExactDeficit {
  bool applicable{false};
  bool positive{false};
  std::string detail;
};

/// Exact sign of the deficit for the kinds where it is a finite sum of monomials.
ExactDeficit exact_deficit(const BodyForcePotential& F, int n) {
  ExactDeficit out;
  const Rational half_n2(n - 2, 2);
  switch (F.kind()) {
    case PotentialKind::Zero:
      out.applicable = true;
      out.detail = "deficit vanishes identically";
      break;
    case PotentialKind::Quadratic:
    case PotentialKind::Power: {
      Rational c = F.kind() == PotentialKind::Quadratic ? Rational(F.coefficient() / 2) : F.coefficient();
      Rational p = F.kind() == PotentialKind::Quadratic ? Rational(2) : F.exponent();
      Rational k = c * (half_n2 * p - n);
      k.canonicalize();
      out.applicable = true;
      out.positive = k > 0;
      out.detail = "deficit = " + sym::to_string(k) + " |s|^" + sym::to_string(p);
      break;
    }
    case PotentialKind::Polynomial: {
      // s.grad of a monomial of degree d is d times the monomial.
      std::map<std::vector<int>, Rational> D;
      for (const auto& t : F.terms()) {
        int deg = 0;
        for (int e : t.exponents) deg += e;
        D[t.exponents] += t.coef * (half_n2 * deg - n);
      }
      bool all_even_positive = true;
      std::vector<bool> pure(static_cast<std::size_t>(n), false);
      std::ostringstream os;
      os << "deficit =";
      for (auto& [e, c] : D) {
        c.canonicalize();
        if (c == 0) continue;
        os << " " << sym::to_string(c) << "*s^(";
        int nonzero = 0, which = -1;
        for (std::size_t k = 0; k < e.size(); ++k) {
          os << (k ? "," : "") << e[k];
          if (e[k] % 2 != 0) all_even_positive = false;
          if (e[k] != 0) {
            ++nonzero;
            which = static_cast<int>(k);
          }
        }
        os << ")";
        if (c < 0) all_even_positive = false;
        if (nonzero == 1 && c > 0) pure[static_cast<std::size_t>(which)] = true;
      }
      bool every_axis = true;
      for (bool b : pure) every_axis = every_axis && b;
      out.positive = all_even_positive && every_axis;
      // Only a positive verdict is a proof; otherwise the samples decide.
      out.applicable = out.positive;
      out.detail = os.str() + (out.positive ? " (even powers, positive coefficients, every axis present)" : "");
      break;
    }
    case PotentialKind::Tabulated:
      break;
  }
  return out;
}

}  // namespace

bool CertificateReport::pass() const {
  for (const auto& c : clauses)
    if (!c.pass) return false;
  return !clauses.empty();
}

bool CertificateReport::proven() const {
  for (const auto& c : clauses)
    if (!c.proven) return false;
  return pass();
}

std::vector<std::string> CertificateReport::failed() const {
  std::vector<std::string> ids;
  for (const auto& c : clauses)
    if (!c.pass) ids.push_back(c.id);
  return ids;
}

std::string CertificateReport::str() const {
  std::ostringstream os;
  os << "certificate: " << (pass() ? "PASS" : "FAIL");
  auto f = failed();
  if (!f.empty()) {
    os << " (clause";
    for (const auto& id : f) os << " " << id;
    os << ")";
  }
  if (pass() && !proven()) os << " [sampled, not proven]";
  os << "\n";
  for (const auto& c : clauses)
    os << "  (" << c.id << ") " << c.statement << ": " << (c.pass ? "pass" : "FAIL") << " ["
       << (c.proven ? "exact" : "sampled, not proven") << "] " << c.detail << "\n";
  return os.str();
}

CertificateReport nonexistence_certificate(const BodyForcePotential& F, const ElasticModuli& C, const DomainSpec& dom,
                                           const CertificateOptions& opts) {
  const int n = C.n();
  if (dom.n != n) throw std::invalid_argument("moduli and domain disagree on the dimension");
  CertificateReport rep;

  CertificateClause c1{"i", "F(0) = 0", false, true, ""};
  std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
  double f0 = F.value(zero);
  if (auto sym0 = F.symbolic(n)) {
    auto at0 = sym::substitute(*sym0, [](const sym::Atom& a) -> std::optional<sym::DiffExpr> {
      if (a.kind == sym::AtomKind::Dep) return sym::DiffExpr();
      return std::nullopt;
    });
    c1.pass = at0.is_zero();
    c1.detail = "exact value " + (at0.is_zero() ? std::string("0") : at0.str());
  } else {
    c1.pass = f0 == 0.0;
    c1.detail = "table value at r = 0 is " + std::to_string(f0);
  }
  rep.clauses.push_back(c1);

  CertificateClause c2{"ii", "((n-2)/2) s.f(s) - n F(s) > 0 for s != 0", false, false, ""};
  ExactDeficit ex = exact_deficit(F, n);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const bool tab = F.kind() == PotentialKind::Tabulated;
  const double rmax = tab ? F.table().r.back() : 1e2;
  const double rmin = tab ? rmax * 1e-4 : 1e-3;
  double min_ratio = std::numeric_limits<double>::infinity();
  double worst_r = 0.0;
  for (int k = 0; k < opts.samples; ++k) {
    std::vector<double> s(static_cast<std::size_t>(n));
    double len = 0.0;
    for (auto& v : s) {
      v = g(rng);
      len += v * v;
    }
    len = std::sqrt(len);
    double r = rmin * std::pow(rmax / rmin, unif(rng));
    for (auto& v : s) v *= r / len;
    // Compare against |s|^2 scaled by the potential's own size to keep the test scale-free.
    double d = scaling_deficit(F, s, n);
    double scale = std::abs(F.value(s)) + std::abs(r * r);
    double ratio = d / (scale > 0 ? scale : 1.0);
    if (ratio < min_ratio) {
      min_ratio = ratio;
      worst_r = r;
    }
  }
  const bool sampled_ok = min_ratio > 0.0;
  std::ostringstream d2;
  if (ex.applicable) {
    c2.pass = ex.positive && sampled_ok;
    c2.proven = ex.positive;
    d2 << ex.detail << "; ";
  } else {
    c2.pass = sampled_ok;
    c2.proven = false;
    if (!ex.detail.empty()) d2 << ex.detail << " (no exact sign rule applies); ";
  }
  d2 << opts.samples << " samples, min deficit/(|F|+|s|^2) = " << min_ratio << " at |s| = " << worst_r;
  c2.detail = d2.str();
  rep.clauses.push_back(c2);

  FormCheck pos = check_positivity(C);
  rep.clauses.push_back({"iii", "C a a >= 0 for every matrix a", pos.pass, true, pos.detail});

  StarShapeReport star = is_star_shaped(dom, opts.mesh_h);
  std::ostringstream d4;
  d4 << dom.describe() << ", min (x, nu) = " << star.min_x_dot_nu;
  rep.clauses.push_back({"iv", "(x, nu) >= 0 on the boundary", star.star_shaped, true, d4.str()});
  return rep;
}

}  // namespace elid

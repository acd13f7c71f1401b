#include "elid/models/potential.hpp"

#include "elid/symbolic/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace elid {

using sym::DiffExpr;

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// q^e, by repeated squaring when 2e is an even integer (the common case p = 4, 6, 8).
double qpow(double q, double e) {
  if (e == std::floor(e) && e >= 0 && e <= 64) {
    double r = 1.0, b = q;
    for (auto k = static_cast<unsigned>(e); k; k >>= 1, b *= b)
      if (k & 1U) r *= b;
    return r;
  }
  return std::pow(q, e);
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

struct HermiteEval {
  double phi, dphi, ddphi;
};

HermiteEval hermite(const RadialTable& tab, double r) {
  const auto& R = tab.r;
  if (r > R.back()) {
    std::ostringstream os;
    os << "radius " << r << " outside the potential table (max " << R.back() << ")";
    throw std::out_of_range(os.str());
  }
  std::size_t k = static_cast<std::size_t>(std::upper_bound(R.begin(), R.end(), r) - R.begin());
  k = std::clamp<std::size_t>(k, 1, R.size() - 1) - 1;
  const double d = R[k + 1] - R[k];
  const double t = (r - R[k]) / d;
  const double y0 = tab.value[k], y1 = tab.value[k + 1], m0 = tab.slope[k], m1 = tab.slope[k + 1];
  const double t2 = t * t, t3 = t2 * t;
  HermiteEval e{};
  e.phi = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * d * m1;
  e.dphi = ((6 * t2 - 6 * t) * y0 + (-6 * t2 + 6 * t) * y1) / d + (3 * t2 - 4 * t + 1) * m0 + (3 * t2 - 2 * t) * m1;
  e.ddphi = ((12 * t - 6) * y0 + (-12 * t + 6) * y1) / (d * d) + ((6 * t - 4) * m0 + (6 * t - 2) * m1) / d;
  return e;
}

}  // namespace

BodyForcePotential BodyForcePotential::zero() { return {}; }

BodyForcePotential BodyForcePotential::quadratic(const Rational& kappa) {
  BodyForcePotential F;
  F.kind_ = PotentialKind::Quadratic;
  F.coef_ = kappa;
  F.coef_d_ = kappa.get_d();
  return F;
}

BodyForcePotential BodyForcePotential::power(const Rational& c, const Rational& p) {
  if (p < 2) throw std::invalid_argument("power potential needs p >= 2");
  BodyForcePotential F;
  F.kind_ = PotentialKind::Power;
  F.coef_ = c;
  F.exponent_ = p;
  F.coef_d_ = c.get_d();
  F.exponent_d_ = p.get_d();
  return F;
}

BodyForcePotential BodyForcePotential::polynomial(std::vector<PolyTerm> terms) {
  if (terms.empty()) return zero();
  const std::size_t n = terms.front().exponents.size();
  for (const auto& t : terms) {
    if (t.exponents.size() != n) throw std::invalid_argument("polynomial terms disagree on the dimension");
    int degree = 0;
    for (int e : t.exponents) {
      if (e < 0) throw std::invalid_argument("negative exponent in polynomial potential");
      degree += e;
    }
    if (degree == 0 && t.coef != 0) throw std::invalid_argument("polynomial potential must vanish at 0");
  }
  BodyForcePotential F;
  F.kind_ = PotentialKind::Polynomial;
  F.terms_ = std::move(terms);
  return F;
}

BodyForcePotential BodyForcePotential::tabulated(RadialTable table) {
  const auto& r = table.r;
  if (r.size() < 2 || table.value.size() != r.size() || table.slope.size() != r.size())
    throw std::invalid_argument("potential table needs matching r, F, dF columns with at least 2 rows");
  if (r.front() != 0.0) throw std::invalid_argument("potential table must start at r = 0");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1])) throw std::invalid_argument("potential table radii must increase");
  if (table.value.front() != 0.0) throw std::invalid_argument("tabulated potential must satisfy F(0) = 0");
  if (table.slope.front() != 0.0) throw std::invalid_argument("tabulated potential needs dF/dr = 0 at r = 0");
  BodyForcePotential F;
  F.kind_ = PotentialKind::Tabulated;
  F.table_ = std::move(table);
  return F;
}

double BodyForcePotential::value(const std::vector<double>& s) const {
  switch (kind_) {
    case PotentialKind::Zero:
      return 0.0;
    case PotentialKind::Quadratic:
      return 0.5 * coef_d_ * dot(s, s);
    case PotentialKind::Power: {
      double q = dot(s, s);
      return q == 0.0 ? 0.0 : coef_d_ * qpow(q, 0.5 * exponent_d_);
    }
    case PotentialKind::Polynomial: {
      double total = 0.0;
      for (const auto& t : terms_) {
        double m = t.coef.get_d();
        for (std::size_t k = 0; k < s.size(); ++k) m *= ipow(s[k], t.exponents[k]);
        total += m;
      }
      return total;
    }
    case PotentialKind::Tabulated:
      return hermite(table_, std::sqrt(dot(s, s))).phi;
  }
  return 0.0;
}

std::vector<double> BodyForcePotential::gradient(const std::vector<double>& s) const {
  const std::size_t n = s.size();
  std::vector<double> g(n, 0.0);
  switch (kind_) {
    case PotentialKind::Zero:
      break;
    case PotentialKind::Quadratic:
      for (std::size_t i = 0; i < n; ++i) g[i] = coef_d_ * s[i];
      break;
    case PotentialKind::Power: {
      double q = dot(s, s);
      double w = exponent_d_ == 2.0 ? 1.0 : (q == 0.0 ? 0.0 : qpow(q, 0.5 * exponent_d_ - 1.0));
      for (std::size_t i = 0; i < n; ++i) g[i] = coef_d_ * exponent_d_ * w * s[i];
      break;
    }
    case PotentialKind::Polynomial:
      for (const auto& t : terms_)
        for (std::size_t i = 0; i < n; ++i) {
          if (t.exponents[i] == 0) continue;
          double m = t.coef.get_d() * t.exponents[i];
          for (std::size_t k = 0; k < n; ++k) m *= ipow(s[k], t.exponents[k] - (k == i ? 1 : 0));
          g[i] += m;
        }
      break;
    case PotentialKind::Tabulated: {
      double r = std::sqrt(dot(s, s));
      if (r == 0.0) break;
      double dphi = hermite(table_, r).dphi;
      for (std::size_t i = 0; i < n; ++i) g[i] = dphi * s[i] / r;
      break;
    }
  }
  return g;
}

std::vector<double> BodyForcePotential::hessian(const std::vector<double>& s) const {
  const std::size_t n = s.size();
  std::vector<double> H(n * n, 0.0);
  switch (kind_) {
    case PotentialKind::Zero:
      break;
    case PotentialKind::Quadratic:
      for (std::size_t i = 0; i < n; ++i) H[i * n + i] = coef_d_;
      break;
    case PotentialKind::Power: {
      double q = dot(s, s);
      const double p = exponent_d_;
      if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 2.0 * coef_d_;
        break;
      }
      if (q == 0.0) break;
      double a = coef_d_ * p * std::pow(q, 0.5 * p - 1.0);
      double b = coef_d_ * p * (p - 2.0) * std::pow(q, 0.5 * p - 2.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) H[i * n + j] = b * s[i] * s[j] + (i == j ? a : 0.0);
      break;
    }
    case PotentialKind::Polynomial:
      for (const auto& t : terms_)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            std::vector<int> e = t.exponents;
            double m = t.coef.get_d() * e[i];
            e[i] -= 1;
            m *= e[j];
            e[j] -= 1;
            if (m == 0.0) continue;
            for (std::size_t k = 0; k < n; ++k) m *= ipow(s[k], e[k]);
            H[i * n + j] += m;
          }
      break;
    case PotentialKind::Tabulated: {
      double r = std::sqrt(dot(s, s));
      HermiteEval e = hermite(table_, r);
      if (r < 1e-14) {
        for (std::size_t i = 0; i < n; ++i) H[i * n + i] = e.ddphi;
        break;
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double ss = s[i] * s[j] / (r * r);
          H[i * n + j] = e.ddphi * ss + e.dphi / r * ((i == j ? 1.0 : 0.0) - ss);
        }
      break;
    }
  }
  return H;
}

std::optional<DiffExpr> BodyForcePotential::symbolic(int n) const {
  DiffExpr sq;
  for (int k = 1; k <= n; ++k) sq += sym::u_(k) * sym::u_(k);
  switch (kind_) {
    case PotentialKind::Zero:
      return DiffExpr();
    case PotentialKind::Quadratic:
      return (coef_ / 2) * sq;
    case PotentialKind::Power: {
      Rational half = exponent_ / 2;
      if (half.get_den() != 1) return std::nullopt;
      return coef_ * sym::pow(sq, static_cast<int>(half.get_num().get_si()));
    }
    case PotentialKind::Polynomial: {
      DiffExpr out;
      for (const auto& t : terms_) {
        if (static_cast<int>(t.exponents.size()) != n) throw std::invalid_argument("polynomial dimension mismatch");
        DiffExpr m(t.coef);
        for (int k = 1; k <= n; ++k) m *= sym::pow(sym::u_(k), t.exponents[static_cast<std::size_t>(k - 1)]);
        out += m;
      }
      return out;
    }
    case PotentialKind::Tabulated:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<DiffExpr> BodyForcePotential::symbolic_gradient(int n, int i) const {
  auto F = symbolic(n);
  if (!F) return std::nullopt;
  return sym::partial_atom(*F, sym::Atom::dep(sym::Field::U, i));
}

std::string BodyForcePotential::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case PotentialKind::Zero:
      os << "zero";
      break;
    case PotentialKind::Quadratic:
      os << "quadratic kappa=" << sym::to_string(coef_);
      break;
    case PotentialKind::Power:
      os << "power c=" << sym::to_string(coef_) << " p=" << sym::to_string(exponent_);
      break;
    case PotentialKind::Polynomial: {
      auto F = symbolic(static_cast<int>(terms_.front().exponents.size()));
      os << "polynomial " << F->str();
      break;
    }
    case PotentialKind::Tabulated:
      os << "tabulated radial, " << table_.r.size() << " rows, r <= " << table_.r.back();
      break;
  }
  return os.str();
}

double scaling_deficit(const BodyForcePotential& F, const std::vector<double>& s, int n) {
  return 0.5 * (n - 2) * dot(s, F.gradient(s)) - n * F.value(s);
}

CouplingPotential CouplingPotential::zero() { return {}; }

CouplingPotential CouplingPotential::bilinear(const Rational& c) {
  CouplingPotential H;
  H.kind_ = CouplingKind::Bilinear;
  H.coef_ = c;
  H.coef_d_ = c.get_d();
  return H;
}

CouplingPotential CouplingPotential::dot_power(const Rational& c, int m) {
  if (m < 1) throw std::invalid_argument("coupling power must be >= 1");
  CouplingPotential H;
  H.kind_ = CouplingKind::DotPower;
  H.coef_ = c;
  H.coef_d_ = c.get_d();
  H.power_ = m;
  return H;
}

double CouplingPotential::value(const std::vector<double>& u, const std::vector<double>& v) const {
  if (kind_ == CouplingKind::Zero) return 0.0;
  return coef_d_ * ipow(dot(u, v), kind_ == CouplingKind::Bilinear ? 1 : power_);
}

std::vector<double> CouplingPotential::grad_u(const std::vector<double>& u, const std::vector<double>& v) const {
  std::vector<double> g(u.size(), 0.0);
  if (kind_ == CouplingKind::Zero) return g;
  int m = kind_ == CouplingKind::Bilinear ? 1 : power_;
  double w = coef_d_ * m * ipow(dot(u, v), m - 1);
  for (std::size_t i = 0; i < u.size(); ++i) g[i] = w * v[i];
  return g;
}

std::vector<double> CouplingPotential::grad_v(const std::vector<double>& u, const std::vector<double>& v) const {
  return grad_u(v, u);
}

std::string CouplingPotential::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case CouplingKind::Zero:
      os << "zero";
      break;
    case CouplingKind::Bilinear:
      os << "bilinear c=" << sym::to_string(coef_);
      break;
    case CouplingKind::DotPower:
      os << "dot-power c=" << sym::to_string(coef_) << " m=" << power_;
      break;
  }
  return os.str();
}

}  // namespace elid

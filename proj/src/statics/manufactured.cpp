#include "elid/statics/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace elid {

double TrigProduct::derivative(const Point& x, const std::vector<int>& orders) const {
  double v = amp;
  for (std::size_t d = 0; d < omega.size(); ++d) {
    const int o = d < orders.size() ? orders[d] : 0;
    // The o-th derivative of sin shifts its phase by o pi / 2.
    v *= std::pow(omega[d], o) * std::sin(omega[d] * x[d] + phase[d] + o * std::numbers::pi / 2);
  }
  return v;
}

double TrigProduct::value(const Point& x) const { return derivative(x, {}); }

std::vector<double> ManufacturedSolution::value(const Point& x) const {
  std::vector<double> out;
  for (const auto& c : comps) out.push_back(c.value(x));
  return out;
}

std::vector<double> ManufacturedSolution::gradient(const Point& x) const {
  const int m = n();
  std::vector<double> out(static_cast<std::size_t>(m * m));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i) {
      std::vector<int> o(static_cast<std::size_t>(m), 0);
      o[static_cast<std::size_t>(i)] = 1;
      out[static_cast<std::size_t>(k * m + i)] = comps[static_cast<std::size_t>(k)].derivative(x, o);
    }
  return out;
}

ManufacturedSolution ManufacturedSolution::unit_cube_mode(int n, double amp) {
  ManufacturedSolution s;
  std::vector<double> om(static_cast<std::size_t>(n), std::numbers::pi), ph(static_cast<std::size_t>(n), 0.0);
  s.comps.push_back({amp, om, ph});
  for (int c = 1; c < n; ++c) s.comps.push_back({0.0, om, ph});
  return s;
}

VectorSource manufactured_source(const ElasticModuli& C, const BodyForcePotential& F, const ManufacturedSolution& u) {
  const int n = C.n();
  if (u.n() != n) throw std::invalid_argument("manufactured solution has the wrong number of components");
  auto deriv = [u, n](const Point& x, int j, std::initializer_list<int> axes) {
    std::vector<int> o(static_cast<std::size_t>(n), 0);
    for (int a : axes) ++o[static_cast<std::size_t>(a)];
    return u.comps[static_cast<std::size_t>(j)].derivative(x, o);
  };
  VectorSource src;
  src.value = [C, F, u, n, deriv](const Point& x) {
    auto f = F.gradient(u.value(x));
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l) {
            double c = C.value(i + 1, k + 1, j + 1, l + 1);
            if (c != 0.0) s += c * deriv(x, j, {k, l});
          }
      g[static_cast<std::size_t>(i)] = -(s + f[static_cast<std::size_t>(i)]);
    }
    return g;
  };
  src.jacobian = [C, F, u, n, deriv](const Point& x) {
    auto hess = F.hessian(u.value(x));
    auto grad = u.gradient(x);
    std::vector<double> J(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int k = 0; k < n; ++k)
          for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
              double c = C.value(i + 1, k + 1, j + 1, l + 1);
              if (c != 0.0) s += c * deriv(x, j, {k, l, m});
            }
        for (int j = 0; j < n; ++j) s += hess[static_cast<std::size_t>(i * n + j)] * grad[static_cast<std::size_t>(j * n + m)];
        J[static_cast<std::size_t>(i * n + m)] = -s;
      }
    return J;
  };
  return src;
}

}  // namespace elid

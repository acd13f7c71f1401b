#include "elid/grid/domain.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "elid/io/csv.hpp"
#include "elid/util/numeric.hpp"

namespace elid {

namespace {

constexpr double kPi = 3.14159265358979323846;

double norm(const Point& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_dim(int n) {
  if (n != 2 && n != 3) throw std::invalid_argument("domains are supported in dimension 2 and 3");
}

double cross2(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

double shoelace(const std::vector<std::array<double, 2>>& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& u = p[i];
    const auto& v = p[(i + 1) % p.size()];
    a += cross2(u[0], u[1], v[0], v[1]);
  }
  return 0.5 * a;
}

bool segments_intersect(const std::array<double, 2>& p1, const std::array<double, 2>& p2,
                        const std::array<double, 2>& q1, const std::array<double, 2>& q2) {
  auto orient = [](const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c) {
    double v = cross2(b[0] - a[0], b[1] - a[1], c[0] - a[0], c[1] - a[1]);
    return (v > 0) - (v < 0);
  };
  auto on_segment = [](const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c) {
    return std::min(a[0], b[0]) <= c[0] && c[0] <= std::max(a[0], b[0]) && std::min(a[1], b[1]) <= c[1] &&
           c[1] <= std::max(a[1], b[1]);
  };
  int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2), o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

/// Antiderivative of sqrt(R^2 - x^2).
double circle_primitive(double x, double R) {
  double r = std::clamp(x / R, -1.0, 1.0);
  double s = std::sqrt(std::max(0.0, R * R - x * x));
  return 0.5 * (x * s + R * R * std::asin(r));
}

/// Area of the disk |y| < R (centered at 0) intersected with [x0,x1] x [y0,y1].
double disk_box_area(double x0, double x1, double y0, double y1, double R) {
  if (R <= 0.0) return 0.0;
  x0 = std::max(x0, -R);
  x1 = std::min(x1, R);
  if (x0 >= x1 || y0 >= y1) return 0.0;
  std::vector<double> bp{x0, x1};
  for (double y : {y0, y1}) {
    if (std::abs(y) < R) {
      double xb = std::sqrt(R * R - y * y);
      for (double c : {-xb, xb})
        if (c > x0 && c < x1) bp.push_back(c);
    }
  }
  std::sort(bp.begin(), bp.end());
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    double p = bp[i], q = bp[i + 1];
    if (q <= p) continue;
    double m = 0.5 * (p + q);
    double s = std::sqrt(std::max(0.0, R * R - m * m));
    bool top_const = y1 < s, bot_const = y0 > -s;
    double top_m = top_const ? y1 : s, bot_m = bot_const ? y0 : -s;
    if (top_m <= bot_m) continue;
    double arc = circle_primitive(q, R) - circle_primitive(p, R);
    double top = top_const ? y1 * (q - p) : arc;
    double bot = bot_const ? y0 * (q - p) : -arc;
    area += top - bot;
  }
  return area;
}

double ball_box_volume(const Point& a, const Point& b, double R) {
  double z0 = std::max(a[2], -R), z1 = std::min(b[2], R);
  if (z0 >= z1) return 0.0;
  std::vector<double> rho_breaks{std::abs(a[0]), std::abs(b[0]), std::abs(a[1]), std::abs(b[1])};
  for (double x : {a[0], b[0]})
    for (double y : {a[1], b[1]}) rho_breaks.push_back(std::sqrt(x * x + y * y));
  std::vector<double> zb{z0, z1};
  for (double rho : rho_breaks) {
    if (rho >= R) continue;
    double zc = std::sqrt(R * R - rho * rho);
    for (double z : {-zc, zc})
      if (z > z0 && z < z1) zb.push_back(z);
  }
  std::sort(zb.begin(), zb.end());
  auto slice = [&](double z) { return disk_box_area(a[0], b[0], a[1], b[1], std::sqrt(std::max(0.0, R * R - z * z))); };
  double vol = 0.0;
  for (std::size_t i = 0; i + 1 < zb.size(); ++i) {
    const double p = zb[i], q = zb[i + 1];
    if (q <= p) continue;
    // The slice area has square-root behavior at the breaks; z = p + (q - p)(3t^2 - 2t^3)
    // flattens it so the rule converges without deep subdivision.
    auto smoothed = [&](double t) { return slice(p + (q - p) * t * t * (3 - 2 * t)) * 6 * t * (1 - t) * (q - p); };
    vol += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(smoothed, 0.0, 1.0, 8, 1e-11);
  }
  return vol;
}

/// |[a,b] intersect ball(0, R)| with quick full/empty tests.
double centered_ball_box(int n, const Point& a, const Point& b, double R) {
  double near2 = 0.0, far2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double lo = a[static_cast<std::size_t>(i)], hi = b[static_cast<std::size_t>(i)];
    double nearest = lo > 0 ? lo : (hi < 0 ? hi : 0.0);
    double farthest = std::max(std::abs(lo), std::abs(hi));
    near2 += nearest * nearest;
    far2 += farthest * farthest;
  }
  if (near2 >= R * R) return 0.0;
  if (far2 <= R * R) {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= b[static_cast<std::size_t>(i)] - a[static_cast<std::size_t>(i)];
    return v;
  }
  if (n == 2) return disk_box_area(a[0], b[0], a[1], b[1], R);
  return ball_box_volume(a, b, R);
}

using Poly = std::vector<std::array<double, 2>>;

Poly clip_half_plane(const Poly& in, int axis, double bound, bool keep_greater) {
  Poly out;
  if (in.empty()) return out;
  auto inside = [&](const std::array<double, 2>& p) { return keep_greater ? p[axis] >= bound : p[axis] <= bound; };
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto& cur = in[i];
    const auto& prev = in[(i + in.size() - 1) % in.size()];
    bool ci = inside(cur), pi = inside(prev);
    if (ci != pi) {
      double t = (bound - prev[axis]) / (cur[axis] - prev[axis]);
      out.push_back({prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])});
    }
    if (ci) out.push_back(cur);
  }
  return out;
}

double polygon_box_area(const Poly& poly, const Point& a, const Point& b) {
  Poly p = clip_half_plane(poly, 0, a[0], true);
  p = clip_half_plane(p, 0, b[0], false);
  p = clip_half_plane(p, 1, a[1], true);
  p = clip_half_plane(p, 1, b[1], false);
  return p.size() < 3 ? 0.0 : std::abs(shoelace(p));
}

double sphere_exit(const Point& y, const Point& d, double R) {
  double b = dot(y, d);
  double c = dot(y, y) - R * R;
  double disc = b * b - c;
  if (disc < 0) return std::numeric_limits<double>::infinity();
  double t = -b + std::sqrt(disc);
  return t > 0 ? t : std::numeric_limits<double>::infinity();
}

/// First positive entry into the sphere of radius R from outside it.
double sphere_entry(const Point& y, const Point& d, double R) {
  double b = dot(y, d);
  double c = dot(y, y) - R * R;
  double disc = b * b - c;
  if (disc < 0) return std::numeric_limits<double>::infinity();
  double t = -b - std::sqrt(disc);
  return t > 0 ? t : std::numeric_limits<double>::infinity();
}

void add_sphere_facets(BoundaryMesh& mesh, int n, double R, const Point& c, double h, int piece, double sign) {
  if (n == 2) {
    int m = std::max(8, static_cast<int>(std::ceil(2 * kPi * R / h)));
    double dth = 2 * kPi / m;
    for (int k = 0; k < m; ++k) {
      double th = (k + 0.5) * dth;
      Facet f;
      f.x = {c[0] + R * std::cos(th), c[1] + R * std::sin(th)};
      f.normal = {sign * std::cos(th), sign * std::sin(th)};
      f.ds = R * dth;
      f.piece = piece;
      mesh.facets.push_back(f);
    }
    return;
  }
  int nt = std::max(4, static_cast<int>(std::ceil(kPi * R / h)));
  for (int i = 0; i < nt; ++i) {
    double t1 = kPi * i / nt, t2 = kPi * (i + 1) / nt, tm = 0.5 * (t1 + t2);
    int np = std::max(4, static_cast<int>(std::ceil(2 * kPi * R * std::sin(tm) / h)));
    double dph = 2 * kPi / np;
    double area = R * R * (std::cos(t1) - std::cos(t2)) * dph;
    for (int j = 0; j < np; ++j) {
      double ph = (j + 0.5) * dph;
      Point nu{std::sin(tm) * std::cos(ph), std::sin(tm) * std::sin(ph), std::cos(tm)};
      Facet f;
      f.x = {c[0] + R * nu[0], c[1] + R * nu[1], c[2] + R * nu[2]};
      f.normal = {sign * nu[0], sign * nu[1], sign * nu[2]};
      f.ds = area;
      f.piece = piece;
      mesh.facets.push_back(f);
    }
  }
}

bool is_multiple(double x, double h) {
  double q = x / h;
  return std::abs(q - std::round(q)) <= 1e-9;
}

}  // namespace

DomainSpec DomainSpec::ball(int n, double R, Point center) {
  check_dim(n);
  if (!(R > 0)) throw std::invalid_argument("ball radius must be positive");
  if (center.empty()) center.assign(static_cast<std::size_t>(n), 0.0);
  if (static_cast<int>(center.size()) != n) throw std::invalid_argument("ball center has the wrong dimension");
  DomainSpec d;
  d.kind = DomainKind::Ball;
  d.n = n;
  d.radius = R;
  d.center = std::move(center);
  return d;
}

DomainSpec DomainSpec::rectangle(Point lo, Point hi) {
  int n = static_cast<int>(lo.size());
  check_dim(n);
  if (hi.size() != lo.size()) throw std::invalid_argument("rectangle corners disagree on the dimension");
  for (int i = 0; i < n; ++i)
    if (!(lo[static_cast<std::size_t>(i)] < hi[static_cast<std::size_t>(i)]))
      throw std::invalid_argument("rectangle needs lo < hi in every coordinate");
  DomainSpec d;
  d.kind = DomainKind::Rectangle;
  d.n = n;
  d.lo = std::move(lo);
  d.hi = std::move(hi);
  return d;
}

DomainSpec DomainSpec::star_polygon(std::vector<std::array<double, 2>> vertices) {
  const std::size_t m = vertices.size();
  if (m < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      bool adjacent = j == i + 1 || (i == 0 && j == m - 1);
      if (adjacent) continue;
      if (segments_intersect(vertices[i], vertices[(i + 1) % m], vertices[j], vertices[(j + 1) % m]))
        throw std::invalid_argument("polygon is not simple");
    }
  double a = shoelace(vertices);
  if (a == 0.0) throw std::invalid_argument("polygon has zero area");
  if (a < 0) std::reverse(vertices.begin(), vertices.end());
  DomainSpec d;
  d.kind = DomainKind::StarPolygon;
  d.n = 2;
  d.vertices = std::move(vertices);
  return d;
}

DomainSpec DomainSpec::annulus(int n, double r_in, double r_out) {
  check_dim(n);
  if (!(r_in > 0 && r_in < r_out)) throw std::invalid_argument("annulus needs 0 < r_in < r_out");
  DomainSpec d;
  d.kind = DomainKind::Annulus;
  d.n = n;
  d.r_in = r_in;
  d.r_out = r_out;
  d.center.assign(static_cast<std::size_t>(n), 0.0);
  return d;
}

double DomainSpec::level(const Point& x) const {
  switch (kind) {
    case DomainKind::Ball: {
      Point y(x);
      for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] -= center[static_cast<std::size_t>(i)];
      return norm(y) - radius;
    }
    case DomainKind::Rectangle: {
      double v = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < lo.size(); ++i) v = std::max({v, lo[i] - x[i], x[i] - hi[i]});
      return v;
    }
    case DomainKind::StarPolygon: {
      bool inside = false;
      double dist = std::numeric_limits<double>::infinity();
      const std::size_t m = vertices.size();
      for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
        const auto& a = vertices[j];
        const auto& b = vertices[i];
        if ((b[1] > x[1]) != (a[1] > x[1])) {
          double xc = (a[0] - b[0]) * (x[1] - b[1]) / (a[1] - b[1]) + b[0];
          if (x[0] < xc) inside = !inside;
        }
        double ex = b[0] - a[0], ey = b[1] - a[1];
        double t = std::clamp(((x[0] - a[0]) * ex + (x[1] - a[1]) * ey) / (ex * ex + ey * ey), 0.0, 1.0);
        dist = std::min(dist, std::hypot(x[0] - a[0] - t * ex, x[1] - a[1] - t * ey));
      }
      return inside ? -dist : dist;
    }
    case DomainKind::Annulus: {
      double r = norm(x);
      return std::max(r - r_out, r_in - r);
    }
  }
  return 0.0;
}

double DomainSpec::ray_exit(const Point& x, const Point& dir, double maxlen) const {
  double t = std::numeric_limits<double>::infinity();
  switch (kind) {
    case DomainKind::Ball: {
      Point y(x);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= center[i];
      t = sphere_exit(y, dir, radius);
      break;
    }
    case DomainKind::Rectangle:
      for (std::size_t i = 0; i < lo.size(); ++i) {
        if (dir[i] > 0) t = std::min(t, (hi[i] - x[i]) / dir[i]);
        if (dir[i] < 0) t = std::min(t, (lo[i] - x[i]) / dir[i]);
      }
      break;
    case DomainKind::StarPolygon: {
      const std::size_t m = vertices.size();
      for (std::size_t i = 0; i < m; ++i) {
        const auto& a = vertices[i];
        const auto& b = vertices[(i + 1) % m];
        double ex = b[0] - a[0], ey = b[1] - a[1];
        double den = cross2(dir[0], dir[1], ex, ey);
        if (den == 0.0) continue;
        double wx = a[0] - x[0], wy = a[1] - x[1];
        double tt = cross2(wx, wy, ex, ey) / den;
        double s = cross2(wx, wy, dir[0], dir[1]) / den;
        if (tt > 0 && s >= 0 && s <= 1) t = std::min(t, tt);
      }
      break;
    }
    case DomainKind::Annulus:
      t = std::min(sphere_exit(x, dir, r_out), sphere_entry(x, dir, r_in));
      break;
  }
  return std::min(t, maxlen);
}

void DomainSpec::bounds(Point& lo_out, Point& hi_out) const {
  lo_out.assign(static_cast<std::size_t>(n), 0.0);
  hi_out.assign(static_cast<std::size_t>(n), 0.0);
  switch (kind) {
    case DomainKind::Ball:
      for (std::size_t i = 0; i < lo_out.size(); ++i) {
        lo_out[i] = center[i] - radius;
        hi_out[i] = center[i] + radius;
      }
      break;
    case DomainKind::Rectangle:
      lo_out = lo;
      hi_out = hi;
      break;
    case DomainKind::StarPolygon:
      lo_out = {vertices[0][0], vertices[0][1]};
      hi_out = lo_out;
      for (const auto& v : vertices)
        for (std::size_t i = 0; i < 2; ++i) {
          lo_out[i] = std::min(lo_out[i], v[i]);
          hi_out[i] = std::max(hi_out[i], v[i]);
        }
      break;
    case DomainKind::Annulus:
      for (std::size_t i = 0; i < lo_out.size(); ++i) {
        lo_out[i] = -r_out;
        hi_out[i] = r_out;
      }
      break;
  }
}

double DomainSpec::volume() const {
  auto ball_vol = [this](double R) { return n == 2 ? kPi * R * R : 4.0 / 3.0 * kPi * R * R * R; };
  switch (kind) {
    case DomainKind::Ball:
      return ball_vol(radius);
    case DomainKind::Rectangle: {
      double v = 1.0;
      for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
      return v;
    }
    case DomainKind::StarPolygon:
      return shoelace(vertices);
    case DomainKind::Annulus:
      return ball_vol(r_out) - ball_vol(r_in);
  }
  return 0.0;
}

double DomainSpec::boundary_measure() const {
  auto sphere = [this](double R) { return n == 2 ? 2 * kPi * R : 4 * kPi * R * R; };
  switch (kind) {
    case DomainKind::Ball:
      return sphere(radius);
    case DomainKind::Rectangle: {
      if (n == 2) return 2 * ((hi[0] - lo[0]) + (hi[1] - lo[1]));
      double a = hi[0] - lo[0], b = hi[1] - lo[1], c = hi[2] - lo[2];
      return 2 * (a * b + b * c + a * c);
    }
    case DomainKind::StarPolygon: {
      double p = 0.0;
      for (std::size_t i = 0; i < vertices.size(); ++i) {
        const auto& a = vertices[i];
        const auto& b = vertices[(i + 1) % vertices.size()];
        p += std::hypot(b[0] - a[0], b[1] - a[1]);
      }
      return p;
    }
    case DomainKind::Annulus:
      return sphere(r_out) + sphere(r_in);
  }
  return 0.0;
}

double DomainSpec::box_intersection(const Point& a, const Point& b) const {
  switch (kind) {
    case DomainKind::Ball: {
      Point ac(a), bc(b);
      for (std::size_t i = 0; i < ac.size(); ++i) {
        ac[i] -= center[i];
        bc[i] -= center[i];
      }
      return centered_ball_box(n, ac, bc, radius);
    }
    case DomainKind::Rectangle: {
      double v = 1.0;
      for (std::size_t i = 0; i < lo.size(); ++i) v *= std::max(0.0, std::min(b[i], hi[i]) - std::max(a[i], lo[i]));
      return v;
    }
    case DomainKind::StarPolygon:
      return polygon_box_area(vertices, a, b);
    case DomainKind::Annulus:
      return centered_ball_box(n, a, b, r_out) - centered_ball_box(n, a, b, r_in);
  }
  return 0.0;
}

int DomainSpec::piece_count() const {
  switch (kind) {
    case DomainKind::Ball:
      return 1;
    case DomainKind::Rectangle:
      return 2 * n;
    case DomainKind::StarPolygon:
      return static_cast<int>(vertices.size());
    case DomainKind::Annulus:
      return 2;
  }
  return 0;
}

double DomainSpec::piece_phi(int piece, const Point& x) const {
  switch (kind) {
    case DomainKind::Ball:
      return level(x);
    case DomainKind::Rectangle: {
      std::size_t a = static_cast<std::size_t>(piece / 2);
      return piece % 2 == 0 ? lo[a] - x[a] : x[a] - hi[a];
    }
    case DomainKind::StarPolygon: {
      const auto& a = vertices[static_cast<std::size_t>(piece)];
      const auto& b = vertices[(static_cast<std::size_t>(piece) + 1) % vertices.size()];
      double len = std::hypot(b[0] - a[0], b[1] - a[1]);
      return ((x[0] - a[0]) * (b[1] - a[1]) - (x[1] - a[1]) * (b[0] - a[0])) / len;
    }
    case DomainKind::Annulus:
      return piece == 0 ? norm(x) - r_out : r_in - norm(x);
  }
  return 0.0;
}

bool DomainSpec::aligned_with(double h) const {
  if (kind != DomainKind::Rectangle) return false;
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!is_multiple(lo[i], h) || !is_multiple(hi[i], h)) return false;
  return true;
}

std::string DomainSpec::describe() const {
  std::ostringstream os;
  os << std::setprecision(17);
  auto vec = [&os](const Point& p) {
    os << "(";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
    os << ")";
  };
  switch (kind) {
    case DomainKind::Ball:
      os << "ball n=" << n << " R=" << radius << " center=";
      vec(center);
      break;
    case DomainKind::Rectangle:
      os << "rectangle lo=";
      vec(lo);
      os << " hi=";
      vec(hi);
      break;
    case DomainKind::StarPolygon:
      os << "star-polygon " << vertices.size() << " vertices";
      break;
    case DomainKind::Annulus:
      os << "annulus n=" << n << " r_in=" << r_in << " r_out=" << r_out;
      break;
  }
  return os.str();
}

double BoundaryMesh::measure() const {
  std::vector<double> ds;
  ds.reserve(facets.size());
  for (const auto& f : facets) ds.push_back(f.ds);
  return pairwise_sum(ds);
}

std::string BoundaryMesh::csv() const {
  std::vector<std::string> header;
  for (int i = 1; i <= n; ++i) header.push_back("x" + std::to_string(i));
  for (int i = 1; i <= n; ++i) header.push_back("nu" + std::to_string(i));
  header.push_back("ds");
  CsvTable table(header);
  for (const auto& f : facets) {
    std::vector<double> row(f.x);
    row.insert(row.end(), f.normal.begin(), f.normal.end());
    row.push_back(f.ds);
    table.add_row(row);
  }
  return table.str();
}

BoundaryMesh make_boundary_mesh(const DomainSpec& dom, double h) {
  if (!(h > 0)) throw std::invalid_argument("mesh spacing must be positive");
  BoundaryMesh mesh;
  mesh.n = dom.n;
  switch (dom.kind) {
    case DomainKind::Ball:
      add_sphere_facets(mesh, dom.n, dom.radius, dom.center, h, 0, 1.0);
      break;
    case DomainKind::Annulus:
      add_sphere_facets(mesh, dom.n, dom.r_out, dom.center, h, 0, 1.0);
      add_sphere_facets(mesh, dom.n, dom.r_in, dom.center, h, 1, -1.0);
      break;
    case DomainKind::StarPolygon: {
      const auto& v = dom.vertices;
      for (std::size_t e = 0; e < v.size(); ++e) {
        const auto& a = v[e];
        const auto& b = v[(e + 1) % v.size()];
        double len = std::hypot(b[0] - a[0], b[1] - a[1]);
        int m = std::max(1, static_cast<int>(std::ceil(len / h)));
        Point nu{(b[1] - a[1]) / len, -(b[0] - a[0]) / len};
        for (int k = 0; k < m; ++k) {
          double t = (k + 0.5) / m;
          Facet f;
          f.x = {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
          f.normal = nu;
          f.ds = len / m;
          f.piece = static_cast<int>(e);
          mesh.facets.push_back(f);
        }
      }
      break;
    }
    case DomainKind::Rectangle: {
      const int n = dom.n;
      const bool aligned = dom.aligned_with(h);
      for (int a = 0; a < n; ++a)
        for (int side = 0; side < 2; ++side) {
          std::vector<int> tang;
          for (int b = 0; b < n; ++b)
            if (b != a) tang.push_back(b);
          // Per tangential axis: sample positions and weights.
          std::vector<std::vector<std::pair<double, double>>> axes;
          for (int b : tang) {
            double l0 = dom.lo[static_cast<std::size_t>(b)], l1 = dom.hi[static_cast<std::size_t>(b)];
            std::vector<std::pair<double, double>> pts;
            if (aligned) {
              long m = std::lround((l1 - l0) / h);
              for (long k = 0; k <= m; ++k) pts.emplace_back(l0 + k * h, (k == 0 || k == m) ? 0.5 * h : h);
            } else {
              int m = std::max(1, static_cast<int>(std::ceil((l1 - l0) / h)));
              double d = (l1 - l0) / m;
              for (int k = 0; k < m; ++k) pts.emplace_back(l0 + (k + 0.5) * d, d);
            }
            axes.push_back(std::move(pts));
          }
          std::vector<std::size_t> idx(axes.size(), 0);
          while (true) {
            Facet f;
            f.x.assign(static_cast<std::size_t>(n), 0.0);
            f.normal.assign(static_cast<std::size_t>(n), 0.0);
            f.x[static_cast<std::size_t>(a)] = side == 0 ? dom.lo[static_cast<std::size_t>(a)] : dom.hi[static_cast<std::size_t>(a)];
            f.normal[static_cast<std::size_t>(a)] = side == 0 ? -1.0 : 1.0;
            f.ds = 1.0;
            for (std::size_t t = 0; t < axes.size(); ++t) {
              f.x[static_cast<std::size_t>(tang[t])] = axes[t][idx[t]].first;
              f.ds *= axes[t][idx[t]].second;
            }
            f.piece = 2 * a + side;
            mesh.facets.push_back(f);
            std::size_t t = 0;
            while (t < idx.size() && ++idx[t] == axes[t].size()) idx[t++] = 0;
            if (t == idx.size()) break;
          }
        }
      break;
    }
  }
  return mesh;
}

StarShapeReport is_star_shaped(const DomainSpec& dom, double h) {
  if (h <= 0.0) {
    Point lo, hi;
    dom.bounds(lo, hi);
    double extent = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lo.size(); ++i) extent = std::min(extent, hi[i] - lo[i]);
    h = extent / 64.0;
  }
  BoundaryMesh mesh = make_boundary_mesh(dom, h);
  StarShapeReport r;
  r.min_x_dot_nu = std::numeric_limits<double>::infinity();
  for (const auto& f : mesh.facets) r.min_x_dot_nu = std::min(r.min_x_dot_nu, dot(f.x, f.normal));
  // (x, nu) is affine along a polygon edge, so its minimum sits at an endpoint.
  if (dom.kind == DomainKind::StarPolygon) {
    const auto& v = dom.vertices;
    for (std::size_t e = 0; e < v.size(); ++e) {
      const auto& a = v[e];
      const auto& b = v[(e + 1) % v.size()];
      double len = std::hypot(b[0] - a[0], b[1] - a[1]);
      Point nu{(b[1] - a[1]) / len, -(b[0] - a[0]) / len};
      r.min_x_dot_nu = std::min({r.min_x_dot_nu, a[0] * nu[0] + a[1] * nu[1], b[0] * nu[0] + b[1] * nu[1]});
    }
  }
  r.star_shaped = r.min_x_dot_nu >= -kTolGeo;
  return r;
}

}  // namespace elid

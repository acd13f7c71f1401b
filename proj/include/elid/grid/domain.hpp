#pragma once

#include <array>
#include <string>
#include <vector>

namespace elid {

using Point = std::vector<double>;

enum class DomainKind { Ball, Rectangle, StarPolygon, Annulus };

/// Bounded domain in R^n (n = 2 or 3; polygons are planar). The origin is the
/// dilation center for every identity.
struct DomainSpec {
  DomainKind kind{DomainKind::Ball};
  int n{2};
  double radius{1.0};
  Point center;
  Point lo, hi;
  /// Counter-clockwise after construction.
  std::vector<std::array<double, 2>> vertices;
  double r_in{0.5}, r_out{1.0};

  static DomainSpec ball(int n, double R, Point center = {});
  static DomainSpec rectangle(Point lo, Point hi);
  static DomainSpec star_polygon(std::vector<std::array<double, 2>> vertices);
  /// Centered at the origin.
  static DomainSpec annulus(int n, double r_in, double r_out);

  /// Negative inside, zero on the boundary, positive outside (not a distance in general).
  [[nodiscard]] double level(const Point& x) const;
  [[nodiscard]] bool contains(const Point& x) const { return level(x) < 0.0; }
  /// First t in (0, maxlen] where x + t dir reaches the boundary; maxlen if none. x must be inside.
  [[nodiscard]] double ray_exit(const Point& x, const Point& dir, double maxlen) const;

  void bounds(Point& lo_out, Point& hi_out) const;
  [[nodiscard]] double volume() const;
  [[nodiscard]] double boundary_measure() const;
  /// |box intersect domain| for the axis box [a, b].
  [[nodiscard]] double box_intersection(const Point& a, const Point& b) const;

  /// Number of smooth boundary pieces (edges, faces, spheres).
  [[nodiscard]] int piece_count() const;
  /// Local defining function of a piece: zero on it, gradient equal to the outward normal there.
  [[nodiscard]] double piece_phi(int piece, const Point& x) const;

  /// Rectangle whose faces lie on grid planes of spacing h.
  [[nodiscard]] bool aligned_with(double h) const;
  [[nodiscard]] std::string describe() const;
};

struct Facet {
  Point x;
  Point normal;
  double ds{0.0};
  int piece{0};
  /// Grid node carrying the facet (aligned rectangles), otherwise -1.
  long node{-1};
};

struct BoundaryMesh {
  int n{2};
  std::vector<Facet> facets;

  [[nodiscard]] double measure() const;
  /// x, normal, ds columns.
  [[nodiscard]] std::string csv() const;
};

/// Facets of size about h. Rectangles aligned with h get one facet per boundary grid node.
BoundaryMesh make_boundary_mesh(const DomainSpec& dom, double h);

struct StarShapeReport {
  bool star_shaped{false};
  double min_x_dot_nu{0.0};
};

constexpr double kTolGeo = 1e-10;

StarShapeReport is_star_shaped(const DomainSpec& dom, double h = 0.0);

}  // namespace elid

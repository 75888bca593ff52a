#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace gfg {

inline constexpr double kDefaultTol = 1e-9;

// Dispersion measure of a point set.
enum class CoverageKind { Diameter, HullVolume, HullPerimeter };

std::string to_string(CoverageKind kind);
CoverageKind coverage_from_string(const std::string& name);

// Location in R^d. The coordinate count fixes the dimension.
struct Point {
  std::vector<double> coords;

  Point() = default;
  Point(std::initializer_list<double> c) : coords(c) {}
  explicit Point(std::vector<double> c) : coords(std::move(c)) {}

  int dim() const { return static_cast<int>(coords.size()); }
  double operator[](int i) const { return coords[static_cast<size_t>(i)]; }
  double& operator[](int i) { return coords[static_cast<size_t>(i)]; }
  bool operator==(const Point&) const = default;
};

double distance(const Point& a, const Point& b);

// Convex hull of a point set. For d <= 2 the vertex list is minimal:
// a sorted pair (or single point) in 1D, a counterclockwise strictly
// convex cycle in 2D. For d >= 3 the vertices are the extreme points of
// the set; only containment and diameter queries are supported there.
struct Hull {
  int dimension = 0;
  std::vector<Point> vertices;
  int affine_rank = 0;
};

Hull convex_hull(std::span<const Point> points, double tol = kDefaultTol);

// Max pairwise Euclidean distance; 0 for a single point. Any dimension.
double diameter(std::span<const Point> points);

// Diameter for any d; length/area for d <= 2; perimeter for d <= 2
// (2x length in 1D, 2x segment length for rank-1 hulls in 2D).
double hull_measure(const Hull& hull, CoverageKind kind);

// Closed-hull membership; points within distance tol count as inside.
bool hull_contains(const Hull& hull, const Point& p, double tol = kDefaultTol);

// Euclidean distance from p to the hull (0 when inside). Exact for
// d <= 2, min-norm-point iteration for d >= 3.
double hull_distance(const Hull& hull, const Point& p);

// Whether the two hulls share any point. Exact segment/polygon tests in
// d <= 2; deterministic containment sampling in d >= 3 (approximate).
bool hulls_intersect(const Hull& a, const Hull& b, double tol = kDefaultTol);

}  // namespace gfg

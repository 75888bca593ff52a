#include "gfg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace gfg {

namespace {

double sq(double x) { return x * x; }

double max_abs_coord(std::span<const Point> pts) {
  double m = 0.0;
  for (const auto& p : pts)
    for (double c : p.coords) m = std::max(m, std::abs(c));
  return m;
}

// z-component of (a - o) x (b - o)
double cross2(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

void check_uniform_dimension(std::span<const Point> points) {
  const int d = points.front().dim();
  if (d < 1) throw std::invalid_argument("point dimension must be >= 1");
  for (const auto& p : points) {
    if (p.dim() != d) throw std::invalid_argument("mixed dimensions in point set");
    for (double c : p.coords)
      if (!std::isfinite(c)) throw std::invalid_argument("non-finite coordinate");
  }
}

std::vector<Point> dedupe_points(std::span<const Point> points) {
  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(),
            [](const Point& a, const Point& b) { return a.coords < b.coords; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Monotone chain; pops non-left turns so collinear vertices are removed.
// Input must be deduplicated. Returns a CCW cycle.
std::vector<Point> hull_2d(std::vector<Point> pts, double cross_eps) {
  const size_t n = pts.size();
  if (n <= 2) return pts;
  std::sort(pts.begin(), pts.end(),
            [](const Point& a, const Point& b) { return a.coords < b.coords; });
  std::vector<Point> h(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= cross_eps) --k;
    h[k++] = pts[i];
  }
  const size_t lower_end = k + 1;
  for (size_t i = n - 1; i-- > 0;) {
    while (k >= lower_end && cross2(h[k - 2], h[k - 1], pts[i]) <= cross_eps) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

// Rank of the affine span of pts, via Gaussian elimination on the
// difference vectors. Used only for d >= 3.
int affine_rank_of(const std::vector<Point>& pts, double tol) {
  if (pts.size() <= 1) return 0;
  const int d = pts.front().dim();
  std::vector<std::vector<double>> rows;
  rows.reserve(pts.size() - 1);
  double scale = 0.0;
  for (size_t i = 1; i < pts.size(); ++i) {
    std::vector<double> r(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) {
      r[static_cast<size_t>(j)] = pts[i][j] - pts[0][j];
      scale = std::max(scale, std::abs(r[static_cast<size_t>(j)]));
    }
    rows.push_back(std::move(r));
  }
  const double pivot_eps = tol * std::max(1.0, scale);
  int rank = 0;
  for (int col = 0; col < d && rank < static_cast<int>(rows.size()); ++col) {
    size_t piv = static_cast<size_t>(rank);
    for (size_t r = piv + 1; r < rows.size(); ++r)
      if (std::abs(rows[r][static_cast<size_t>(col)]) >
          std::abs(rows[piv][static_cast<size_t>(col)]))
        piv = r;
    if (std::abs(rows[piv][static_cast<size_t>(col)]) <= pivot_eps) continue;
    std::swap(rows[piv], rows[static_cast<size_t>(rank)]);
    const auto& prow = rows[static_cast<size_t>(rank)];
    for (size_t r = static_cast<size_t>(rank) + 1; r < rows.size(); ++r) {
      const double f = rows[r][static_cast<size_t>(col)] / prow[static_cast<size_t>(col)];
      for (int j = col; j < d; ++j)
        rows[r][static_cast<size_t>(j)] -= f * prow[static_cast<size_t>(j)];
    }
    ++rank;
  }
  return rank;
}

double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

// Min-norm point of conv{q_0..q_{m-1}} (Wolfe's algorithm). Returns the
// squared distance from the origin to the hull.
double min_norm_sq(const std::vector<Point>& q) {
  const size_t m = q.size();
  size_t start = 0;
  for (size_t i = 1; i < m; ++i)
    if (dot(q[i], q[i]) < dot(q[start], q[start])) start = i;

  std::vector<size_t> corral{start};
  std::vector<double> lambda{1.0};
  Point x = q[start];

  double scale2 = 0.0;
  for (const auto& p : q) scale2 = std::max(scale2, dot(p, p));
  const double stop_eps = 1e-12 * std::max(1.0, scale2);

  // Affine min-norm point over the corral: KKT system on the Gram matrix.
  auto affine_coeffs = [&](std::vector<double>& out) -> bool {
    const size_t k = corral.size();
    std::vector<std::vector<double>> a(k + 1, std::vector<double>(k + 2, 0.0));
    for (size_t i = 0; i < k; ++i) {
      for (size_t j = 0; j < k; ++j) a[i][j] = 2.0 * dot(q[corral[i]], q[corral[j]]);
      a[i][k] = 1.0;
      a[i][k + 1] = 0.0;
    }
    for (size_t j = 0; j < k; ++j) a[k][j] = 1.0;
    a[k][k + 1] = 1.0;
    // Gaussian elimination with partial pivoting.
    for (size_t col = 0; col <= k; ++col) {
      size_t piv = col;
      for (size_t r = col + 1; r <= k; ++r)
        if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
      if (std::abs(a[piv][col]) < 1e-300) return false;
      std::swap(a[piv], a[col]);
      for (size_t r = 0; r <= k; ++r) {
        if (r == col) continue;
        const double f = a[r][col] / a[col][col];
        for (size_t c = col; c <= k + 1; ++c) a[r][c] -= f * a[col][c];
      }
    }
    out.resize(k);
    for (size_t i = 0; i < k; ++i) out[i] = a[i][k + 1] / a[i][i];
    return true;
  };

  const int max_outer = static_cast<int>(16 * m + 64);
  for (int outer = 0; outer < max_outer; ++outer) {
    // Most violating vertex.
    size_t best = 0;
    double best_ip = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < m; ++i) {
      const double ip = dot(x, q[i]);
      if (ip < best_ip) {
        best_ip = ip;
        best = i;
      }
    }
    if (dot(x, x) - best_ip <= stop_eps) break;
    if (std::find(corral.begin(), corral.end(), best) != corral.end()) break;
    corral.push_back(best);
    lambda.push_back(0.0);

    for (int inner = 0; inner < max_outer; ++inner) {
      std::vector<double> y;
      if (!affine_coeffs(y)) {
        corral.pop_back();
        lambda.pop_back();
        outer = max_outer;
        break;
      }
      bool all_pos = true;
      for (double v : y)
        if (v <= 1e-14) all_pos = false;
      if (all_pos) {
        lambda = y;
        break;
      }
      // Step toward y until the first coefficient hits zero.
      double theta = 1.0;
      for (size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 1e-14 && lambda[i] > y[i]) theta = std::min(theta, lambda[i] / (lambda[i] - y[i]));
      }
      for (size_t i = 0; i < lambda.size(); ++i)
        lambda[i] = (1.0 - theta) * lambda[i] + theta * y[i];
      for (size_t i = lambda.size(); i-- > 0;) {
        if (lambda[i] <= 1e-14) {
          lambda.erase(lambda.begin() + static_cast<long>(i));
          corral.erase(corral.begin() + static_cast<long>(i));
        }
      }
    }
    x = Point(std::vector<double>(q.front().coords.size(), 0.0));
    for (size_t i = 0; i < corral.size(); ++i)
      for (int j = 0; j < x.dim(); ++j) x[j] += lambda[i] * q[corral[i]][j];
  }
  return dot(x, x);
}

double point_to_hull_distance_nd(const std::vector<Point>& vertices, const Point& p) {
  std::vector<Point> shifted;
  shifted.reserve(vertices.size());
  for (const auto& v : vertices) {
    Point s = v;
    for (int j = 0; j < s.dim(); ++j) s[j] -= p[j];
    shifted.push_back(std::move(s));
  }
  return std::sqrt(std::max(0.0, min_norm_sq(shifted)));
}

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  double ab2 = 0.0, t = 0.0;
  for (int i = 0; i < p.dim(); ++i) {
    ab2 += sq(b[i] - a[i]);
    t += (p[i] - a[i]) * (b[i] - a[i]);
  }
  if (ab2 <= 0.0) return distance(p, a);
  t = std::clamp(t / ab2, 0.0, 1.0);
  Point proj = a;
  for (int i = 0; i < p.dim(); ++i) proj[i] = a[i] + t * (b[i] - a[i]);
  return distance(p, proj);
}

bool segments_properly_cross(const Point& a1, const Point& a2, const Point& b1,
                             const Point& b2) {
  const double d1 = cross2(a1, a2, b1);
  const double d2 = cross2(a1, a2, b2);
  const double d3 = cross2(b1, b2, a1);
  const double d4 = cross2(b1, b2, a2);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

double segment_distance(const Point& a1, const Point& a2, const Point& b1,
                        const Point& b2) {
  if (segments_properly_cross(a1, a2, b1, b2)) return 0.0;
  return std::min(std::min(point_segment_distance(b1, a1, a2),
                           point_segment_distance(b2, a1, a2)),
                  std::min(point_segment_distance(a1, b1, b2),
                           point_segment_distance(a2, b1, b2)));
}

// Edges of a hull in 2D: the polygon cycle for rank 2, the single
// segment for rank 1, nothing for rank 0.
std::vector<std::pair<Point, Point>> hull_edges_2d(const Hull& h) {
  std::vector<std::pair<Point, Point>> edges;
  if (h.affine_rank == 1) {
    edges.emplace_back(h.vertices[0], h.vertices[1]);
  } else if (h.affine_rank == 2) {
    for (size_t i = 0; i < h.vertices.size(); ++i)
      edges.emplace_back(h.vertices[i], h.vertices[(i + 1) % h.vertices.size()]);
  }
  return edges;
}

}  // namespace

std::string to_string(CoverageKind kind) {
  switch (kind) {
    case CoverageKind::Diameter: return "diameter";
    case CoverageKind::HullVolume: return "hull_volume";
    case CoverageKind::HullPerimeter: return "hull_perimeter";
  }
  return "?";
}

CoverageKind coverage_from_string(const std::string& name) {
  if (name == "diameter") return CoverageKind::Diameter;
  if (name == "hull_volume") return CoverageKind::HullVolume;
  if (name == "hull_perimeter") return CoverageKind::HullPerimeter;
  throw std::invalid_argument("unknown coverage kind: " + name);
}

double distance(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += sq(a[i] - b[i]);
  return std::sqrt(s);
}

Hull convex_hull(std::span<const Point> points, double tol) {
  if (points.empty()) throw std::invalid_argument("empty point set");
  check_uniform_dimension(points);
  const int d = points.front().dim();
  std::vector<Point> pts = dedupe_points(points);

  Hull hull;
  hull.dimension = d;

  if (pts.size() == 1) {
    hull.vertices = std::move(pts);
    hull.affine_rank = 0;
    return hull;
  }

  if (d == 1) {
    hull.vertices = {pts.front(), pts.back()};  // pts sorted by coords
    hull.affine_rank = 1;
    return hull;
  }

  if (d == 2) {
    const double scale = std::max(1.0, max_abs_coord(pts));
    hull.vertices = hull_2d(std::move(pts), tol * scale * scale);
    hull.affine_rank = hull.vertices.size() >= 3   ? 2
                       : hull.vertices.size() == 2 ? 1
                                                   : 0;
    return hull;
  }

  // d >= 3: keep the extreme points (those not inside the hull of the rest).
  const double scale = std::max(1.0, max_abs_coord(pts));
  std::vector<Point> extreme;
  for (size_t i = 0; i < pts.size(); ++i) {
    std::vector<Point> others;
    others.reserve(pts.size() - 1);
    for (size_t j = 0; j < pts.size(); ++j)
      if (j != i) others.push_back(pts[j]);
    if (point_to_hull_distance_nd(others, pts[i]) > tol * scale) extreme.push_back(pts[i]);
  }
  if (extreme.empty()) extreme = pts;  // numerically coincident cloud
  hull.affine_rank = affine_rank_of(extreme, tol);
  hull.vertices = std::move(extreme);
  return hull;
}

double diameter(std::span<const Point> points) {
  if (points.empty()) throw std::invalid_argument("empty point set");
  check_uniform_dimension(points);
  double best = 0.0;
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j)
      best = std::max(best, distance(points[i], points[j]));
  return best;
}

double hull_measure(const Hull& hull, CoverageKind kind) {
  switch (kind) {
    case CoverageKind::Diameter:
      return diameter(hull.vertices);
    case CoverageKind::HullVolume: {
      if (hull.dimension == 1)
        return hull.affine_rank == 0 ? 0.0 : hull.vertices[1][0] - hull.vertices[0][0];
      if (hull.dimension == 2) {
        if (hull.affine_rank < 2) return 0.0;
        double twice_area = 0.0;  // shoelace over the CCW cycle
        const auto& v = hull.vertices;
        for (size_t i = 0; i < v.size(); ++i) {
          const auto& a = v[i];
          const auto& b = v[(i + 1) % v.size()];
          twice_area += a[0] * b[1] - b[0] * a[1];
        }
        return 0.5 * std::abs(twice_area);
      }
      break;
    }
    case CoverageKind::HullPerimeter: {
      if (hull.dimension == 1)
        return hull.affine_rank == 0 ? 0.0 : 2.0 * (hull.vertices[1][0] - hull.vertices[0][0]);
      if (hull.dimension == 2) {
        if (hull.affine_rank == 0) return 0.0;
        if (hull.affine_rank == 1) return 2.0 * distance(hull.vertices[0], hull.vertices[1]);
        double per = 0.0;
        const auto& v = hull.vertices;
        for (size_t i = 0; i < v.size(); ++i)
          per += distance(v[i], v[(i + 1) % v.size()]);
        return per;
      }
      break;
    }
  }
  throw std::invalid_argument("coverage unsupported in dimension " +
                              std::to_string(hull.dimension));
}

double hull_distance(const Hull& hull, const Point& p) {
  if (p.dim() != hull.dimension) throw std::invalid_argument("dimension mismatch");
  const auto& v = hull.vertices;
  if (hull.dimension == 1) {
    const double lo = v.front()[0];
    const double hi = v.back()[0];
    if (p[0] < lo) return lo - p[0];
    if (p[0] > hi) return p[0] - hi;
    return 0.0;
  }
  if (hull.dimension == 2) {
    if (hull.affine_rank == 0) return distance(p, v[0]);
    if (hull.affine_rank == 1) return point_segment_distance(p, v[0], v[1]);
    bool inside = true;
    double min_edge = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < v.size(); ++i) {
      const auto& a = v[i];
      const auto& b = v[(i + 1) % v.size()];
      if (cross2(a, b, p) < 0.0) inside = false;
      min_edge = std::min(min_edge, point_segment_distance(p, a, b));
    }
    return inside ? 0.0 : min_edge;
  }
  return point_to_hull_distance_nd(v, p);
}

bool hull_contains(const Hull& hull, const Point& p, double tol) {
  if (p.dim() != hull.dimension) throw std::invalid_argument("dimension mismatch");
  if (hull.dimension == 2 && hull.affine_rank == 2) {
    // Signed distance to every CCW edge line, with tol slack.
    const auto& v = hull.vertices;
    for (size_t i = 0; i < v.size(); ++i) {
      const auto& a = v[i];
      const auto& b = v[(i + 1) % v.size()];
      if (cross2(a, b, p) / distance(a, b) < -tol) return false;
    }
    return true;
  }
  return hull_distance(hull, p) <= tol;
}

bool hulls_intersect(const Hull& a, const Hull& b, double tol) {
  if (a.dimension != b.dimension) throw std::invalid_argument("dimension mismatch");
  const int d = a.dimension;

  if (d == 1) {
    const double lo_a = a.vertices.front()[0], hi_a = a.vertices.back()[0];
    const double lo_b = b.vertices.front()[0], hi_b = b.vertices.back()[0];
    return std::max(lo_a, lo_b) <= std::min(hi_a, hi_b) + tol;
  }

  for (const auto& v : a.vertices)
    if (hull_contains(b, v, tol)) return true;
  for (const auto& v : b.vertices)
    if (hull_contains(a, v, tol)) return true;

  if (d == 2) {
    for (const auto& ea : hull_edges_2d(a))
      for (const auto& eb : hull_edges_2d(b))
        if (segment_distance(ea.first, ea.second, eb.first, eb.second) <= tol) return true;
    return false;
  }

  // d >= 3: deterministic sampling of interior points (approximate).
  std::mt19937 rng(0x9e3779b9u);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int s = 0; s < 128; ++s) {
    const auto& src = (s % 2 == 0) ? a : b;
    const auto& dst = (s % 2 == 0) ? b : a;
    std::vector<double> w(src.vertices.size());
    double total = 0.0;
    for (auto& x : w) {
      x = unif(rng);
      total += x;
    }
    Point sample(std::vector<double>(static_cast<size_t>(d), 0.0));
    for (size_t i = 0; i < src.vertices.size(); ++i)
      for (int j = 0; j < d; ++j) sample[j] += (w[i] / total) * src.vertices[i][j];
    if (hull_contains(dst, sample, tol)) return true;
  }
  return false;
}

}  // namespace gfg

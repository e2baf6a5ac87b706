#include <algorithm>
#include <cmath>
#include <string>

#include "geometry/scanline.hpp"
#include "segtrack/error.hpp"
#include "segtrack/geometry.hpp"

namespace segtrack {

namespace {

double cross(Point2D o, Point2D a, Point2D b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int sign(double v) { return (v > 0) - (v < 0); }

bool on_segment(Point2D p, Point2D q, Point2D r) {
  return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) &&
         std::min(p.y, r.y) <= q.y && q.y <= std::max(p.y, r.y);
}

bool segments_intersect(Point2D p1, Point2D p2, Point2D q1, Point2D q2) {
  const int d1 = sign(cross(q1, q2, p1));
  const int d2 = sign(cross(q1, q2, p2));
  const int d3 = sign(cross(p1, p2, q1));
  const int d4 = sign(cross(p1, p2, q2));
  if (d1 != d2 && d3 != d4) return true;
  if (d1 == 0 && on_segment(q1, p1, q2)) return true;
  if (d2 == 0 && on_segment(q1, p2, q2)) return true;
  if (d3 == 0 && on_segment(p1, q1, p2)) return true;
  if (d4 == 0 && on_segment(p1, q2, p2)) return true;
  return false;
}

double signed_area(const Polygon& polygon) {
  const auto& v = polygon.vertices;
  double sum = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point2D& a = v[i];
    const Point2D& b = v[(i + 1) % n];
    sum += a.x * b.y - b.x * a.y;
  }
  return sum / 2.0;
}

}  // namespace

void validate_polygon(const Polygon& polygon) {
  if (polygon.vertices.size() < 3) {
    throw Error(ErrorKind::kInvalidPolygon,
                "polygon needs at least 3 vertices, got " +
                    std::to_string(polygon.vertices.size()));
  }
  for (const Point2D& p : polygon.vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorKind::kInvalidPolygon, "polygon has a non-finite vertex");
    }
  }
}

bool is_simple(const Polygon& polygon) {
  validate_polygon(polygon);
  const auto& v = polygon.vertices;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Adjacent edges share a vertex by construction.
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

double polygon_area(const Polygon& polygon) {
  validate_polygon(polygon);
  return std::abs(signed_area(polygon));
}

double polygon_perimeter(const Polygon& polygon) {
  validate_polygon(polygon);
  const auto& v = polygon.vertices;
  double sum = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point2D& a = v[i];
    const Point2D& b = v[(i + 1) % n];
    sum += std::hypot(b.x - a.x, b.y - a.y);
  }
  return sum;
}

BoundingBox polygon_bbox(const Polygon& polygon) {
  validate_polygon(polygon);
  auto [xmin, xmax] = std::minmax_element(
      polygon.vertices.begin(), polygon.vertices.end(),
      [](const Point2D& a, const Point2D& b) { return a.x < b.x; });
  auto [ymin, ymax] = std::minmax_element(
      polygon.vertices.begin(), polygon.vertices.end(),
      [](const Point2D& a, const Point2D& b) { return a.y < b.y; });
  return {xmin->x, ymin->y, xmax->x - xmin->x, ymax->y - ymin->y};
}

bool contains(const Polygon& polygon, Point2D point) {
  validate_polygon(polygon);
  std::vector<double> xs;
  detail::scanline_crossings(polygon, point.y, xs);
  std::size_t left = 0;
  for (double x : xs) {
    if (x <= point.x) ++left;
  }
  return left % 2 == 1;
}

Point2D centroid(const Polygon& polygon) {
  validate_polygon(polygon);
  const auto& v = polygon.vertices;
  const double area = signed_area(polygon);
  if (std::abs(area) < 1e-12) {
    // Degenerate ring: fall back to the vertex mean.
    Point2D sum;
    for (const Point2D& p : v) {
      sum.x += p.x;
      sum.y += p.y;
    }
    return {sum.x / static_cast<double>(v.size()),
            sum.y / static_cast<double>(v.size())};
  }
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point2D& a = v[i];
    const Point2D& b = v[(i + 1) % n];
    const double w = a.x * b.y - b.x * a.y;
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;
  }
  return {cx / (6.0 * area), cy / (6.0 * area)};
}

}  // namespace segtrack

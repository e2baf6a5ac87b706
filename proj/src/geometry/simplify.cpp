#include <cmath>
#include <vector>

#include "segtrack/error.hpp"
#include "segtrack/geometry.hpp"

namespace segtrack {

namespace {

// Distance from p to the line through a and b (point distance if a == b).
double deviation(Point2D p, Point2D a, Point2D b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len = std::hypot(dx, dy);
  if (len == 0.0) return std::hypot(p.x - a.x, p.y - a.y);
  return std::abs(dx * (a.y - p.y) - dy * (a.x - p.x)) / len;
}

struct Chain {
  std::size_t first;
  std::size_t last;  // unwrapped; index modulo n
};

void douglas_peucker(const std::vector<Point2D>& v, std::size_t first,
                     std::size_t last, double epsilon, std::vector<bool>& keep) {
  const std::size_t n = v.size();
  std::vector<Chain> stack{{first, last}};
  while (!stack.empty()) {
    const Chain c = stack.back();
    stack.pop_back();
    if (c.last <= c.first + 1) continue;
    const Point2D& a = v[c.first % n];
    const Point2D& b = v[c.last % n];
    double worst = -1.0;
    std::size_t worst_at = c.first;
    for (std::size_t i = c.first + 1; i < c.last; ++i) {
      const double d = deviation(v[i % n], a, b);
      if (d > worst) {
        worst = d;
        worst_at = i;
      }
    }
    if (worst > epsilon) {
      keep[worst_at % n] = true;
      stack.push_back({worst_at, c.last});
      stack.push_back({c.first, worst_at});
    }
  }
}

}  // namespace

Polygon simplify_polygon(const Polygon& polygon, double epsilon) {
  validate_polygon(polygon);
  if (!(epsilon >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "epsilon must be >= 0");
  }
  const auto& v = polygon.vertices;
  const std::size_t n = v.size();

  std::size_t anchor_a = 0;
  std::size_t anchor_b = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = v[j].x - v[i].x;
      const double dy = v[j].y - v[i].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 > best) {
        best = d2;
        anchor_a = i;
        anchor_b = j;
      }
    }
  }

  std::vector<bool> keep(n, false);
  keep[anchor_a] = keep[anchor_b] = true;
  douglas_peucker(v, anchor_a, anchor_b, epsilon, keep);
  douglas_peucker(v, anchor_b, anchor_a + n, epsilon, keep);

  std::size_t kept = 0;
  for (bool k : keep) kept += k ? 1 : 0;
  if (kept < 3) {
    double worst = -1.0;
    std::size_t worst_at = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (keep[i]) continue;
      const double d = deviation(v[i], v[anchor_a], v[anchor_b]);
      if (d > worst) {
        worst = d;
        worst_at = i;
      }
    }
    keep[worst_at] = true;
    // Refine both halves of the chain that now holds the forced vertex.
    if (anchor_a < worst_at && worst_at < anchor_b) {
      douglas_peucker(v, anchor_a, worst_at, epsilon, keep);
      douglas_peucker(v, worst_at, anchor_b, epsilon, keep);
    } else {
      const std::size_t at = worst_at < anchor_a ? worst_at + n : worst_at;
      douglas_peucker(v, anchor_b, at, epsilon, keep);
      douglas_peucker(v, at, anchor_a + n, epsilon, keep);
    }
  }

  Polygon out;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.vertices.push_back(v[i]);
  }
  return out;
}

}  // namespace segtrack

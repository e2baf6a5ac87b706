#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "segtrack/geometry.hpp"

namespace segtrack::detail {

// X positions where the horizontal line at `y` crosses polygon edges, sorted.
// Edges are half-open in y ([lower, upper)) so a vertex on the scanline is
// counted once and horizontal edges never contribute.
inline void scanline_crossings(const Polygon& polygon, double y,
                               std::vector<double>& out) {
  out.clear();
  const auto& v = polygon.vertices;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    Point2D lo = v[i];
    Point2D hi = v[(i + 1) % n];
    if (lo.y > hi.y) std::swap(lo, hi);
    if (lo.y <= y && y < hi.y) {
      out.push_back(lo.x + (y - lo.y) * (hi.x - lo.x) / (hi.y - lo.y));
    }
  }
  std::sort(out.begin(), out.end());
}

inline int clamp_to_int(double v, int lo, int hi) {
  return static_cast<int>(std::clamp(v, static_cast<double>(lo),
                                     static_cast<double>(hi)));
}

// Calls emit(row, col_begin, col_end) for every maximal run of pixel centers
// inside the polygon, clipped to [0, height) x [0, width). Crossings match
// scanline_crossings exactly; only edges spanning the row are visited.
template <typename Emit>
void for_each_span(const Polygon& polygon, int height, int width, Emit&& emit) {
  struct Edge {
    Point2D lo, hi;
  };
  const auto& v = polygon.vertices;
  std::vector<Edge> edges;
  edges.reserve(v.size());
  double ymin = v.front().y;
  double ymax = ymin;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    Point2D lo = v[i];
    Point2D hi = v[(i + 1) % n];
    ymin = std::min(ymin, lo.y);
    ymax = std::max(ymax, lo.y);
    if (lo.y > hi.y) std::swap(lo, hi);
    if (lo.y < hi.y) edges.push_back({lo, hi});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.lo.y < b.lo.y; });

  const int row_begin = clamp_to_int(std::floor(ymin - 0.5), 0, height);
  const int row_end = clamp_to_int(std::ceil(ymax + 0.5), 0, height);
  std::vector<const Edge*> active;
  std::vector<double> xs;
  std::size_t next = 0;
  for (int r = row_begin; r < row_end; ++r) {
    const double y = r + 0.5;
    for (; next < edges.size() && edges[next].lo.y <= y; ++next) active.push_back(&edges[next]);
    std::erase_if(active, [y](const Edge* e) { return e->hi.y <= y; });
    xs.clear();
    for (const Edge* e : active) {
      xs.push_back(e->lo.x + (y - e->lo.y) * (e->hi.x - e->lo.x) / (e->hi.y - e->lo.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
      // Center c+0.5 lies in [xs[i], xs[i+1]).
      const int c0 = clamp_to_int(std::ceil(xs[i] - 0.5), 0, width);
      const int c1 = clamp_to_int(std::ceil(xs[i + 1] - 0.5), 0, width);
      if (c0 < c1) emit(r, c0, c1);
    }
  }
}

// Accumulates alternating zero/one runs, starting with zeros.
class RunBuilder {
 public:
  void push(bool value, std::uint64_t length) {
    if (length == 0) return;
    if (value != current_) {
      counts_.push_back(static_cast<std::uint32_t>(run_));
      run_ = 0;
      current_ = value;
    }
    run_ += length;
  }

  std::vector<std::uint32_t> finish() {
    counts_.push_back(static_cast<std::uint32_t>(run_));
    run_ = 0;
    current_ = false;
    return std::move(counts_);
  }

 private:
  std::vector<std::uint32_t> counts_;
  std::uint64_t run_ = 0;
  bool current_ = false;
};

}  // namespace segtrack::detail

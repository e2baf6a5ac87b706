#include <array>
#include <vector>

#include "segtrack/geometry.hpp"

namespace segtrack {

namespace {

// Heading on the pixel-corner lattice: right, down, left, up (screen space).
constexpr std::array<int, 4> kDx = {1, 0, -1, 0};
constexpr std::array<int, 4> kDy = {0, 1, 0, -1};

// Pixel (row, col) ahead of corner (x, y) on the right/left of heading d.
// The foreground is kept on the right of the direction of travel.
struct Ahead {
  int right_row, right_col, left_row, left_col;
};

Ahead ahead_of(int x, int y, int d) {
  switch (d) {
    case 0: return {y, x, y - 1, x};
    case 1: return {y, x - 1, y, x};
    case 2: return {y - 1, x - 1, y, x - 1};
    default: return {y - 1, x, y - 1, x - 1};
  }
}

// Labels 4-connected components in raster order, 1-based; 0 = background.
int label_components(const BinaryMask& mask, std::vector<int>& labels) {
  const int h = mask.height();
  const int w = mask.width();
  labels.assign(static_cast<std::size_t>(h) * w, 0);
  std::vector<int> stack;
  int next = 0;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * w + c;
      if (!mask.get(r, c) || labels[idx] != 0) continue;
      labels[idx] = ++next;
      stack.push_back(static_cast<int>(idx));
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        const int cr = cur / w;
        const int cc = cur % w;
        for (int d = 0; d < 4; ++d) {
          const int nr = cr + kDy[d];
          const int nc = cc + kDx[d];
          if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
          const std::size_t nidx = static_cast<std::size_t>(nr) * w + nc;
          if (mask.get(nr, nc) && labels[nidx] == 0) {
            labels[nidx] = next;
            stack.push_back(static_cast<int>(nidx));
          }
        }
      }
    }
  }
  return next;
}

Polygon trace_outer(const std::vector<int>& labels, int h, int w, int id,
                    int start_row, int start_col) {
  auto inside = [&](int r, int c) {
    return r >= 0 && r < h && c >= 0 && c < w &&
           labels[static_cast<std::size_t>(r) * w + c] == id;
  };
  Polygon ring;
  const int sx = start_col;
  const int sy = start_row;
  int x = sx;
  int y = sy;
  int d = 0;
  ring.vertices.push_back({static_cast<double>(x), static_cast<double>(y)});
  while (true) {
    x += kDx[d];
    y += kDy[d];
    const Ahead a = ahead_of(x, y, d);
    int next = d;
    // Turning right first keeps diagonal-only neighbours apart (4-connectivity).
    if (!inside(a.right_row, a.right_col)) {
      next = (d + 1) % 4;
    } else if (inside(a.left_row, a.left_col)) {
      next = (d + 3) % 4;
    }
    if (x == sx && y == sy && next == 0) break;
    if (next != d) {
      ring.vertices.push_back({static_cast<double>(x), static_cast<double>(y)});
    }
    d = next;
  }
  return ring;
}

}  // namespace

std::vector<Polygon> mask_to_polygons(const BinaryMask& mask) {
  std::vector<int> labels;
  const int n = label_components(mask, labels);
  std::vector<Polygon> rings;
  rings.reserve(static_cast<std::size_t>(n));
  int seen = 0;
  for (int r = 0; r < mask.height() && seen < n; ++r) {
    for (int c = 0; c < mask.width() && seen < n; ++c) {
      const int id = labels[static_cast<std::size_t>(r) * mask.width() + c];
      if (id == seen + 1) {
        rings.push_back(trace_outer(labels, mask.height(), mask.width(), id, r, c));
        ++seen;
      }
    }
  }
  return rings;
}

}  // namespace segtrack

#include <algorithm>
#include <cmath>
#include <string>

#include "geometry/scanline.hpp"
#include "segtrack/error.hpp"
#include "segtrack/geometry.hpp"

namespace segtrack {

namespace {

void check_canvas(int height, int width) {
  if (height <= 0 || width <= 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "canvas must be positive, got " + std::to_string(height) + "x" +
                    std::to_string(width));
  }
}

}  // namespace

BinaryMask::BinaryMask(int height, int width)
    : height_(height),
      width_(width),
      bits_(static_cast<std::size_t>(std::max(height, 0)) *
                static_cast<std::size_t>(std::max(width, 0)),
            0) {
  if (height < 0 || width < 0) {
    throw Error(ErrorKind::kInvalidArgument, "negative mask dimensions");
  }
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

BinaryMask rasterize(const Polygon& polygon, int height, int width) {
  validate_polygon(polygon);
  check_canvas(height, width);
  BinaryMask mask(height, width);
  detail::for_each_span(polygon, height, width, [&](int r, int c0, int c1) {
    for (int c = c0; c < c1; ++c) mask.set(r, c);
  });
  return mask;
}

RleMask rasterize_rle(std::span<const Polygon> rings, int height, int width) {
  check_canvas(height, width);
  for (const Polygon& ring : rings) validate_polygon(ring);

  // Rasterize into a window covering the clipped union of ring bounds.
  int r0 = height, r1 = 0, c0 = width, c1 = 0;
  for (const Polygon& ring : rings) {
    const BoundingBox box = polygon_bbox(ring);
    r0 = std::min(r0, detail::clamp_to_int(std::floor(box.y - 0.5), 0, height));
    r1 = std::max(r1, detail::clamp_to_int(std::ceil(box.y + box.h + 0.5), 0, height));
    c0 = std::min(c0, detail::clamp_to_int(std::floor(box.x - 0.5), 0, width));
    c1 = std::max(c1, detail::clamp_to_int(std::ceil(box.x + box.w + 0.5), 0, width));
  }

  RleMask out{height, width, {}};
  detail::RunBuilder runs;
  if (r0 >= r1 || c0 >= c1) {
    runs.push(false, static_cast<std::uint64_t>(height) * width);
    out.counts = runs.finish();
    return out;
  }

  const int win_h = r1 - r0;
  const int win_w = c1 - c0;
  // Column-major window.
  std::vector<std::uint8_t> window(static_cast<std::size_t>(win_h) * win_w, 0);
  for (const Polygon& ring : rings) {
    detail::for_each_span(ring, height, width, [&](int r, int a, int b) {
      for (int c = a; c < b; ++c) {
        window[static_cast<std::size_t>(c - c0) * win_h + (r - r0)] = 1;
      }
    });
  }

  const auto h = static_cast<std::uint64_t>(height);
  runs.push(false, static_cast<std::uint64_t>(c0) * h);
  for (int c = 0; c < win_w; ++c) {
    runs.push(false, static_cast<std::uint64_t>(r0));
    const std::uint8_t* col = window.data() + static_cast<std::size_t>(c) * win_h;
    for (int r = 0; r < win_h; ++r) runs.push(col[r] != 0, 1);
    runs.push(false, static_cast<std::uint64_t>(height - r1));
  }
  runs.push(false, static_cast<std::uint64_t>(width - c1) * h);
  out.counts = runs.finish();
  return out;
}

}  // namespace segtrack

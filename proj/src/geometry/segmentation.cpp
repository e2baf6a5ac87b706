#include <algorithm>
#include <cmath>
#include <string>

#include "segtrack/error.hpp"
#include "segtrack/geometry.hpp"

namespace segtrack {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double segmentation_area(const Segmentation& seg) {
  return std::visit(
      Overloaded{
          [](const MultiPolygon& rings) {
            double sum = 0.0;
            for (const Polygon& ring : rings) sum += polygon_area(ring);
            return sum;
          },
          [](const RleMask& rle) { return static_cast<double>(rle_area(rle)); },
      },
      seg);
}

BoundingBox segmentation_bbox(const Segmentation& seg) {
  return std::visit(
      Overloaded{
          [](const MultiPolygon& rings) {
            if (rings.empty()) return BoundingBox{};
            double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
            for (const Polygon& ring : rings) {
              const BoundingBox b = polygon_bbox(ring);
              x0 = std::min(x0, b.x);
              y0 = std::min(y0, b.y);
              x1 = std::max(x1, b.x + b.w);
              y1 = std::max(y1, b.y + b.h);
            }
            return BoundingBox{x0, y0, x1 - x0, y1 - y0};
          },
          [](const RleMask& rle) { return rle_bbox(rle); },
      },
      seg);
}

Point2D segmentation_centroid(const Segmentation& seg) {
  return std::visit(
      Overloaded{
          [](const MultiPolygon& rings) {
            if (rings.empty()) {
              throw Error(ErrorKind::kEmptySegmentation, "no polygon rings");
            }
            if (rings.size() == 1) return centroid(rings.front());
            double total = 0.0, cx = 0.0, cy = 0.0;
            for (const Polygon& ring : rings) {
              const double a = polygon_area(ring);
              const Point2D c = centroid(ring);
              total += a;
              cx += a * c.x;
              cy += a * c.y;
            }
            if (total == 0.0) return centroid(rings.front());
            return Point2D{cx / total, cy / total};
          },
          [](const RleMask& rle) { return centroid(rle); },
      },
      seg);
}

bool is_empty(const Segmentation& seg) {
  if (const auto* rings = std::get_if<MultiPolygon>(&seg)) return rings->empty();
  return rle_area(std::get<RleMask>(seg)) == 0;
}

RleMask to_rle(const Segmentation& seg, int height, int width) {
  if (const auto* rle = std::get_if<RleMask>(&seg)) {
    if (rle->height != height || rle->width != width) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "mask is " + std::to_string(rle->height) + "x" +
                      std::to_string(rle->width) + ", canvas is " +
                      std::to_string(height) + "x" + std::to_string(width));
    }
    return *rle;
  }
  return rasterize_rle(std::get<MultiPolygon>(seg), height, width);
}

double segmentation_iou(const Segmentation& a, const Segmentation& b, bool crowd) {
  const auto* ra = std::get_if<RleMask>(&a);
  const auto* rb = std::get_if<RleMask>(&b);
  if (ra && rb) return rle_iou(*ra, *rb, crowd);

  int height = 0;
  int width = 0;
  if (ra) {
    height = ra->height;
    width = ra->width;
  } else if (rb) {
    height = rb->height;
    width = rb->width;
  } else {
    for (const Segmentation* s : {&a, &b}) {
      if (is_empty(*s)) continue;
      const BoundingBox box = segmentation_bbox(*s);
      height = std::max(height, static_cast<int>(std::ceil(box.y + box.h)) + 1);
      width = std::max(width, static_cast<int>(std::ceil(box.x + box.w)) + 1);
    }
    if (height <= 0 || width <= 0) return 0.0;
  }
  return rle_iou(to_rle(a, height, width), to_rle(b, height, width), crowd);
}

}  // namespace segtrack

#pragma once

// Pixel-exact mask and polygon kernels.
//
// Coordinates follow image conventions: origin at the top-left corner of
// pixel (0, 0), x grows rightward (columns), y grows downward (rows). Pixel
// (row r, col c) covers [c, c+1) x [r, r+1) and its center is (c+0.5, r+0.5).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace segtrack {

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

// Closed ring; the edge from the last vertex back to the first is implicit.
struct Polygon {
  std::vector<Point2D> vertices;

  friend bool operator==(const Polygon&, const Polygon&) = default;
};

// Top-left corner plus extent.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// Dense row-major binary grid.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }
  bool get(int row, int col) const {
    return bits_[static_cast<std::size_t>(row) * width_ + col] != 0;
  }
  void set(int row, int col, bool value = true) {
    bits_[static_cast<std::size_t>(row) * width_ + col] = value ? 1 : 0;
  }
  std::size_t count() const;
  std::span<const std::uint8_t> bits() const { return bits_; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Column-major run lengths. counts[0] is the leading zero run (possibly 0),
// runs then alternate ones/zeros. The counts always sum to height * width.
struct RleMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint32_t> counts;

  friend bool operator==(const RleMask&, const RleMask&) = default;
};

using MultiPolygon = std::vector<Polygon>;

// Any COCO segmentation form: polygon rings or a run-length mask.
using Segmentation = std::variant<MultiPolygon, RleMask>;

// --- polygons ---------------------------------------------------------------

// Throws kInvalidPolygon for fewer than 3 vertices or non-finite coordinates.
void validate_polygon(const Polygon& polygon);

// True when no two non-adjacent edges intersect. Input polygons may
// self-intersect; this is only a diagnostic.
bool is_simple(const Polygon& polygon);

double polygon_area(const Polygon& polygon);
double polygon_perimeter(const Polygon& polygon);
BoundingBox polygon_bbox(const Polygon& polygon);

// Even-odd containment with the half-open boundary rule used by rasterize():
// points on left/top edges are inside, on right/bottom edges outside.
bool contains(const Polygon& polygon, Point2D point);

// Pixel (r, c) is set iff its center is inside the polygon (even-odd rule).
BinaryMask rasterize(const Polygon& polygon, int height, int width);

// Union of the rasterized rings, built without a full-frame dense buffer.
RleMask rasterize_rle(std::span<const Polygon> rings, int height, int width);

// --- run-length masks -------------------------------------------------------

// Throws kCorruptRle when counts do not cover height * width exactly.
void validate_rle(const RleMask& rle);

RleMask mask_to_rle(const BinaryMask& mask);
BinaryMask rle_to_mask(const RleMask& rle);

// Compressed COCO "counts" string, bit-compatible with pycocotools.
std::string rle_encode_string(const RleMask& rle);
RleMask rle_decode_string(std::string_view counts, int height, int width);

std::uint64_t rle_area(const RleMask& rle);
BoundingBox rle_bbox(const RleMask& rle);

// |a ∩ b| / |a ∪ b|. With crowd set the union is replaced by area(a), which
// is how COCO scores a detection `a` against a crowd region `b`.
double rle_iou(const RleMask& a, const RleMask& b, bool crowd = false);

double bbox_iou(const BoundingBox& a, const BoundingBox& b);

// One outer ring per 4-connected foreground component, on pixel corners.
// Components are emitted in raster order of their first pixel; each ring
// starts at that pixel's top-left corner and runs clockwise on screen.
std::vector<Polygon> mask_to_polygons(const BinaryMask& mask);

// Ramer-Douglas-Peucker on a closed ring, anchored at the two mutually
// farthest vertices. Output is a subsequence of the input with >= 3 vertices.
Polygon simplify_polygon(const Polygon& polygon, double epsilon);

Point2D centroid(const Polygon& polygon);
Point2D centroid(const RleMask& rle);

// --- segmentation helpers ---------------------------------------------------

double segmentation_area(const Segmentation& seg);
BoundingBox segmentation_bbox(const Segmentation& seg);
Point2D segmentation_centroid(const Segmentation& seg);
bool is_empty(const Segmentation& seg);

// Rasterizes polygon rings onto a height x width canvas; RLE input must
// already have those dimensions.
RleMask to_rle(const Segmentation& seg, int height, int width);

// IoU of two segmentations in any form. Polygon-only pairs are compared on a
// canvas anchored at the origin that covers both shapes.
double segmentation_iou(const Segmentation& a, const Segmentation& b,
                        bool crowd = false);

}  // namespace segtrack

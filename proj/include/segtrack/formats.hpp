#pragma once

// Annotation interchange: labelme documents in, COCO datasets and
// prediction streams in and out, and frame sampling for labeling.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "segtrack/geometry.hpp"
#include "segtrack/tracking.hpp"

namespace segtrack {

enum class ShapeType { kPolygon, kPoint };

struct Shape {
  std::string label;
  std::vector<Point2D> points;
  ShapeType shape_type = ShapeType::kPolygon;
  std::optional<std::int64_t> group_id;

  friend bool operator==(const Shape&, const Shape&) = default;
};

struct LabelmeDocument {
  std::string image_path;
  int image_height = 0;
  int image_width = 0;
  std::vector<Shape> shapes;

  friend bool operator==(const LabelmeDocument&, const LabelmeDocument&) = default;
};

struct CocoImage {
  std::int64_t id = 0;
  std::string file_name;
  int height = 0;
  int width = 0;
  std::optional<std::int64_t> frame_index;

  friend bool operator==(const CocoImage&, const CocoImage&) = default;
};

struct CocoAnnotation {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  std::int64_t category_id = 0;
  Segmentation segmentation;
  BoundingBox bbox;
  double area = 0.0;
  bool iscrowd = false;

  friend bool operator==(const CocoAnnotation&, const CocoAnnotation&) = default;
};

struct CocoCategory {
  std::int64_t id = 0;
  std::string name;

  friend bool operator==(const CocoCategory&, const CocoCategory&) = default;
};

struct CocoDataset {
  std::vector<CocoImage> images;
  std::vector<CocoAnnotation> annotations;
  std::vector<CocoCategory> categories;

  // Throws kIntegrity listing duplicate ids and dangling references.
  void validate() const;

  const CocoImage* find_image(std::int64_t id) const;
  const CocoCategory* find_category(std::int64_t id) const;

  // (frame, image) pairs in frame order. When every image carries a
  // frame_index that is its frame; otherwise images are ordered by
  // ascending file_name and numbered from 0.
  std::vector<std::pair<std::int64_t, const CocoImage*>> frames() const;

  friend bool operator==(const CocoDataset&, const CocoDataset&) = default;
};

struct SplitResult {
  CocoDataset train;
  CocoDataset val;
  std::uint64_t seed = 0;
  double ratio = 0.0;
};

inline constexpr double kDefaultKeypointRadius = 5.0;
inline constexpr double kDefaultSplitRatio = 0.8;

LabelmeDocument parse_labelme(std::string_view json_text);

// Regular 16-gon of circumradius `radius`, first vertex at angle 0.
Polygon keypoint_to_region(Point2D center, double radius);

CocoDataset labelme_to_coco(const std::vector<LabelmeDocument>& docs,
                            double keypoint_radius = kDefaultKeypointRadius);

SplitResult split_dataset(const CocoDataset& ds, double ratio, std::uint64_t seed);

// Keys are emitted in a fixed order; identical input gives identical bytes.
// RLE segmentations are written in compressed-string form.
std::string write_coco(const CocoDataset& ds);
CocoDataset read_coco(std::string_view json_text);

// Ground-truth identity tracks: one per category, one state per frame of
// frames(), segmentations as RLE at image size. Crowd annotations are
// skipped; two annotations of one category on one image throw kConflict.
std::vector<Track> coco_to_tracks(const CocoDataset& ds);

// Decodes any COCO segmentation JSON form. Polygon rings are flat
// [x1,y1,x2,y2,...] arrays.
Segmentation parse_segmentation(const std::string& json_text);

// JSON-Lines: {"frame","label","score","bbox","segmentation"} per line.
std::vector<DetectionRecord> parse_predictions(std::istream& in);
std::vector<DetectionRecord> parse_predictions(std::string_view text);
std::string prediction_line(const DetectionRecord& det);
void write_predictions(std::ostream& out, const std::vector<DetectionRecord>& dets);

struct SamplingStrategy {
  enum class Kind { kRandom, kUniform };
  Kind kind = Kind::kRandom;
  std::uint64_t seed = 0;

  static SamplingStrategy random(std::uint64_t seed) { return {Kind::kRandom, seed}; }
  static SamplingStrategy uniform() { return {Kind::kUniform, 0}; }
};

// k distinct ascending frame indices in [0, n_total).
std::vector<std::int64_t> sample_frames(std::int64_t n_total, std::int64_t k,
                                        SamplingStrategy strategy);

}  // namespace segtrack

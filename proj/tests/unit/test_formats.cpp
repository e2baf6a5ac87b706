#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "doctest.h"
#include "random_data.hpp"
#include "segtrack/error.hpp"
#include "segtrack/formats.hpp"

using namespace segtrack;
using testdata::rect;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<LabelmeDocument> fixture_docs() {
  std::vector<LabelmeDocument> docs;
  for (const char* name : {"frame_000.json", "frame_001.json", "frame_002.json"}) {
    docs.push_back(parse_labelme(slurp(std::filesystem::path(SEGTRACK_TEST_DATA_DIR) / "labelme" / name)));
  }
  return docs;
}

template <typename F>
std::string error_of(F&& fn, ErrorKind expected) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.kind() == expected);
    return e.what();
  }
  FAIL("no error raised");
  return {};
}

CocoDataset numbered_images(int n) {
  CocoDataset ds;
  ds.categories = {{1, "vole_1"}, {2, "vole_2"}};
  for (int i = 0; i < n; ++i) {
    ds.images.push_back({i + 1, "f" + std::to_string(i) + ".png", 20, 20, i});
    ds.annotations.push_back({i + 1, i + 1, 1 + i % 2, MultiPolygon{rect(1, 1, 4, 4)},
                              {1, 1, 4, 4}, 16.0, false});
  }
  return ds;
}

}  // namespace

TEST_SUITE("formats") {

TEST_CASE("parse minimal labelme document") {
  const auto doc = parse_labelme(R"({
    "imagePath": "a.png", "imageHeight": 48, "imageWidth": 64,
    "shapes": [{"label": "vole_1", "points": [[1,2],[10,2],[10,9],[1,9]],
                "shape_type": "polygon", "group_id": null}]})");
  CHECK(doc.image_path == "a.png");
  CHECK(doc.image_height == 48);
  CHECK(doc.image_width == 64);
  REQUIRE(doc.shapes.size() == 1);
  CHECK(doc.shapes[0].label == "vole_1");
  CHECK(doc.shapes[0].shape_type == ShapeType::kPolygon);
  CHECK(doc.shapes[0].points == std::vector<Point2D>{{1, 2}, {10, 2}, {10, 9}, {1, 9}});
  CHECK_FALSE(doc.shapes[0].group_id.has_value());
}

TEST_CASE("labelme schema errors") {
  CHECK(parse_labelme(R"({"imageHeight": 4, "imageWidth": 4, "shapes": []})").shapes.empty());
  CHECK(error_of([] { parse_labelme(R"({"imageHeight": 4, "shapes": []})"); },
                 ErrorKind::kSchemaError)
            .find("imageWidth") != std::string::npos);
  CHECK(error_of([] {
          parse_labelme(R"({"imageHeight": 4, "imageWidth": 4,
                            "shapes": [{"label": "a", "points": [[0,0],[1,1]], "shape_type": "rectangle"}]})");
        },
                 ErrorKind::kSchemaError)
            .find("rectangle") != std::string::npos);
  error_of([] { parse_labelme("{"); }, ErrorKind::kParseError);
}

TEST_CASE("keypoint region") {
  const Polygon p = keypoint_to_region({50, 50}, 5);
  CHECK(p.vertices.size() == 16);
  CHECK(polygon_area(p) == doctest::Approx(0.5 * 16 * 25 * std::sin(std::numbers::pi / 8)));
  CHECK(polygon_area(p) == doctest::Approx(76.537).epsilon(1e-4));
  const Point2D c = centroid(p);
  CHECK(std::abs(c.x - 50) < 1e-9);
  CHECK(std::abs(c.y - 50) < 1e-9);
  error_of([] { keypoint_to_region({0, 0}, 0); }, ErrorKind::kInvalidArgument);
}

TEST_CASE("labelme to COCO") {
  LabelmeDocument a{"a.png", 30, 30, {{"vole_2", {{0, 0}, {10, 0}, {10, 10}, {0, 10}}, ShapeType::kPolygon, std::nullopt}}};
  LabelmeDocument b{"b.png", 30, 30,
                    {{"vole_1", {{5, 5}, {15, 5}, {15, 15}, {5, 15}}, ShapeType::kPolygon, std::nullopt},
                     {"nose", {{20, 20}}, ShapeType::kPoint, std::nullopt}}};
  const CocoDataset ds = labelme_to_coco({a, b});
  REQUIRE(ds.categories.size() == 3);
  CHECK(ds.categories[0] == CocoCategory{1, "nose"});
  CHECK(ds.categories[1] == CocoCategory{2, "vole_1"});
  CHECK(ds.categories[2] == CocoCategory{3, "vole_2"});
  REQUIRE(ds.annotations.size() == 3);
  CHECK(ds.annotations[0].area == 100.0);
  CHECK(ds.annotations[0].bbox == BoundingBox{0, 0, 10, 10});
  CHECK(ds.annotations[0].category_id == 3);
  CHECK(ds.annotations[2].segmentation ==
        Segmentation{MultiPolygon{keypoint_to_region({20, 20}, kDefaultKeypointRadius)}});
  CHECK(ds.images[1] == CocoImage{2, "b.png", 30, 30, 1});

  error_of([&] { labelme_to_coco({a, a}); }, ErrorKind::kConflict);
  error_of([] { labelme_to_coco({}); }, ErrorKind::kInvalidArgument);
}

TEST_CASE("labelme fixtures convert with group merging") {
  const auto docs = fixture_docs();
  const CocoDataset ds = labelme_to_coco(docs);
  std::vector<std::string> names;
  for (const auto& c : ds.categories) names.push_back(c.name);
  CHECK(names == std::vector<std::string>{"huddle", "nose", "vole_1", "vole_2"});
  CHECK(ds.images.size() == 3);
  // Seven shapes, two of which share (vole_1, group 1).
  REQUIRE(ds.annotations.size() == 6);
  const auto& merged = std::get<MultiPolygon>(ds.annotations[3].segmentation);
  CHECK(ds.annotations[3].category_id == 3);
  CHECK(merged.size() == 2);
  CHECK(ds.annotations[3].area == doctest::Approx(18.0 * 16.0 + 40.0));
}

TEST_CASE("shape count equals annotation count without grouping") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<LabelmeDocument> docs;
    std::size_t shapes = 0;
    for (int d = 0; d < 4; ++d) {
      LabelmeDocument doc{"img" + std::to_string(d) + ".png", 50, 50, {}};
      const int n = static_cast<int>(rng() % 5);
      for (int k = 0; k < n; ++k) {
        doc.shapes.push_back({"vole_" + std::to_string(rng() % 3), rect(k, k, 5, 5).vertices,
                              ShapeType::kPolygon, std::nullopt});
      }
      shapes += doc.shapes.size();
      docs.push_back(doc);
    }
    const CocoDataset ds = labelme_to_coco(docs);
    CHECK(ds.annotations.size() == shapes);
    for (std::size_t k = 0; k < ds.categories.size(); ++k) {
      CHECK(ds.categories[k].id == static_cast<std::int64_t>(k) + 1);
      if (k > 0) CHECK(ds.categories[k - 1].name < ds.categories[k].name);
    }
  }
}

TEST_CASE("COCO write/read roundtrip") {
  CocoDataset ds = labelme_to_coco(fixture_docs());
  const std::string text = write_coco(ds);
  CHECK(read_coco(text) == ds);
  CHECK(write_coco(read_coco(text)) == text);

  // RLE annotations survive the counts-string codec.
  BinaryMask m(64, 128);
  for (int r = 3; r < 20; ++r) {
    for (int c = 5; c < 40; c += 2) m.set(r, c);
  }
  ds.annotations.push_back({99, 2, 1, mask_to_rle(m), {5, 3, 35, 17}, 306.0, true});
  const CocoDataset back = read_coco(write_coco(ds));
  CHECK(back == ds);
  CHECK(std::get<RleMask>(back.annotations.back().segmentation) == mask_to_rle(m));
}

TEST_CASE("COCO integrity and optional fields") {
  CocoDataset ds = numbered_images(2);
  ds.annotations.clear();
  CHECK(read_coco(write_coco(ds)) == ds);

  ds.annotations.push_back({1, 7, 1, MultiPolygon{rect(0, 0, 2, 2)}, {0, 0, 2, 2}, 4.0, false});
  const std::string msg = error_of([&] { read_coco(write_coco(ds)); }, ErrorKind::kIntegrity);
  CHECK(msg == "integrity-error: annotation 1 references missing image 7");

  const CocoDataset filled = read_coco(R"({
    "images": [{"id": 1, "file_name": "b.png", "height": 10, "width": 10},
               {"id": 2, "file_name": "a.png", "height": 10, "width": 10}],
    "annotations": [{"id": 1, "image_id": 1, "category_id": 1,
                     "segmentation": [[1, 1, 5, 1, 5, 4, 1, 4]]}],
    "categories": [{"id": 1, "name": "vole"}]})");
  CHECK(filled.annotations[0].area == 12.0);
  CHECK(filled.annotations[0].bbox == BoundingBox{1, 1, 4, 3});
  const auto frames = filled.frames();
  CHECK(frames[0].second->file_name == "a.png");
  CHECK(frames[1].first == 1);
}

TEST_CASE("segmentation JSON forms") {
  const auto poly = parse_segmentation("[[0,0,4,0,4,4,0,4]]");
  CHECK(segmentation_area(poly) == 16.0);
  const auto rle = parse_segmentation(R"({"size": [2, 2], "counts": [0, 1, 3]})");
  CHECK(std::get<RleMask>(rle) == RleMask{2, 2, {0, 1, 3}});
  const auto packed = parse_segmentation(R"({"size": [2, 2], "counts": "013"})");
  CHECK(packed == rle);
}

TEST_CASE("split dataset") {
  const CocoDataset ds = numbered_images(10);
  const SplitResult s = split_dataset(ds, 0.8, 42);
  CHECK(s.train.images.size() == 8);
  CHECK(s.val.images.size() == 2);
  const SplitResult again = split_dataset(ds, 0.8, 42);
  CHECK(again.train == s.train);
  CHECK(again.val == s.val);

  std::set<std::string> seen;
  for (const auto* part : {&s.train, &s.val}) {
    CHECK(part->categories == ds.categories);
    CHECK_NOTHROW(part->validate());
    for (const auto& im : part->images) CHECK(seen.insert(im.file_name).second);
    for (std::size_t i = 0; i < part->images.size(); ++i) {
      CHECK(part->images[i].id == static_cast<std::int64_t>(i) + 1);
    }
  }
  CHECK(seen.size() == 10);
  CHECK(s.train.annotations.size() + s.val.annotations.size() == 10);

  error_of([&] { split_dataset(ds, 1.0, 0); }, ErrorKind::kInvalidArgument);
  error_of([&] { split_dataset(ds, 0.0, 0); }, ErrorKind::kInvalidArgument);
  error_of([] { split_dataset(numbered_images(1), 0.5, 0); }, ErrorKind::kTooSmall);
}

TEST_CASE("prediction stream") {
  const std::string three =
      R"({"frame": 0, "label": "vole_1", "score": 0.9, "bbox": [0,0,2,2], "segmentation": [[0,0,2,0,2,2,0,2]]})"
      "\n\n"
      R"({"frame": 1, "label": "vole_2", "score": 0.5, "bbox": [0,0,2,2], "segmentation": {"size": [2,2], "counts": "013"}})"
      "\n"
      R"({"frame": 1, "label": "vole_1", "score": 1, "bbox": [0,0,2,2], "segmentation": {"size": [2,2], "counts": [0,1,3]}})"
      "\n";
  const auto recs = parse_predictions(std::string_view(three));
  REQUIRE(recs.size() == 3);
  CHECK(recs[1].label == "vole_2");
  CHECK(recs[2].score == 1.0);

  std::ostringstream out;
  write_predictions(out, recs);
  CHECK(parse_predictions(std::string_view(out.str())) == recs);

  CHECK(parse_predictions(std::string_view("")).empty());
  const std::string bad =
      R"({"frame": 0, "label": "a", "score": 0.2, "bbox": [0,0,1,1], "segmentation": [[0,0,1,0,1,1]]})"
      "\n"
      R"({"frame": 0, "label": "a", "score": 1.5, "bbox": [0,0,1,1], "segmentation": [[0,0,1,0,1,1]]})";
  const std::string msg = error_of([&] { parse_predictions(std::string_view(bad)); }, ErrorKind::kRange);
  CHECK(msg == "range-error: line 2: score 1.5 outside [0,1]");
  const std::string codec = error_of(
      [] {
        parse_predictions(std::string_view(
            R"({"frame": 0, "label": "a", "score": 0.2, "bbox": [0,0,1,1], "segmentation": {"size": [2,2], "counts": "01~"}})"));
      },
      ErrorKind::kCorruptString);
  CHECK(codec.rfind("corrupt-string: line 1: ", 0) == 0);
}

TEST_CASE("sample frames") {
  CHECK(sample_frames(100, 5, SamplingStrategy::uniform()) ==
        std::vector<std::int64_t>{0, 20, 40, 60, 80});
  CHECK(sample_frames(10, 10, SamplingStrategy::random(7)) ==
        std::vector<std::int64_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  const auto a = sample_frames(1000, 200, SamplingStrategy::random(3));
  CHECK(a == sample_frames(1000, 200, SamplingStrategy::random(3)));
  CHECK(a != sample_frames(1000, 200, SamplingStrategy::random(4)));
  CHECK(std::set<std::int64_t>(a.begin(), a.end()).size() == 200);
  CHECK(std::is_sorted(a.begin(), a.end()));
  error_of([] { sample_frames(5, 6, SamplingStrategy::uniform()); }, ErrorKind::kInvalidArgument);
}

TEST_CASE("coco_to_tracks") {
  CocoDataset ds = numbered_images(4);
  ds.annotations.erase(ds.annotations.begin() + 2);  // vole_1 missing on frame 2
  const auto tracks = coco_to_tracks(ds);
  REQUIRE(tracks.size() == 2);
  CHECK(tracks[0].label == "vole_1");
  REQUIRE(tracks[0].states.size() == 4);
  CHECK(tracks[0].present_count() == 1);
  CHECK(tracks[1].present_count() == 2);
  CHECK(tracks[1].states[1].centroid == Point2D{3.0, 3.0});
  CHECK(std::holds_alternative<RleMask>(*tracks[1].states[1].segmentation));

  ds.annotations.push_back({50, 2, 2, MultiPolygon{rect(8, 8, 2, 2)}, {8, 8, 2, 2}, 4.0, false});
  error_of([&] { coco_to_tracks(ds); }, ErrorKind::kConflict);
}

}  // TEST_SUITE

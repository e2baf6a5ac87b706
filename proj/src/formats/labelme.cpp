#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include "formats/json_codec.hpp"
#include "segtrack/error.hpp"
#include "segtrack/formats.hpp"

namespace segtrack {

namespace {

using nlohmann::json;

constexpr int kKeypointSides = 16;

int required_dimension(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) {
    throw Error(ErrorKind::kSchemaError, std::string("missing ") + key);
  }
  if (!it->is_number_integer() || it->get<std::int64_t>() <= 0) {
    throw Error(ErrorKind::kSchemaError, std::string(key) + " must be a positive integer");
  }
  return it->get<int>();
}

Shape parse_shape(const json& js, std::size_t index) {
  const std::string where = "shapes[" + std::to_string(index) + "]";
  if (!js.is_object()) throw Error(ErrorKind::kSchemaError, where + " is not an object");

  Shape shape;
  const auto label = js.find("label");
  if (label == js.end() || !label->is_string() || label->get<std::string>().empty()) {
    throw Error(ErrorKind::kSchemaError, where + ": label must be a nonempty string");
  }
  shape.label = label->get<std::string>();

  std::string type = "polygon";
  if (const auto t = js.find("shape_type"); t != js.end() && !t->is_null()) {
    if (!t->is_string()) throw Error(ErrorKind::kSchemaError, where + ": shape_type");
    type = t->get<std::string>();
  }
  if (type == "polygon") {
    shape.shape_type = ShapeType::kPolygon;
  } else if (type == "point") {
    shape.shape_type = ShapeType::kPoint;
  } else {
    throw Error(ErrorKind::kSchemaError,
                where + ": unsupported shape_type '" + type + "'");
  }

  const auto points = js.find("points");
  if (points == js.end() || !points->is_array()) {
    throw Error(ErrorKind::kSchemaError, where + ": points must be an array");
  }
  for (const json& pt : *points) {
    if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
      throw Error(ErrorKind::kSchemaError, where + ": each point must be [x, y]");
    }
    shape.points.push_back({pt[0].get<double>(), pt[1].get<double>()});
  }
  if (shape.shape_type == ShapeType::kPolygon && shape.points.size() < 3) {
    throw Error(ErrorKind::kSchemaError, where + ": polygon needs at least 3 points");
  }
  if (shape.shape_type == ShapeType::kPoint && shape.points.size() != 1) {
    throw Error(ErrorKind::kSchemaError, where + ": point shape needs exactly 1 point");
  }

  if (const auto g = js.find("group_id"); g != js.end() && !g->is_null()) {
    if (!g->is_number_integer()) {
      throw Error(ErrorKind::kSchemaError, where + ": group_id must be an integer or null");
    }
    shape.group_id = g->get<std::int64_t>();
  }
  return shape;
}

}  // namespace

LabelmeDocument parse_labelme(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::kSchemaError, "document is not an object");

  LabelmeDocument out;
  out.image_height = required_dimension(doc, "imageHeight");
  out.image_width = required_dimension(doc, "imageWidth");
  if (const auto p = doc.find("imagePath"); p != doc.end() && p->is_string()) {
    out.image_path = p->get<std::string>();
  }
  if (const auto shapes = doc.find("shapes"); shapes != doc.end() && !shapes->is_null()) {
    if (!shapes->is_array()) throw Error(ErrorKind::kSchemaError, "shapes must be an array");
    for (std::size_t i = 0; i < shapes->size(); ++i) {
      out.shapes.push_back(parse_shape((*shapes)[i], i));
    }
  }
  return out;
}

Polygon keypoint_to_region(Point2D center, double radius) {
  if (!(radius > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "keypoint radius must be > 0");
  }
  Polygon ring;
  ring.vertices.reserve(kKeypointSides);
  for (int k = 0; k < kKeypointSides; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / kKeypointSides;
    ring.vertices.push_back(
        {center.x + radius * std::cos(angle), center.y + radius * std::sin(angle)});
  }
  return ring;
}

CocoDataset labelme_to_coco(const std::vector<LabelmeDocument>& docs,
                            double keypoint_radius) {
  if (docs.empty()) throw Error(ErrorKind::kInvalidArgument, "no labelme documents");
  if (!(keypoint_radius > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "keypoint radius must be > 0");
  }

  CocoDataset ds;
  std::set<std::string> names;
  for (const LabelmeDocument& doc : docs) {
    for (const Shape& s : doc.shapes) names.insert(s.label);
  }
  std::map<std::string, std::int64_t> category_of;
  for (const std::string& name : names) {
    const auto id = static_cast<std::int64_t>(ds.categories.size()) + 1;
    ds.categories.push_back({id, name});
    category_of[name] = id;
  }

  std::set<std::string> file_names;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const LabelmeDocument& doc = docs[i];
    if (!file_names.insert(doc.image_path).second) {
      throw Error(ErrorKind::kConflict, "duplicate file_name '" + doc.image_path + "'");
    }
    const auto image_id = static_cast<std::int64_t>(i) + 1;
    ds.images.push_back({image_id, doc.image_path, doc.image_height, doc.image_width,
                         static_cast<std::int64_t>(i)});

    // Shapes sharing (label, group_id) become one multi-ring annotation,
    // placed where the first of them appears.
    std::vector<std::pair<std::string, MultiPolygon>> grouped;
    std::map<std::pair<std::string, std::int64_t>, std::size_t> group_slot;
    for (const Shape& s : doc.shapes) {
      Polygon ring = s.shape_type == ShapeType::kPoint
                         ? keypoint_to_region(s.points.front(), keypoint_radius)
                         : Polygon{s.points};
      if (s.group_id) {
        const auto key = std::make_pair(s.label, *s.group_id);
        if (auto it = group_slot.find(key); it != group_slot.end()) {
          grouped[it->second].second.push_back(std::move(ring));
          continue;
        }
        group_slot[key] = grouped.size();
      }
      grouped.push_back({s.label, MultiPolygon{std::move(ring)}});
    }

    for (auto& [label, rings] : grouped) {
      CocoAnnotation ann;
      ann.id = static_cast<std::int64_t>(ds.annotations.size()) + 1;
      ann.image_id = image_id;
      ann.category_id = category_of.at(label);
      ann.segmentation = std::move(rings);
      ann.area = segmentation_area(ann.segmentation);
      ann.bbox = segmentation_bbox(ann.segmentation);
      ann.iscrowd = false;
      ds.annotations.push_back(std::move(ann));
    }
  }
  return ds;
}

}  // namespace segtrack

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "formats/json_codec.hpp"
#include "segtrack/error.hpp"
#include "segtrack/formats.hpp"

namespace segtrack {

namespace detail {

using nlohmann::json;

Segmentation segmentation_from_json(const json& j, const std::string& where) {
  if (j.is_array()) {
    MultiPolygon rings;
    for (const json& flat : j) {
      if (!flat.is_array() || flat.size() < 6 || flat.size() % 2 != 0) {
        throw Error(ErrorKind::kSchemaError,
                    where + ": polygon ring must be a flat [x1,y1,...] list of >= 3 points");
      }
      Polygon ring;
      for (std::size_t i = 0; i < flat.size(); i += 2) {
        if (!flat[i].is_number() || !flat[i + 1].is_number()) {
          throw Error(ErrorKind::kSchemaError, where + ": non-numeric polygon coordinate");
        }
        ring.vertices.push_back({flat[i].get<double>(), flat[i + 1].get<double>()});
      }
      rings.push_back(std::move(ring));
    }
    return rings;
  }
  if (j.is_object()) {
    const auto size = j.find("size");
    const auto counts = j.find("counts");
    if (size == j.end() || !size->is_array() || size->size() != 2 ||
        !(*size)[0].is_number_integer() || !(*size)[1].is_number_integer()) {
      throw Error(ErrorKind::kSchemaError, where + ": RLE needs size [h, w]");
    }
    const int h = (*size)[0].get<int>();
    const int w = (*size)[1].get<int>();
    if (h < 0 || w < 0) throw Error(ErrorKind::kSchemaError, where + ": negative RLE size");
    if (counts == j.end()) throw Error(ErrorKind::kSchemaError, where + ": RLE needs counts");
    if (counts->is_string()) return rle_decode_string(counts->get<std::string>(), h, w);
    if (counts->is_array()) {
      RleMask rle{h, w, {}};
      for (const json& c : *counts) {
        if (!c.is_number_integer() || c.get<std::int64_t>() < 0) {
          throw Error(ErrorKind::kSchemaError, where + ": RLE counts must be non-negative integers");
        }
        rle.counts.push_back(c.get<std::uint32_t>());
      }
      validate_rle(rle);
      return rle;
    }
    throw Error(ErrorKind::kSchemaError, where + ": RLE counts must be a list or string");
  }
  throw Error(ErrorKind::kSchemaError, where + ": unrecognized segmentation form");
}

ordered_json segmentation_to_json(const Segmentation& seg) {
  if (const auto* rings = std::get_if<MultiPolygon>(&seg)) {
    ordered_json out = ordered_json::array();
    for (const Polygon& ring : *rings) {
      ordered_json flat = ordered_json::array();
      for (const Point2D& p : ring.vertices) {
        flat.push_back(p.x);
        flat.push_back(p.y);
      }
      out.push_back(std::move(flat));
    }
    return out;
  }
  const auto& rle = std::get<RleMask>(seg);
  ordered_json out = ordered_json::object();
  out["size"] = {rle.height, rle.width};
  out["counts"] = rle_encode_string(rle);
  return out;
}

BoundingBox bbox_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) {
    throw Error(ErrorKind::kSchemaError, where + ": bbox must be [x, y, w, h]");
  }
  for (const json& v : j) {
    if (!v.is_number()) throw Error(ErrorKind::kSchemaError, where + ": bbox must be numeric");
  }
  BoundingBox box{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                  j[3].get<double>()};
  if (box.w < 0 || box.h < 0) {
    throw Error(ErrorKind::kSchemaError, where + ": bbox extent must be >= 0");
  }
  return box;
}

ordered_json bbox_to_json(const BoundingBox& box) {
  return ordered_json::array({box.x, box.y, box.w, box.h});
}

}  // namespace detail

namespace {

using nlohmann::json;
using detail::ordered_json;

const json& required(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorKind::kSchemaError, where + ": missing '" + key + "'");
  }
  return *it;
}

std::int64_t required_int(const json& obj, const char* key, const std::string& where) {
  const json& v = required(obj, key, where);
  if (!v.is_number_integer()) {
    throw Error(ErrorKind::kSchemaError, where + ": '" + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

std::string join_ids(const std::vector<std::int64_t>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ids[i]);
  }
  return out;
}

}  // namespace

const CocoImage* CocoDataset::find_image(std::int64_t id) const {
  for (const CocoImage& im : images) {
    if (im.id == id) return &im;
  }
  return nullptr;
}

const CocoCategory* CocoDataset::find_category(std::int64_t id) const {
  for (const CocoCategory& c : categories) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

void CocoDataset::validate() const {
  std::vector<std::string> problems;
  auto check_unique = [&](const char* what, auto&& ids) {
    std::set<std::int64_t> seen;
    std::vector<std::int64_t> dups;
    for (std::int64_t id : ids) {
      if (!seen.insert(id).second) dups.push_back(id);
    }
    if (!dups.empty()) problems.push_back(std::string("duplicate ") + what + " ids [" + join_ids(dups) + "]");
    return seen;
  };
  std::vector<std::int64_t> ids;
  for (const auto& im : images) ids.push_back(im.id);
  const auto image_ids = check_unique("image", ids);
  ids.clear();
  for (const auto& c : categories) ids.push_back(c.id);
  const auto category_ids = check_unique("category", ids);
  ids.clear();
  for (const auto& a : annotations) ids.push_back(a.id);
  check_unique("annotation", ids);

  for (const auto& a : annotations) {
    if (!image_ids.contains(a.image_id)) {
      problems.push_back("annotation " + std::to_string(a.id) + " references missing image " +
                         std::to_string(a.image_id));
    }
    if (!category_ids.contains(a.category_id)) {
      problems.push_back("annotation " + std::to_string(a.id) + " references missing category " +
                         std::to_string(a.category_id));
    }
  }
  if (!problems.empty()) {
    std::string msg;
    for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
    throw Error(ErrorKind::kIntegrity, msg);
  }
}

std::vector<std::pair<std::int64_t, const CocoImage*>> CocoDataset::frames() const {
  std::vector<std::pair<std::int64_t, const CocoImage*>> out;
  const bool indexed = !images.empty() &&
                       std::all_of(images.begin(), images.end(),
                                   [](const CocoImage& im) { return im.frame_index.has_value(); });
  if (indexed) {
    for (const CocoImage& im : images) out.emplace_back(*im.frame_index, &im);
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }
  std::vector<const CocoImage*> sorted;
  for (const CocoImage& im : images) sorted.push_back(&im);
  std::stable_sort(sorted.begin(), sorted.end(), [](const CocoImage* a, const CocoImage* b) {
    return a->file_name < b->file_name;
  });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out.emplace_back(static_cast<std::int64_t>(i), sorted[i]);
  }
  return out;
}

std::string write_coco(const CocoDataset& ds) {
  ordered_json root = ordered_json::object();
  ordered_json images = ordered_json::array();
  for (const CocoImage& im : ds.images) {
    ordered_json j = ordered_json::object();
    j["id"] = im.id;
    j["file_name"] = im.file_name;
    j["height"] = im.height;
    j["width"] = im.width;
    if (im.frame_index) j["frame_index"] = *im.frame_index;
    images.push_back(std::move(j));
  }
  ordered_json annotations = ordered_json::array();
  for (const CocoAnnotation& a : ds.annotations) {
    ordered_json j = ordered_json::object();
    j["id"] = a.id;
    j["image_id"] = a.image_id;
    j["category_id"] = a.category_id;
    j["segmentation"] = detail::segmentation_to_json(a.segmentation);
    j["area"] = a.area;
    j["bbox"] = detail::bbox_to_json(a.bbox);
    j["iscrowd"] = a.iscrowd ? 1 : 0;
    annotations.push_back(std::move(j));
  }
  ordered_json categories = ordered_json::array();
  for (const CocoCategory& c : ds.categories) {
    ordered_json j = ordered_json::object();
    j["id"] = c.id;
    j["name"] = c.name;
    categories.push_back(std::move(j));
  }
  root["images"] = std::move(images);
  root["annotations"] = std::move(annotations);
  root["categories"] = std::move(categories);
  return root.dump(1) + "\n";
}

CocoDataset read_coco(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
  if (!root.is_object()) throw Error(ErrorKind::kSchemaError, "COCO root must be an object");

  CocoDataset ds;
  const json& images = required(root, "images", "dataset");
  if (!images.is_array()) throw Error(ErrorKind::kSchemaError, "images must be an array");
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = "images[" + std::to_string(i) + "]";
    const json& j = images[i];
    CocoImage im;
    im.id = required_int(j, "id", where);
    const json& name = required(j, "file_name", where);
    if (!name.is_string()) throw Error(ErrorKind::kSchemaError, where + ": file_name");
    im.file_name = name.get<std::string>();
    im.height = static_cast<int>(required_int(j, "height", where));
    im.width = static_cast<int>(required_int(j, "width", where));
    if (const auto f = j.find("frame_index"); f != j.end() && !f->is_null()) {
      if (!f->is_number_integer()) throw Error(ErrorKind::kSchemaError, where + ": frame_index");
      im.frame_index = f->get<std::int64_t>();
    }
    ds.images.push_back(std::move(im));
  }

  if (const auto anns = root.find("annotations"); anns != root.end() && !anns->is_null()) {
    if (!anns->is_array()) throw Error(ErrorKind::kSchemaError, "annotations must be an array");
    for (std::size_t i = 0; i < anns->size(); ++i) {
      const std::string where = "annotations[" + std::to_string(i) + "]";
      const json& j = (*anns)[i];
      CocoAnnotation a;
      a.id = required_int(j, "id", where);
      a.image_id = required_int(j, "image_id", where);
      a.category_id = required_int(j, "category_id", where);
      a.segmentation = detail::segmentation_from_json(required(j, "segmentation", where), where);
      if (const auto area = j.find("area"); area != j.end() && area->is_number()) {
        a.area = area->get<double>();
      } else {
        a.area = segmentation_area(a.segmentation);
      }
      if (const auto bbox = j.find("bbox"); bbox != j.end() && !bbox->is_null()) {
        a.bbox = detail::bbox_from_json(*bbox, where);
      } else {
        a.bbox = segmentation_bbox(a.segmentation);
      }
      if (const auto crowd = j.find("iscrowd"); crowd != j.end() && !crowd->is_null()) {
        if (!crowd->is_number_integer()) throw Error(ErrorKind::kSchemaError, where + ": iscrowd");
        a.iscrowd = crowd->get<int>() != 0;
      }
      ds.annotations.push_back(std::move(a));
    }
  }

  const json& cats = required(root, "categories", "dataset");
  if (!cats.is_array()) throw Error(ErrorKind::kSchemaError, "categories must be an array");
  for (std::size_t i = 0; i < cats.size(); ++i) {
    const std::string where = "categories[" + std::to_string(i) + "]";
    CocoCategory c;
    c.id = required_int(cats[i], "id", where);
    const json& name = required(cats[i], "name", where);
    if (!name.is_string()) throw Error(ErrorKind::kSchemaError, where + ": name");
    c.name = name.get<std::string>();
    ds.categories.push_back(std::move(c));
  }

  ds.validate();
  return ds;
}

std::vector<Track> coco_to_tracks(const CocoDataset& ds) {
  ds.validate();
  std::vector<const CocoCategory*> categories;
  for (const CocoCategory& c : ds.categories) categories.push_back(&c);
  std::stable_sort(categories.begin(), categories.end(),
                   [](const CocoCategory* a, const CocoCategory* b) { return a->id < b->id; });
  std::map<std::int64_t, std::size_t> slot;
  std::vector<Track> tracks(categories.size());
  for (std::size_t k = 0; k < categories.size(); ++k) {
    slot[categories[k]->id] = k;
    tracks[k].label = categories[k]->name;
  }
  std::map<std::int64_t, std::vector<const CocoAnnotation*>> by_image;
  for (const CocoAnnotation& a : ds.annotations) {
    if (!a.iscrowd) by_image[a.image_id].push_back(&a);
  }
  for (const auto& [frame, image] : ds.frames()) {
    for (Track& t : tracks) {
      TrackState absent;
      absent.frame = frame;
      t.states.push_back(std::move(absent));
    }
    for (const CocoAnnotation* a : by_image[image->id]) {
      TrackState& s = tracks[slot.at(a->category_id)].states.back();
      if (s.present) {
        throw Error(ErrorKind::kConflict, "category " + std::to_string(a->category_id) +
                                              " annotated twice on image " +
                                              std::to_string(image->id));
      }
      RleMask mask = to_rle(a->segmentation, image->height, image->width);
      s.present = true;
      s.score = 1.0;
      s.centroid = rle_area(mask) > 0
                       ? centroid(mask)
                       : Point2D{a->bbox.x + a->bbox.w / 2.0, a->bbox.y + a->bbox.h / 2.0};
      s.segmentation = std::move(mask);
    }
  }
  return tracks;
}

Segmentation parse_segmentation(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
  return detail::segmentation_from_json(j, "segmentation");
}

}  // namespace segtrack

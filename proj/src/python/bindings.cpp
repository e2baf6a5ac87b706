// Python module `segtrack._segtrack`. Masks cross the boundary as numpy
// arrays; datasets and predictions as their on-disk JSON text, so files
// written by either side are interchangeable.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <thread>

#include "segtrack/analytics.hpp"
#include "segtrack/error.hpp"
#include "segtrack/formats.hpp"
#include "segtrack/geometry.hpp"
#include "segtrack/metrics.hpp"
#include "segtrack/synth.hpp"
#include "segtrack/tracking.hpp"

namespace py = pybind11;
using namespace segtrack;

namespace {

using MaskArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using Points = std::vector<std::pair<double, double>>;

Polygon to_polygon(const Points& pts) {
  Polygon p;
  for (const auto& [x, y] : pts) p.vertices.push_back({x, y});
  return p;
}

Points to_points(const Polygon& p) {
  Points out;
  for (const Point2D& v : p.vertices) out.emplace_back(v.x, v.y);
  return out;
}

BinaryMask to_mask(const MaskArray& a) {
  if (a.ndim() != 2) throw Error(ErrorKind::kInvalidArgument, "mask must be a 2-D array");
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  BinaryMask m(h, w);
  const auto v = a.unchecked<2>();
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (v(r, c) != 0) m.set(r, c);
    }
  }
  return m;
}

py::array_t<std::uint8_t> to_array(const BinaryMask& m) {
  py::array_t<std::uint8_t> out({m.height(), m.width()});
  std::copy(m.bits().begin(), m.bits().end(), out.mutable_data());
  return out;
}

py::dict rle_dict(const RleMask& r) {
  py::dict d;
  d["size"] = py::make_tuple(r.height, r.width);
  d["counts"] = rle_encode_string(r);
  return d;
}

RleMask from_rle_dict(const py::dict& d) {
  const auto size = d["size"].cast<std::pair<int, int>>();
  return rle_decode_string(d["counts"].cast<std::string>(), size.first, size.second);
}

py::object optional_float(const std::optional<double>& v) {
  return v ? py::object(py::float_(*v)) : py::object(py::none());
}

MotDenominator parse_denominator(const std::string& s) {
  if (s == "gt_objects") return MotDenominator::kGtObjects;
  if (s == "frames") return MotDenominator::kFrames;
  throw Error(ErrorKind::kInvalidArgument, "denominator must be 'gt_objects' or 'frames'");
}

}  // namespace

PYBIND11_MODULE(_segtrack, m) {
  m.doc() = "Multi-animal segmentation tracking and evaluation";

  static py::exception<Error> error_type(m, "SegtrackError", PyExc_ValueError);
  // args = (message, kind)
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetObject(error_type.ptr(),
                      py::make_tuple(e.what(), std::string(to_string(e.kind()))).ptr());
    }
  });

  // geometry
  m.def("polygon_area", [](const Points& p) { return polygon_area(to_polygon(p)); });
  m.def("polygon_perimeter", [](const Points& p) { return polygon_perimeter(to_polygon(p)); });
  m.def("rasterize", [](const Points& p, int height, int width) {
    return to_array(rasterize(to_polygon(p), height, width));
  }, py::arg("polygon"), py::arg("height"), py::arg("width"));
  m.def("simplify_polygon", [](const Points& p, double epsilon) {
    return to_points(simplify_polygon(to_polygon(p), epsilon));
  }, py::arg("polygon"), py::arg("epsilon"));
  m.def("mask_to_polygons", [](const MaskArray& a) {
    std::vector<Points> out;
    for (const Polygon& p : mask_to_polygons(to_mask(a))) out.push_back(to_points(p));
    return out;
  });
  m.def("rle_encode", [](const MaskArray& a) { return rle_dict(mask_to_rle(to_mask(a))); },
        "Mask to a COCO compressed RLE dict {'size': (h, w), 'counts': str}.");
  m.def("rle_decode", [](const py::dict& d) { return to_array(rle_to_mask(from_rle_dict(d))); });
  m.def("rle_counts", [](const MaskArray& a) { return mask_to_rle(to_mask(a)).counts; },
        "Uncompressed column-major run lengths, leading zero run first.");
  m.def("rle_area", [](const py::dict& d) { return rle_area(from_rle_dict(d)); });
  m.def("mask_iou", [](const MaskArray& a, const MaskArray& b, bool crowd) {
    return rle_iou(mask_to_rle(to_mask(a)), mask_to_rle(to_mask(b)), crowd);
  }, py::arg("a"), py::arg("b"), py::arg("crowd") = false);

  // assignment and scalar metrics
  m.def("hungarian", [](py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() != 2) throw Error(ErrorKind::kInvalidArgument, "cost must be a 2-D array");
    CostMatrix cost(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    const auto v = a.unchecked<2>();
    for (py::ssize_t r = 0; r < a.shape(0); ++r) {
      for (py::ssize_t c = 0; c < a.shape(1); ++c) {
        cost(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = v(r, c);
      }
    }
    const Assignment result = hungarian(cost);
    return py::make_tuple(result.row_to_col, result.cost);
  }, "Returns (row_to_col, cost); unassigned rows map to None.");
  m.def("mota", &mota, py::arg("fn"), py::arg("ids"), py::arg("fp"), py::arg("n_gt"));
  m.def("event_rate", &event_rate, py::arg("count"), py::arg("n_frames"));

  // evaluation over serialized inputs
  m.def("evaluate_mot", [](const std::string& gt_coco, const std::string& predictions,
                           double iou_threshold, const std::string& denominator,
                           double score_threshold) {
    MotConfig cfg;
    cfg.iou_threshold = iou_threshold;
    cfg.denominator = parse_denominator(denominator);
    const auto gt = coco_to_tracks(read_coco(gt_coco));
    const auto preds = assemble_tracks(
        resolve_all_duplicates(filter_by_score(parse_predictions(std::string_view(predictions)),
                                               score_threshold)));
    const MotReport r = evaluate_mot(gt, preds, cfg);
    py::dict d;
    d["n_frames"] = r.n_frames;
    d["n_gt"] = r.n_gt;
    d["fn"] = r.false_negatives;
    d["fp"] = r.false_positives;
    d["ids"] = r.id_switches;
    d["mota"] = r.mota;
    d["motp"] = r.motp;
    return d;
  }, py::arg("gt_coco"), py::arg("predictions"), py::arg("iou_threshold") = 0.5,
     py::arg("denominator") = "gt_objects", py::arg("score_threshold") = kDefaultScoreThreshold);

  m.def("evaluate_coco_ap", [](const std::string& gt_coco, const std::string& predictions,
                               std::size_t max_dets, unsigned jobs) {
    ApConfig cfg;
    cfg.max_dets = max_dets;
    cfg.jobs = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
    const ApReport report =
        evaluate_coco_ap(read_coco(gt_coco), parse_predictions(std::string_view(predictions)), cfg);
    py::list rows;
    for (const ApRow& r : report.rows) {
      py::dict d;
      d["category"] = r.name;
      d["AP"] = optional_float(r.ap);
      d["AP50"] = optional_float(r.ap50);
      d["AP75"] = optional_float(r.ap75);
      d["APS"] = optional_float(r.aps);
      d["APM"] = optional_float(r.apm);
      d["APL"] = optional_float(r.apl);
      rows.append(d);
    }
    return rows;
  }, py::arg("gt_coco"), py::arg("predictions"), py::arg("max_dets") = 100, py::arg("jobs") = 1);

  // formats
  m.def("labelme_to_coco", [](const std::vector<std::string>& documents, double keypoint_radius) {
    std::vector<LabelmeDocument> docs;
    for (const std::string& d : documents) docs.push_back(parse_labelme(d));
    return write_coco(labelme_to_coco(docs, keypoint_radius));
  }, py::arg("documents"), py::arg("keypoint_radius") = kDefaultKeypointRadius,
     "labelme JSON texts to one COCO JSON text.");
  m.def("split_dataset", [](const std::string& coco, double ratio, std::uint64_t seed) {
    const SplitResult s = split_dataset(read_coco(coco), ratio, seed);
    return py::make_tuple(write_coco(s.train), write_coco(s.val));
  }, py::arg("coco"), py::arg("ratio") = kDefaultSplitRatio, py::arg("seed") = 0);
  m.def("sample_frames", [](std::int64_t n_total, std::int64_t k, const std::string& strategy,
                            std::uint64_t seed) {
    if (strategy != "random" && strategy != "uniform") {
      throw Error(ErrorKind::kInvalidArgument, "strategy must be 'random' or 'uniform'");
    }
    return sample_frames(n_total, k,
                         strategy == "uniform" ? SamplingStrategy::uniform()
                                               : SamplingStrategy::random(seed));
  }, py::arg("n_total"), py::arg("k"), py::arg("strategy") = "random", py::arg("seed") = 0);

  // tracking and analytics
  m.def("tracks_csv", [](const std::string& predictions, double score_threshold, std::int64_t max_gap) {
    auto tracks = assemble_tracks(resolve_all_duplicates(
        filter_by_score(parse_predictions(std::string_view(predictions)), score_threshold)));
    if (max_gap > 0) {
      for (Track& t : tracks) t = interpolate_gaps(std::move(t), max_gap);
    }
    std::ostringstream out;
    write_tracks_csv(out, tracks);
    return out.str();
  }, py::arg("predictions"), py::arg("score_threshold") = kDefaultScoreThreshold,
     py::arg("max_gap") = 0);
  m.def("segment_bouts", [](const std::vector<std::string>& labels, std::int64_t min_duration) {
    std::vector<std::tuple<std::string, std::int64_t, std::int64_t>> out;
    for (const Bout& b : segment_bouts(labels, min_duration)) {
      out.emplace_back(b.behavior, b.start_frame, b.end_frame);
    }
    return out;
  }, py::arg("labels"), py::arg("min_duration") = 1);

  // synthetic scenarios
  m.def("synthesize", [](int n_animals, std::int64_t n_frames, int width, int height,
                         double body_radius, double speed_max, double min_separation,
                         std::uint64_t seed, double p_fn, double p_fp, int n_ids,
                         double centroid_noise, std::uint64_t perturb_seed) {
    const Scenario sc = generate_scenario({n_animals, n_frames, width, height, body_radius,
                                           speed_max, min_separation, seed});
    const PerturbedDetections p = perturb(sc, {p_fn, p_fp, n_ids, centroid_noise, perturb_seed});
    std::ostringstream preds;
    write_predictions(preds, p.preds);
    py::dict d;
    d["gt_coco"] = write_coco(sc.gt_dataset);
    d["predictions"] = preds.str();
    d["log"] = injection_log_json(p.log);
    return d;
  }, py::arg("n_animals") = 2, py::arg("n_frames") = 100, py::arg("width") = 320,
     py::arg("height") = 240, py::arg("body_radius") = 8.0, py::arg("speed_max") = 3.0,
     py::arg("min_separation") = 0.0, py::arg("seed") = 0, py::arg("p_fn") = 0.0,
     py::arg("p_fp") = 0.0, py::arg("n_ids") = 0, py::arg("centroid_noise") = 0.0,
     py::arg("perturb_seed") = 1,
     "Returns {'gt_coco', 'predictions', 'log'} as JSON texts.");
}

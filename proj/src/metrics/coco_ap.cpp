#include <algorithm>
#include <array>
#include <atomic>
#include <map>
#include <numeric>
#include <string>
#include <thread>

#include "segtrack/error.hpp"
#include "segtrack/metrics.hpp"

namespace segtrack {

namespace {

constexpr int kNumThresholds = 10;  // IoU 0.50:0.05:0.95
constexpr int kNumRecallPoints = 101;

double iou_threshold(int k) { return (50.0 + 5.0 * k) / 100.0; }

enum AreaRange { kAll, kSmall, kMedium, kLarge, kNumRanges };

bool in_range(double area, int range) {
  switch (range) {
    case kSmall: return area < kSmallAreaMax;
    case kMedium: return area >= kSmallAreaMax && area <= kLargeAreaMin;
    case kLarge: return area > kLargeAreaMin;
    default: return true;
  }
}

struct GtInstance {
  RleMask mask;
  double area = 0.0;
  bool crowd = false;
};

struct DtInstance {
  RleMask mask;
  double area = 0.0;
  double score = 0.0;
  std::size_t order = 0;  // position in the caller's detection list
};

// Ground truth and detections of one category on one image.
struct Cell {
  std::vector<GtInstance> gts;
  std::vector<DtInstance> dts;  // score-sorted, capped at max_dets
  std::vector<double> iou;      // dts x gts
};

struct Scored {
  double score;
  std::size_t order;
  bool tp;
};

// Per-image COCO matching for one threshold and area range. Appends the
// non-ignored detections to `out`; returns the number of non-ignored gts.
std::size_t match_cell(const Cell& cell, int range, double threshold, std::vector<Scored>& out) {
  const std::size_t ng = cell.gts.size();
  std::vector<bool> gt_ignore(ng);
  std::vector<std::size_t> gt_order(ng);
  std::iota(gt_order.begin(), gt_order.end(), 0);
  std::size_t counted = 0;
  for (std::size_t g = 0; g < ng; ++g) {
    gt_ignore[g] = cell.gts[g].crowd || !in_range(cell.gts[g].area, range);
    if (!gt_ignore[g]) ++counted;
  }
  // Non-ignored ground truth is matched first.
  std::stable_sort(gt_order.begin(), gt_order.end(),
                   [&](std::size_t a, std::size_t b) { return !gt_ignore[a] && gt_ignore[b]; });

  std::vector<bool> gt_taken(ng, false);
  for (std::size_t d = 0; d < cell.dts.size(); ++d) {
    double best = std::min(threshold, 1.0 - 1e-10);
    std::optional<std::size_t> match;
    for (std::size_t g : gt_order) {
      if (gt_taken[g] && !cell.gts[g].crowd) continue;
      if (match && !gt_ignore[*match] && gt_ignore[g]) break;
      const double v = cell.iou[d * ng + g];
      if (v < best) continue;
      best = v;
      match = g;
    }
    bool ignored;
    if (match) {
      gt_taken[*match] = true;
      ignored = gt_ignore[*match];
    } else {
      ignored = !in_range(cell.dts[d].area, range);
    }
    if (!ignored) out.push_back({cell.dts[d].score, cell.dts[d].order, match.has_value()});
  }
  return counted;
}

// 101-point interpolated precision. Recall comparisons are done on integers
// (tp * 100 >= r * npig) so recall points are hit exactly.
double average_precision(std::vector<Scored>& dets, std::size_t npig) {
  std::stable_sort(dets.begin(), dets.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.order < b.order;
  });
  const std::size_t n = dets.size();
  std::vector<std::uint64_t> tp(n);
  std::vector<double> precision(n);
  std::uint64_t tps = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (dets[i].tp) ++tps;
    tp[i] = tps;
    precision[i] = static_cast<double>(tps) / static_cast<double>(i + 1);
  }
  for (std::size_t i = n; i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);

  double sum = 0.0;
  std::size_t idx = 0;
  for (int r = 0; r < kNumRecallPoints; ++r) {
    while (idx < n && tp[idx] * 100 < static_cast<std::uint64_t>(r) * npig) ++idx;
    if (idx == n) break;
    sum += precision[idx];
  }
  return sum / kNumRecallPoints;
}

ApRow evaluate_category(const std::string& name, const std::vector<Cell>& cells) {
  ApRow row;
  row.name = name;
  std::array<std::optional<double>, kNumRanges> mean_ap;
  std::array<double, kNumThresholds> per_threshold{};
  std::vector<Scored> scored;
  for (int range = 0; range < kNumRanges; ++range) {
    std::size_t npig = 0;
    for (int k = 0; k < kNumThresholds; ++k) {
      scored.clear();
      npig = 0;
      for (const Cell& cell : cells) npig += match_cell(cell, range, iou_threshold(k), scored);
      if (npig == 0) break;
      per_threshold[static_cast<std::size_t>(k)] = average_precision(scored, npig);
    }
    if (npig == 0) continue;
    mean_ap[static_cast<std::size_t>(range)] =
        std::accumulate(per_threshold.begin(), per_threshold.end(), 0.0) / kNumThresholds;
    if (range == kAll) {
      row.ap50 = per_threshold[0];
      row.ap75 = per_threshold[5];
    }
  }
  row.ap = mean_ap[kAll];
  row.aps = mean_ap[kSmall];
  row.apm = mean_ap[kMedium];
  row.apl = mean_ap[kLarge];
  return row;
}

}  // namespace

ApReport evaluate_coco_ap(const CocoDataset& gt, const std::vector<DetectionRecord>& dets,
                          const ApConfig& cfg) {
  gt.validate();
  if (cfg.max_dets == 0) throw Error(ErrorKind::kInvalidArgument, "max_dets must be > 0");

  std::map<std::int64_t, const CocoImage*> image_of_frame;
  for (const auto& [frame, image] : gt.frames()) image_of_frame[frame] = image;
  std::map<std::int64_t, std::size_t> image_slot;
  for (std::size_t i = 0; i < gt.images.size(); ++i) image_slot[gt.images[i].id] = i;
  std::map<std::string, std::size_t> category_slot;
  std::map<std::int64_t, std::size_t> category_slot_by_id;
  std::vector<const CocoCategory*> categories;
  for (const CocoCategory& c : gt.categories) categories.push_back(&c);
  std::stable_sort(categories.begin(), categories.end(),
                   [](const CocoCategory* a, const CocoCategory* b) { return a->id < b->id; });
  for (std::size_t k = 0; k < categories.size(); ++k) {
    category_slot.emplace(categories[k]->name, k);
    category_slot_by_id[categories[k]->id] = k;
  }

  // cells[category][image]
  std::vector<std::vector<Cell>> cells(categories.size(), std::vector<Cell>(gt.images.size()));
  for (const CocoAnnotation& a : gt.annotations) {
    const std::size_t img = image_slot.at(a.image_id);
    const CocoImage& im = gt.images[img];
    cells[category_slot_by_id.at(a.category_id)][img].gts.push_back(
        {to_rle(a.segmentation, im.height, im.width), a.area, a.iscrowd});
  }
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const DetectionRecord& d = dets[i];
    const auto cat = category_slot.find(d.label);
    if (cat == category_slot.end()) {
      throw Error(ErrorKind::kSchemaError, "detection " + std::to_string(i) + " has unknown category '" +
                                               d.label + "'");
    }
    const auto im = image_of_frame.find(d.frame);
    if (im == image_of_frame.end()) {
      throw Error(ErrorKind::kSchemaError, "detection " + std::to_string(i) + " refers to frame " +
                                               std::to_string(d.frame) + " with no image");
    }
    RleMask mask = to_rle(d.segmentation, im->second->height, im->second->width);
    const auto area = static_cast<double>(rle_area(mask));
    cells[cat->second][image_slot.at(im->second->id)].dts.push_back({std::move(mask), area, d.score, i});
  }

  for (auto& per_image : cells) {
    for (Cell& cell : per_image) {
      std::stable_sort(cell.dts.begin(), cell.dts.end(),
                       [](const DtInstance& a, const DtInstance& b) { return a.score > b.score; });
      if (cell.dts.size() > cfg.max_dets) cell.dts.resize(cfg.max_dets);
      const std::size_t ng = cell.gts.size();
      cell.iou.assign(cell.dts.size() * ng, 0.0);
      for (std::size_t d = 0; d < cell.dts.size(); ++d) {
        for (std::size_t g = 0; g < ng; ++g) {
          cell.iou[d * ng + g] = rle_iou(cell.dts[d].mask, cell.gts[g].mask, cell.gts[g].crowd);
        }
      }
    }
  }

  ApReport report;
  report.rows.resize(categories.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(categories.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < categories.size(); k = next++) {
      report.rows[k] = evaluate_category(categories[k]->name, cells[k]);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return report;
}

}  // namespace segtrack

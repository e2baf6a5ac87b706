#include <algorithm>
#include <set>
#include <string>

#include "segtrack/error.hpp"
#include "segtrack/metrics.hpp"

namespace segtrack {

namespace {

void check_config(const MotConfig& cfg) {
  if (!(cfg.iou_threshold > 0.0 && cfg.iou_threshold <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "IoU threshold must lie in (0, 1]");
  }
}

void check_unique(std::span<const MotObject> objs, const char* what) {
  std::set<std::string> seen;
  for (const MotObject& o : objs) {
    if (!seen.insert(o.id).second) {
      throw Error(ErrorKind::kInvalidArgument, std::string("duplicate ") + what + " '" + o.id + "'");
    }
  }
}

}  // namespace

MotFrameLog match_frame(std::span<const MotObject> gt, std::span<const MotObject> preds,
                        const std::map<std::string, std::string>& last_match,
                        const MotConfig& cfg, std::int64_t frame) {
  check_config(cfg);
  check_unique(gt, "gt id");
  check_unique(preds, "predicted label");

  const std::size_t n = gt.size();
  const std::size_t m = preds.size();
  std::vector<double> iou(n * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      iou[i * m + j] = segmentation_iou(gt[i].segmentation, preds[j].segmentation);
    }
  }

  std::vector<std::optional<std::size_t>> gt_to_pred(n);
  std::vector<bool> pred_taken(m, false);

  // Keep previous correspondences that still overlap enough.
  for (std::size_t i = 0; i < n; ++i) {
    const auto prev = last_match.find(gt[i].id);
    if (prev == last_match.end()) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (!pred_taken[j] && preds[j].id == prev->second &&
          iou[i * m + j] >= cfg.iou_threshold) {
        gt_to_pred[i] = j;
        pred_taken[j] = true;
        break;
      }
    }
  }

  std::vector<std::size_t> free_gt, free_pred;
  for (std::size_t i = 0; i < n; ++i) {
    if (!gt_to_pred[i]) free_gt.push_back(i);
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (!pred_taken[j]) free_pred.push_back(j);
  }
  if (!free_gt.empty() && !free_pred.empty()) {
    CostMatrix cost(free_gt.size(), free_pred.size());
    for (std::size_t a = 0; a < free_gt.size(); ++a) {
      for (std::size_t b = 0; b < free_pred.size(); ++b) {
        cost(a, b) = 1.0 - iou[free_gt[a] * m + free_pred[b]];
      }
    }
    const Assignment assignment = hungarian(cost);
    for (std::size_t a = 0; a < free_gt.size(); ++a) {
      if (!assignment.row_to_col[a]) continue;
      const std::size_t i = free_gt[a];
      const std::size_t j = free_pred[*assignment.row_to_col[a]];
      if (iou[i * m + j] >= cfg.iou_threshold) {
        gt_to_pred[i] = j;
        pred_taken[j] = true;
      }
    }
  }

  MotFrameLog log;
  log.frame = frame;
  for (std::size_t i = 0; i < n; ++i) {
    if (!gt_to_pred[i]) {
      log.misses.push_back(gt[i].id);
      continue;
    }
    const std::size_t j = *gt_to_pred[i];
    log.matches.push_back({gt[i].id, preds[j].id, iou[i * m + j]});
    const auto prev = last_match.find(gt[i].id);
    if (prev != last_match.end() && prev->second != preds[j].id) {
      log.switches.push_back(gt[i].id);
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (!pred_taken[j]) log.false_positives.push_back(preds[j].id);
  }
  return log;
}

double mota(std::uint64_t fn, std::uint64_t ids, std::uint64_t fp, std::uint64_t n_gt) {
  if (n_gt == 0) throw Error(ErrorKind::kUndefinedMetric, "MOTA needs N_GT > 0");
  return 1.0 - static_cast<double>(fn + ids + fp) / static_cast<double>(n_gt);
}

double event_rate(std::uint64_t count, std::uint64_t n_frames) {
  if (n_frames == 0) throw Error(ErrorKind::kUndefinedMetric, "event rate needs frames > 0");
  return 100.0 * static_cast<double>(count) / static_cast<double>(n_frames);
}

MotReport evaluate_mot(const std::vector<Track>& gt_tracks,
                       const std::vector<Track>& pred_tracks, const MotConfig& cfg) {
  check_config(cfg);
  std::set<std::int64_t> gt_frames;
  for (const Track& t : gt_tracks) {
    for (const TrackState& s : t.states) gt_frames.insert(s.frame);
  }
  if (gt_frames.empty()) {
    throw Error(ErrorKind::kUndefinedMetric, "ground truth has no frames");
  }
  std::set<std::int64_t> frames = gt_frames;
  for (const Track& t : pred_tracks) {
    for (const TrackState& s : t.states) frames.insert(s.frame);
  }

  // Per-track cursors; states are sorted by frame.
  std::vector<std::size_t> gt_pos(gt_tracks.size(), 0), pred_pos(pred_tracks.size(), 0);
  auto state_at = [](const Track& t, std::size_t& pos, std::int64_t f) -> const TrackState* {
    while (pos < t.states.size() && t.states[pos].frame < f) ++pos;
    if (pos < t.states.size() && t.states[pos].frame == f) return &t.states[pos];
    return nullptr;
  };

  MotReport report;
  report.n_frames = gt_frames.size();
  std::map<std::string, std::string> last_match;
  double iou_sum = 0.0;
  std::uint64_t n_matches = 0;
  std::uint64_t gt_objects = 0;
  std::vector<MotObject> gt_objs, pred_objs;
  for (std::int64_t f : frames) {
    gt_objs.clear();
    pred_objs.clear();
    for (std::size_t k = 0; k < gt_tracks.size(); ++k) {
      const TrackState* s = state_at(gt_tracks[k], gt_pos[k], f);
      if (s == nullptr || !s->present) continue;
      if (!s->segmentation) {
        throw Error(ErrorKind::kMissingData, "ground truth '" + gt_tracks[k].label +
                                                 "' has no segmentation at frame " +
                                                 std::to_string(f));
      }
      gt_objs.push_back({gt_tracks[k].label, *s->segmentation});
    }
    for (std::size_t k = 0; k < pred_tracks.size(); ++k) {
      const TrackState* s = state_at(pred_tracks[k], pred_pos[k], f);
      // Interpolated states carry no mask and are not detections.
      if (s == nullptr || !s->present || !s->segmentation) continue;
      pred_objs.push_back({pred_tracks[k].label, *s->segmentation});
    }
    MotFrameLog log = match_frame(gt_objs, pred_objs, last_match, cfg, f);
    gt_objects += gt_objs.size();
    report.false_negatives += log.misses.size();
    report.false_positives += log.false_positives.size();
    report.id_switches += log.switches.size();
    for (const MotMatch& mm : log.matches) {
      last_match[mm.gt_id] = mm.pred_label;
      iou_sum += mm.iou;
      ++n_matches;
    }
    report.per_frame_log.push_back(std::move(log));
  }

  report.n_gt = cfg.denominator == MotDenominator::kFrames ? report.n_frames : gt_objects;
  report.mota = mota(report.false_negatives, report.id_switches, report.false_positives,
                     report.n_gt);
  report.motp = n_matches ? iou_sum / static_cast<double>(n_matches) : 0.0;
  return report;
}

}  // namespace segtrack

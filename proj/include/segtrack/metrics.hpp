#pragma once

// CLEAR-MOT tracking accuracy and COCO-style mask average precision.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segtrack/formats.hpp"
#include "segtrack/geometry.hpp"
#include "segtrack/tracking.hpp"

namespace segtrack {

// ---------------------------------------------------------------------------
// Assignment

class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  CostMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  // row -> column, empty for rows left unassigned (when rows > cols).
  std::vector<std::optional<std::size_t>> row_to_col;
  double cost = 0.0;
};

// Minimum-cost assignment covering min(rows, cols) pairs. Throws
// kInvalidArgument on NaN entries.
Assignment hungarian(const CostMatrix& cost);

// ---------------------------------------------------------------------------
// CLEAR-MOT

// N_GT in the MOTA denominator: summed ground-truth objects per frame (the
// usual definition) or the number of evaluated frames.
enum class MotDenominator { kGtObjects, kFrames };

struct MotConfig {
  double iou_threshold = 0.5;
  MotDenominator denominator = MotDenominator::kGtObjects;
};

struct MotObject {
  std::string id;  // gt id or predicted label
  Segmentation segmentation;
};

struct MotMatch {
  std::string gt_id;
  std::string pred_label;
  double iou = 0.0;

  friend bool operator==(const MotMatch&, const MotMatch&) = default;
};

struct MotFrameLog {
  std::int64_t frame = 0;
  std::vector<MotMatch> matches;
  std::vector<std::string> misses;
  std::vector<std::string> false_positives;
  std::vector<std::string> switches;
};

struct MotReport {
  std::uint64_t false_negatives = 0;
  std::uint64_t id_switches = 0;
  std::uint64_t false_positives = 0;
  std::uint64_t n_gt = 0;
  std::uint64_t n_frames = 0;
  double mota = 0.0;
  double motp = 0.0;  // mean IoU over matches; 0 when nothing matched
  std::vector<MotFrameLog> per_frame_log;
};

// One frame of CLEAR-MOT matching. `last_match` maps each gt id to the
// label it was most recently matched with; pairs from it that still reach
// the IoU threshold are kept first, the rest is solved optimally on 1 - IoU.
MotFrameLog match_frame(std::span<const MotObject> gt, std::span<const MotObject> preds,
                        const std::map<std::string, std::string>& last_match,
                        const MotConfig& cfg, std::int64_t frame = 0);

// 1 - (fn + ids + fp) / n_gt. Throws kUndefinedMetric when n_gt == 0.
double mota(std::uint64_t fn, std::uint64_t ids, std::uint64_t fp, std::uint64_t n_gt);

// Percentage of frames: 100 * count / n_frames.
double event_rate(std::uint64_t count, std::uint64_t n_frames);

// Folds match_frame over every frame carrying a gt or predicted state;
// n_frames counts the frames with a gt state.
MotReport evaluate_mot(const std::vector<Track>& gt_tracks,
                       const std::vector<Track>& pred_tracks, const MotConfig& cfg = {});

// ---------------------------------------------------------------------------
// COCO average precision

struct ApConfig {
  std::size_t max_dets = 100;
  unsigned jobs = 1;
};

struct ApRow {
  std::string name;
  // Empty when the category (or area range) has no ground truth.
  std::optional<double> ap, ap50, ap75, aps, apm, apl;

  friend bool operator==(const ApRow&, const ApRow&) = default;
};

struct ApReport {
  std::vector<ApRow> rows;  // category id order
};

// Area range bounds in px^2: small < 32^2 <= medium <= 96^2 < large.
inline constexpr double kSmallAreaMax = 32.0 * 32.0;
inline constexpr double kLargeAreaMin = 96.0 * 96.0;

// Detections are mapped onto gt images through CocoDataset::frames()
// and onto categories by label. Throws kSchemaError for unknown labels or
// frames without an image.
ApReport evaluate_coco_ap(const CocoDataset& gt, const std::vector<DetectionRecord>& dets,
                          const ApConfig& cfg = {});

}  // namespace segtrack

#pragma once

// Identity-as-class track assembly. Every animal is its own detector class,
// so a per-frame detection's label already is its track identity and no
// frame-to-frame association step is needed.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "segtrack/geometry.hpp"

namespace segtrack {

// One per-frame model output.
struct DetectionRecord {
  std::int64_t frame = 0;
  std::string label;
  double score = 0.0;
  Segmentation segmentation;
  BoundingBox bbox;

  friend bool operator==(const DetectionRecord&, const DetectionRecord&) = default;
};

struct TrackState {
  std::int64_t frame = 0;
  bool present = false;
  Point2D centroid;
  double score = 0.0;
  std::optional<Segmentation> segmentation;  // absent unless a detection
  bool interpolated = false;

  friend bool operator==(const TrackState&, const TrackState&) = default;
};

// States are dense over the assembled frame span, strictly increasing.
struct Track {
  std::string label;
  std::vector<TrackState> states;

  const TrackState* at(std::int64_t frame) const;
  std::size_t present_count() const;

  friend bool operator==(const Track&, const Track&) = default;
};

struct SpotEvent {
  std::int64_t first_frame = 0;
  Point2D location;
  std::int64_t confirmed_frame = 0;

  friend bool operator==(const SpotEvent&, const SpotEvent&) = default;
};

struct Bout {
  std::string behavior;
  std::int64_t start_frame = 0;
  std::int64_t end_frame = 0;  // inclusive

  friend bool operator==(const Bout&, const Bout&) = default;
};

inline constexpr double kDefaultScoreThreshold = 0.5;

// Records with score >= threshold, in input order.
std::vector<DetectionRecord> filter_by_score(std::vector<DetectionRecord> dets,
                                             double threshold);

// Keeps one record per label within a single frame: highest score, then
// larger mask area, then first in input order. Output keeps input order.
std::vector<DetectionRecord> resolve_duplicates(std::vector<DetectionRecord> frame_dets);

// resolve_duplicates applied frame by frame; output sorted by frame.
std::vector<DetectionRecord> resolve_all_duplicates(std::vector<DetectionRecord> dets);

// One track per distinct label (sorted by label), dense over the global
// [min frame, max frame] span. Throws kPrecondition on a repeated
// (frame, label) pair.
std::vector<Track> assemble_tracks(const std::vector<DetectionRecord>& dets);

// Fills interior absent runs of length <= max_gap with linearly
// interpolated centroids.
Track interpolate_gaps(Track track, std::int64_t max_gap);

// Newly appearing, stationary spots (e.g. fresh urine marks) for one class.
std::vector<SpotEvent> detect_novel_spots(const std::vector<DetectionRecord>& dets,
                                          double min_dist, std::int64_t persistence);

// Bouts over per-frame behavior labels, labels[i] belonging to frame i.
std::vector<Bout> segment_bouts(const std::vector<std::string>& labels,
                                std::int64_t min_duration);

// CSV: frame,label,present,cx,cy,score,interpolated; one row per state,
// rows ordered by frame then label.
void write_tracks_csv(std::ostream& out, const std::vector<Track>& tracks);
std::vector<Track> read_tracks_csv(std::istream& in);

}  // namespace segtrack

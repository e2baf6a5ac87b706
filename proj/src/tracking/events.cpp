#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "segtrack/error.hpp"
#include "segtrack/tracking.hpp"

namespace segtrack {

namespace {

struct Candidate {
  Point2D location;
  std::int64_t first_frame = 0;
  std::int64_t last_hit_frame = 0;
  std::int64_t hits = 0;
  bool confirmed = false;
};

double dist(Point2D a, Point2D b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

std::vector<SpotEvent> detect_novel_spots(const std::vector<DetectionRecord>& dets,
                                          double min_dist, std::int64_t persistence) {
  if (!(min_dist > 0.0)) throw Error(ErrorKind::kInvalidArgument, "min_dist must be > 0");
  if (persistence < 1) throw Error(ErrorKind::kInvalidArgument, "persistence must be >= 1");

  std::vector<const DetectionRecord*> ordered;
  for (const DetectionRecord& d : dets) ordered.push_back(&d);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const DetectionRecord* a, const DetectionRecord* b) { return a->frame < b->frame; });

  std::vector<Candidate> spots;
  std::vector<SpotEvent> events;
  std::size_t i = 0;
  while (i < ordered.size()) {
    const std::int64_t frame = ordered[i]->frame;
    for (; i < ordered.size() && ordered[i]->frame == frame; ++i) {
      const DetectionRecord& d = *ordered[i];
      const Point2D c = is_empty(d.segmentation)
                            ? Point2D{d.bbox.x + d.bbox.w / 2.0, d.bbox.y + d.bbox.h / 2.0}
                            : segmentation_centroid(d.segmentation);
      const bool near_confirmed = std::any_of(spots.begin(), spots.end(), [&](const Candidate& s) {
        return s.confirmed && dist(s.location, c) < min_dist;
      });
      if (near_confirmed) continue;

      Candidate* nearest = nullptr;
      double best = std::numeric_limits<double>::infinity();
      for (Candidate& s : spots) {
        const double d2 = dist(s.location, c);
        if (!s.confirmed && d2 < min_dist && d2 < best) {
          best = d2;
          nearest = &s;
        }
      }
      if (nearest == nullptr) {
        spots.push_back({c, frame, frame, 1, false});
      } else if (nearest->last_hit_frame != frame) {
        nearest->last_hit_frame = frame;
        ++nearest->hits;
      }
    }
    for (Candidate& s : spots) {
      if (!s.confirmed && s.hits >= persistence) {
        s.confirmed = true;
        events.push_back({s.first_frame, s.location, frame});
      }
    }
  }
  return events;
}

std::vector<Bout> segment_bouts(const std::vector<std::string>& labels,
                                std::int64_t min_duration) {
  if (min_duration < 1) throw Error(ErrorKind::kInvalidArgument, "min_duration must be >= 1");
  std::vector<Bout> bouts;
  std::size_t start = 0;
  while (start < labels.size()) {
    std::size_t end = start;
    while (end + 1 < labels.size() && labels[end + 1] == labels[start]) ++end;
    const auto s = static_cast<std::int64_t>(start);
    const auto e = static_cast<std::int64_t>(end);
    const bool long_enough = e - s + 1 >= min_duration;
    const bool adjacent = !bouts.empty() && bouts.back().end_frame + 1 == s;
    if (long_enough) {
      if (adjacent && bouts.back().behavior == labels[start]) {
        bouts.back().end_frame = e;
      } else {
        bouts.push_back({labels[start], s, e});
      }
    } else if (adjacent) {
      bouts.back().end_frame = e;  // absorbed into the preceding bout
    }
    start = end + 1;
  }
  return bouts;
}

}  // namespace segtrack

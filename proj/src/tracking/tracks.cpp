#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "segtrack/error.hpp"
#include "segtrack/tracking.hpp"

namespace segtrack {

namespace {

Point2D detection_center(const DetectionRecord& det) {
  if (!is_empty(det.segmentation)) return segmentation_centroid(det.segmentation);
  return {det.bbox.x + det.bbox.w / 2.0, det.bbox.y + det.bbox.h / 2.0};
}

}  // namespace

const TrackState* Track::at(std::int64_t frame) const {
  const auto it = std::lower_bound(
      states.begin(), states.end(), frame,
      [](const TrackState& s, std::int64_t f) { return s.frame < f; });
  if (it == states.end() || it->frame != frame) return nullptr;
  return &*it;
}

std::size_t Track::present_count() const {
  return static_cast<std::size_t>(
      std::count_if(states.begin(), states.end(), [](const TrackState& s) { return s.present; }));
}

std::vector<DetectionRecord> filter_by_score(std::vector<DetectionRecord> dets,
                                             double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "score threshold must lie in [0, 1]");
  }
  std::erase_if(dets, [&](const DetectionRecord& d) { return d.score < threshold; });
  return dets;
}

std::vector<DetectionRecord> resolve_duplicates(std::vector<DetectionRecord> frame_dets) {
  std::map<std::string, std::size_t> best;
  std::vector<double> areas(frame_dets.size());
  for (std::size_t i = 0; i < frame_dets.size(); ++i) {
    areas[i] = segmentation_area(frame_dets[i].segmentation);
    const auto [it, inserted] = best.try_emplace(frame_dets[i].label, i);
    if (inserted) continue;
    const std::size_t cur = it->second;
    const bool better = frame_dets[i].score > frame_dets[cur].score ||
                        (frame_dets[i].score == frame_dets[cur].score && areas[i] > areas[cur]);
    if (better) it->second = i;
  }
  std::vector<bool> keep(frame_dets.size(), false);
  for (const auto& [label, idx] : best) keep[idx] = true;
  std::vector<DetectionRecord> out;
  out.reserve(best.size());
  for (std::size_t i = 0; i < frame_dets.size(); ++i) {
    if (keep[i]) out.push_back(std::move(frame_dets[i]));
  }
  return out;
}

std::vector<DetectionRecord> resolve_all_duplicates(std::vector<DetectionRecord> dets) {
  std::stable_sort(dets.begin(), dets.end(),
                   [](const DetectionRecord& a, const DetectionRecord& b) { return a.frame < b.frame; });
  std::vector<DetectionRecord> out;
  out.reserve(dets.size());
  auto begin = dets.begin();
  while (begin != dets.end()) {
    auto end = std::find_if(begin, dets.end(),
                            [&](const DetectionRecord& d) { return d.frame != begin->frame; });
    auto kept = resolve_duplicates({std::make_move_iterator(begin), std::make_move_iterator(end)});
    std::move(kept.begin(), kept.end(), std::back_inserter(out));
    begin = end;
  }
  return out;
}

std::vector<Track> assemble_tracks(const std::vector<DetectionRecord>& dets) {
  if (dets.empty()) return {};
  std::int64_t first = dets.front().frame;
  std::int64_t last = first;
  std::map<std::string, std::vector<const DetectionRecord*>> by_label;
  for (const DetectionRecord& d : dets) {
    first = std::min(first, d.frame);
    last = std::max(last, d.frame);
    by_label[d.label].push_back(&d);
  }

  std::vector<Track> tracks;
  tracks.reserve(by_label.size());
  const auto span = static_cast<std::size_t>(last - first + 1);
  for (const auto& [label, records] : by_label) {
    Track t;
    t.label = label;
    t.states.resize(span);
    for (std::size_t i = 0; i < span; ++i) t.states[i].frame = first + static_cast<std::int64_t>(i);
    for (const DetectionRecord* d : records) {
      TrackState& s = t.states[static_cast<std::size_t>(d->frame - first)];
      if (s.present) {
        throw Error(ErrorKind::kPrecondition, "label '" + label + "' detected twice in frame " +
                                                  std::to_string(d->frame));
      }
      s.present = true;
      s.centroid = detection_center(*d);
      s.score = d->score;
      s.segmentation = d->segmentation;
    }
    tracks.push_back(std::move(t));
  }
  return tracks;
}

Track interpolate_gaps(Track track, std::int64_t max_gap) {
  if (max_gap < 0) throw Error(ErrorKind::kInvalidArgument, "max_gap must be >= 0");
  if (max_gap == 0) return track;

  std::vector<TrackState> out;
  out.reserve(track.states.size());
  const TrackState* prev = nullptr;  // last present state emitted
  std::size_t pending_from = 0;      // first index after prev in `out`
  for (const TrackState& s : track.states) {
    if (!s.present) {
      out.push_back(s);
      continue;
    }
    if (prev != nullptr) {
      const std::int64_t gap = s.frame - prev->frame - 1;
      if (gap >= 1 && gap <= max_gap) {
        const TrackState a = *prev;
        out.resize(pending_from);
        for (std::int64_t f = a.frame + 1; f < s.frame; ++f) {
          const double t = static_cast<double>(f - a.frame) / static_cast<double>(s.frame - a.frame);
          TrackState fill;
          fill.frame = f;
          fill.present = true;
          fill.interpolated = true;
          fill.centroid = {a.centroid.x + t * (s.centroid.x - a.centroid.x),
                           a.centroid.y + t * (s.centroid.y - a.centroid.y)};
          out.push_back(fill);
        }
      }
    }
    out.push_back(s);
    prev = &s;
    pending_from = out.size();
  }
  track.states = std::move(out);
  return track;
}

}  // namespace segtrack

#include <algorithm>
#include <cmath>
#include <string>

#include "segtrack/analytics.hpp"
#include "segtrack/error.hpp"

namespace segtrack {

double distance_traveled(const Track& track, double px_per_unit) {
  if (!(px_per_unit > 0.0)) throw Error(ErrorKind::kInvalidArgument, "px_per_unit must be > 0");
  double total = 0.0;
  const TrackState* prev = nullptr;
  for (const TrackState& s : track.states) {
    if (!s.present) continue;
    if (prev != nullptr) {
      total += std::hypot(s.centroid.x - prev->centroid.x, s.centroid.y - prev->centroid.y);
    }
    prev = &s;
  }
  return total / px_per_unit;
}

TrajectoryStats trajectory_stats(const Track& track, double px_per_unit) {
  TrajectoryStats stats;
  stats.label = track.label;
  stats.distance_traveled = distance_traveled(track, px_per_unit);
  stats.frames_present = track.present_count();
  const auto first = std::find_if(track.states.begin(), track.states.end(),
                                  [](const TrackState& s) { return s.present; });
  const auto last = std::find_if(track.states.rbegin(), track.states.rend(),
                                 [](const TrackState& s) { return s.present; });
  if (first != track.states.end() && last->frame > first->frame) {
    stats.mean_speed = stats.distance_traveled / static_cast<double>(last->frame - first->frame);
  }
  return stats;
}

std::vector<ZoneCount> zone_occupancy(const Track& track,
                                      const std::vector<ZoneDefinition>& zones) {
  for (const ZoneDefinition& z : zones) validate_polygon(z.region);
  std::vector<ZoneCount> out;
  for (const ZoneDefinition& z : zones) out.push_back({z.name, 0, 0.0});
  out.push_back({"outside", 0, 0.0});

  std::uint64_t present = 0;
  for (const TrackState& s : track.states) {
    if (!s.present) continue;
    ++present;
    std::size_t slot = zones.size();
    for (std::size_t z = 0; z < zones.size(); ++z) {
      if (contains(zones[z].region, s.centroid)) {
        slot = z;
        break;
      }
    }
    ++out[slot].frames;
  }
  if (present > 0) {
    for (ZoneCount& c : out) {
      c.fraction = static_cast<double>(c.frames) / static_cast<double>(present);
    }
  }
  return out;
}

std::vector<InteractionEvent> interaction_events(const Track& a, const Track& b,
                                                 InteractionCriterion criterion,
                                                 double threshold,
                                                 std::int64_t min_duration) {
  if (min_duration < 1) throw Error(ErrorKind::kInvalidArgument, "min_duration must be >= 1");
  if (criterion == InteractionCriterion::kMaskIou && !(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "IoU threshold must lie in (0, 1]");
  }
  if (criterion == InteractionCriterion::kCentroidDistance && !(threshold > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "distance threshold must be > 0");
  }
  if (a.label == b.label) {
    throw Error(ErrorKind::kInvalidArgument, "interaction needs two distinct tracks");
  }

  std::vector<std::int64_t> hits;
  std::vector<std::int64_t> missing;
  for (const TrackState& sa : a.states) {
    if (!sa.present) continue;
    const TrackState* sb = b.at(sa.frame);
    if (sb == nullptr || !sb->present) continue;
    bool holds;
    if (criterion == InteractionCriterion::kMaskIou) {
      if (!sa.segmentation || !sb->segmentation) {
        missing.push_back(sa.frame);
        continue;
      }
      holds = segmentation_iou(*sa.segmentation, *sb->segmentation) >= threshold;
    } else {
      holds = std::hypot(sa.centroid.x - sb->centroid.x, sa.centroid.y - sb->centroid.y) <=
              threshold;
    }
    if (holds) hits.push_back(sa.frame);
  }
  if (!missing.empty()) {
    std::string frames;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) {
      frames += (i ? "," : "") + std::to_string(missing[i]);
    }
    if (missing.size() > 20) frames += ",...";
    throw Error(ErrorKind::kMissingData, "mask IoU needs segmentations; missing at frames [" + frames + "]");
  }

  auto labels = std::minmax(a.label, b.label);
  std::vector<InteractionEvent> events;
  std::size_t i = 0;
  while (i < hits.size()) {
    std::size_t j = i;
    while (j + 1 < hits.size() && hits[j + 1] == hits[j] + 1) ++j;
    if (hits[j] - hits[i] + 1 >= min_duration) {
      events.push_back({{labels.first, labels.second}, hits[i], hits[j], criterion});
    }
    i = j + 1;
  }
  return events;
}

}  // namespace segtrack

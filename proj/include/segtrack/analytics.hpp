#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "segtrack/geometry.hpp"
#include "segtrack/metrics.hpp"
#include "segtrack/tracking.hpp"

namespace segtrack {

struct ZoneDefinition {
  std::string name;
  Polygon region;
};

struct ZoneCount {
  std::string name;  // "outside" for the implicit remainder
  std::uint64_t frames = 0;
  double fraction = 0.0;

  friend bool operator==(const ZoneCount&, const ZoneCount&) = default;
};

enum class InteractionCriterion { kMaskIou, kCentroidDistance };

struct InteractionEvent {
  std::pair<std::string, std::string> labels;  // lexicographically ordered
  std::int64_t start_frame = 0;
  std::int64_t end_frame = 0;
  InteractionCriterion criterion = InteractionCriterion::kCentroidDistance;

  friend bool operator==(const InteractionEvent&, const InteractionEvent&) = default;
};

struct TrajectoryStats {
  std::string label;
  double distance_traveled = 0.0;
  std::uint64_t frames_present = 0;
  double mean_speed = 0.0;  // distance per elapsed frame between first and last sighting
};

inline constexpr double kDefaultHuddleIou = 0.1;

double distance_traveled(const Track& track, double px_per_unit = 1.0);

TrajectoryStats trajectory_stats(const Track& track, double px_per_unit = 1.0);

// One entry per zone in list order plus a trailing "outside" entry. Each
// present state counts toward the first zone containing its centroid.
std::vector<ZoneCount> zone_occupancy(const Track& track,
                                      const std::vector<ZoneDefinition>& zones);

std::vector<InteractionEvent> interaction_events(const Track& a, const Track& b,
                                                 InteractionCriterion criterion,
                                                 double threshold,
                                                 std::int64_t min_duration);

enum class ReportFormat { kCsv, kJson };

// AP values are printed as percentages with 3 decimals; empty cells as "-".
std::string emit_report(const ApReport& report, ReportFormat format);

struct MotSummary {
  std::string video;
  MotReport report;
};
std::string emit_report(const std::vector<MotSummary>& rows, ReportFormat format);
std::string emit_report(const std::vector<TrajectoryStats>& rows, ReportFormat format);

// Parses the JSON produced by emit_report(ApReport, kJson).
ApReport read_ap_report_json(const std::string& text);

// SVG 1.1: one polyline per track through its present centroids (a dot for a
// single sighting), colors stable per label, legend of all labels.
std::string plot_trajectories(const std::vector<Track>& tracks, int width, int height);

}  // namespace segtrack

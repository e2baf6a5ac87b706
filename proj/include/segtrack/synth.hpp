#pragma once

// Seeded synthetic multi-animal scenarios with controlled error injection.
// The injection log is the ground truth the tracking metrics are checked
// against.

#include <cstdint>
#include <string>
#include <vector>

#include "segtrack/formats.hpp"
#include "segtrack/tracking.hpp"

namespace segtrack {

struct ScenarioConfig {
  int n_animals = 2;
  std::int64_t n_frames = 100;
  int arena_width = 320;
  int arena_height = 240;
  double body_radius = 8.0;
  double speed_max = 3.0;
  double min_separation = 0.0;  // 0 allows crossings
  std::uint64_t seed = 0;
};

struct PerturbationConfig {
  double p_fn = 0.0;      // per (frame, object)
  double p_fp = 0.0;      // mean spurious detections per frame
  int n_ids = 0;          // label pair swaps
  double centroid_noise = 0.0;  // px standard deviation
  std::uint64_t seed = 0;
};

struct Scenario {
  ScenarioConfig config;
  std::vector<Track> gt_tracks;  // labels animal_1..animal_n
  CocoDataset gt_dataset;        // one image per frame, RLE masks
  std::vector<std::vector<Point2D>> centers;  // [frame][animal] disc centers
};

struct FnEvent {
  std::int64_t frame = 0;
  std::string label;  // true identity of the dropped detection
};

struct FpEvent {
  std::int64_t frame = 0;
  std::string label;
  Point2D center;
};

struct IdsEvent {
  std::int64_t frame = 0;  // first frame with the exchanged labels
  std::string first;
  std::string second;
};

struct InjectionLog {
  std::vector<FnEvent> fn_events;
  std::vector<FpEvent> fp_events;
  std::vector<IdsEvent> ids_events;
};

struct PerturbedDetections {
  std::vector<DetectionRecord> preds;  // sorted by frame, then label
  InjectionLog log;
};

// Label used for spurious detections; one per slot within a frame.
std::string spurious_label(int slot);

Scenario generate_scenario(const ScenarioConfig& cfg);

PerturbedDetections perturb(const Scenario& scenario, const PerturbationConfig& cfg);

// Polygon approximation of a disc, shared by generation and perturbation.
Polygon disc_polygon(Point2D center, double radius);

std::string injection_log_json(const InjectionLog& log);

}  // namespace segtrack

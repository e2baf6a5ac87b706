#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "detail/random.hpp"
#include "json.hpp"
#include "segtrack/error.hpp"
#include "segtrack/synth.hpp"

namespace segtrack {

namespace {

constexpr int kPlacementAttempts = 100;
constexpr double kFpClearance = 3.0;  // body radii from every true center
constexpr double kMinJitterIou = 0.5;

// IoU of two radius-r discs whose centers are d apart.
double disc_iou(double d, double r) {
  if (d >= 2.0 * r) return 0.0;
  const double lens = 2.0 * r * r * std::acos(d / (2.0 * r)) - 0.5 * d * std::sqrt(4.0 * r * r - d * d);
  return lens / (2.0 * std::numbers::pi * r * r - lens);
}

// Largest offset keeping the analytic disc IoU at 0.6, leaving room for
// rasterization error below the 0.5 match threshold.
double max_offset(double r) {
  double lo = 0.0, hi = 2.0 * r;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (disc_iou(mid, r) > 0.6 ? lo : hi) = mid;
  }
  return lo;
}

void check_config(const Scenario& sc, const PerturbationConfig& cfg) {
  if (!(cfg.p_fn >= 0.0 && cfg.p_fn < 1.0) || !(cfg.p_fp >= 0.0) || cfg.n_ids < 0 ||
      !(cfg.centroid_noise >= 0.0)) {
    throw Error(ErrorKind::kConfig,
                "perturbation needs p_fn in [0,1), p_fp >= 0, n_ids >= 0, centroid_noise >= 0");
  }
  const std::int64_t swap_frames = sc.config.n_animals >= 2 ? sc.config.n_frames - 1 : 0;
  if (cfg.n_ids > swap_frames) {
    throw Error(ErrorKind::kConfig, "n_ids " + std::to_string(cfg.n_ids) + " exceeds the " +
                                        std::to_string(swap_frames) + " frames available for swaps");
  }
}

}  // namespace

std::string spurious_label(int slot) { return "spurious_" + std::to_string(slot + 1); }

PerturbedDetections perturb(const Scenario& sc, const PerturbationConfig& cfg) {
  check_config(sc, cfg);
  detail::Rng rng(cfg.seed);
  const ScenarioConfig& scfg = sc.config;
  const double r = scfg.body_radius;
  const int h = scfg.arena_height, w = scfg.arena_width;
  const auto n = static_cast<std::size_t>(scfg.n_animals);
  PerturbedDetections out;

  std::set<std::int64_t> swap_frames;
  if (cfg.n_ids > 0) {
    const auto picks =
        sample_frames(scfg.n_frames - 1, cfg.n_ids, SamplingStrategy::random(rng.next()));
    for (std::int64_t f : picks) swap_frames.insert(f + 1);
  }

  std::vector<std::string> held(n);  // label currently emitted for each animal
  for (std::size_t i = 0; i < n; ++i) held[i] = "animal_" + std::to_string(i + 1);
  const std::vector<std::string> truth = held;
  const double offset_cap = max_offset(r);
  // Ground-truth track of each animal; tracks are label-sorted.
  std::vector<const Track*> track_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    track_of[i] = &*std::find_if(sc.gt_tracks.begin(), sc.gt_tracks.end(),
                                 [&](const Track& t) { return t.label == truth[i]; });
  }

  for (std::int64_t f = 0; f < scfg.n_frames; ++f) {
    const auto& centers = sc.centers[static_cast<std::size_t>(f)];
    const bool swap_here = swap_frames.count(f) > 0;
    if (swap_here) {
      const std::size_t a = rng.below(n);
      std::size_t b = rng.below(n - 1);
      if (b >= a) ++b;
      std::swap(held[a], held[b]);
      out.log.ids_events.push_back({f, std::min(held[a], held[b]), std::max(held[a], held[b])});
    }

    for (std::size_t i = 0; i < n; ++i) {
      const double u = rng.uniform();
      if (!swap_here && u < cfg.p_fn) {
        out.log.fn_events.push_back({f, truth[i]});
        continue;
      }
      double dx = 0.0, dy = 0.0;
      if (cfg.centroid_noise > 0.0) {
        dx = cfg.centroid_noise * rng.normal();
        dy = cfg.centroid_noise * rng.normal();
        const double len = std::hypot(dx, dy);
        if (len > offset_cap) {
          dx *= offset_cap / len;
          dy *= offset_cap / len;
        }
      }
      const RleMask& true_mask =
          std::get<RleMask>(*track_of[i]->states[static_cast<std::size_t>(f)].segmentation);
      RleMask mask = true_mask;
      while (dx != 0.0 || dy != 0.0) {
        const Polygon disc = disc_polygon({centers[i].x + dx, centers[i].y + dy}, r);
        mask = rasterize_rle({&disc, 1}, h, w);
        if (rle_iou(mask, true_mask) > kMinJitterIou) break;
        dx *= 0.5;
        dy *= 0.5;
        if (std::hypot(dx, dy) < 1e-3) {
          dx = dy = 0.0;
          mask = true_mask;
        }
      }
      DetectionRecord det;
      det.frame = f;
      det.label = held[i];
      det.score = 1.0;
      det.bbox = rle_bbox(mask);
      det.segmentation = std::move(mask);
      out.preds.push_back(std::move(det));
    }

    const int n_fp = cfg.p_fp > 0.0 ? rng.poisson(cfg.p_fp) : 0;
    std::vector<Point2D> placed;
    for (int slot = 0; slot < n_fp; ++slot) {
      for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
        const Point2D p{rng.uniform(r, w - r), rng.uniform(r, h - r)};
        const auto too_close = [&](const Point2D& q, double min_dist) {
          return std::hypot(p.x - q.x, p.y - q.y) < min_dist;
        };
        if (std::any_of(centers.begin(), centers.end(),
                        [&](const Point2D& q) { return too_close(q, kFpClearance * r); }) ||
            std::any_of(placed.begin(), placed.end(),
                        [&](const Point2D& q) { return too_close(q, 2.0 * r + 2.0); })) {
          continue;
        }
        placed.push_back(p);
        const Polygon disc = disc_polygon(p, r);
        DetectionRecord det;
        det.frame = f;
        det.label = spurious_label(slot);
        det.score = rng.uniform(0.5, 0.9);
        RleMask mask = rasterize_rle({&disc, 1}, h, w);
        det.bbox = rle_bbox(mask);
        det.segmentation = std::move(mask);
        out.preds.push_back(std::move(det));
        out.log.fp_events.push_back({f, spurious_label(slot), p});
        break;
      }
    }
  }

  std::stable_sort(out.preds.begin(), out.preds.end(),
                   [](const DetectionRecord& a, const DetectionRecord& b) {
                     if (a.frame != b.frame) return a.frame < b.frame;
                     return a.label < b.label;
                   });
  return out;
}

std::string injection_log_json(const InjectionLog& log) {
  nlohmann::ordered_json j;
  j["fn"] = nlohmann::ordered_json::array();
  for (const FnEvent& e : log.fn_events) j["fn"].push_back({{"frame", e.frame}, {"label", e.label}});
  j["fp"] = nlohmann::ordered_json::array();
  for (const FpEvent& e : log.fp_events) {
    j["fp"].push_back({{"frame", e.frame}, {"label", e.label}, {"x", e.center.x}, {"y", e.center.y}});
  }
  j["ids"] = nlohmann::ordered_json::array();
  for (const IdsEvent& e : log.ids_events) {
    j["ids"].push_back({{"frame", e.frame}, {"first", e.first}, {"second", e.second}});
  }
  return j.dump(1) + "\n";
}

}  // namespace segtrack

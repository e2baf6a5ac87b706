#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "detail/random.hpp"
#include "segtrack/error.hpp"
#include "segtrack/synth.hpp"

namespace segtrack {

namespace {

constexpr int kDiscSides = 64;
constexpr int kPlacementAttempts = 10000;
constexpr int kStepAttempts = 100;

void check_config(const ScenarioConfig& cfg) {
  if (cfg.n_animals < 1 || cfg.n_frames < 1 || cfg.arena_width < 1 || cfg.arena_height < 1 ||
      !(cfg.body_radius > 0.0) || !(cfg.speed_max > 0.0) || !(cfg.min_separation >= 0.0)) {
    throw Error(ErrorKind::kConfig,
                "scenario needs positive counts, arena, radius and speed, and min_separation >= 0");
  }
  if (2.0 * cfg.body_radius >= cfg.arena_width || 2.0 * cfg.body_radius >= cfg.arena_height) {
    throw Error(ErrorKind::kConfig, "arena is too small for a single body");
  }
}

double reflect(double v, double lo, double hi) {
  if (v < lo) v = 2.0 * lo - v;
  if (v > hi) v = 2.0 * hi - v;
  return std::clamp(v, lo, hi);
}

bool separated(const std::vector<Point2D>& pos, std::size_t self, Point2D p, double min_sep) {
  if (min_sep <= 0.0) return true;
  for (std::size_t k = 0; k < pos.size(); ++k) {
    if (k != self && std::hypot(pos[k].x - p.x, pos[k].y - p.y) < min_sep) return false;
  }
  return true;
}

}  // namespace

Polygon disc_polygon(Point2D center, double radius) {
  Polygon ring;
  ring.vertices.reserve(kDiscSides);
  for (int k = 0; k < kDiscSides; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / kDiscSides;
    ring.vertices.push_back({center.x + radius * std::cos(angle), center.y + radius * std::sin(angle)});
  }
  return ring;
}

Scenario generate_scenario(const ScenarioConfig& cfg) {
  check_config(cfg);
  detail::Rng rng(cfg.seed);
  const double r = cfg.body_radius;
  const double xlo = r, xhi = cfg.arena_width - r;
  const double ylo = r, yhi = cfg.arena_height - r;
  const auto n = static_cast<std::size_t>(cfg.n_animals);

  std::vector<Point2D> pos;
  for (std::size_t i = 0; i < n; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      const Point2D p{rng.uniform(xlo, xhi), rng.uniform(ylo, yhi)};
      if (separated(pos, pos.size(), p, cfg.min_separation)) {
        pos.push_back(p);
        placed = true;
      }
    }
    if (!placed) {
      throw Error(ErrorKind::kConfig, "cannot place " + std::to_string(n) +
                                          " animals at separation " +
                                          std::to_string(cfg.min_separation));
    }
  }

  Scenario sc;
  sc.config = cfg;
  sc.centers.reserve(static_cast<std::size_t>(cfg.n_frames));
  for (std::int64_t f = 0; f < cfg.n_frames; ++f) {
    if (f > 0) {
      for (std::size_t i = 0; i < n; ++i) {
        for (int attempt = 0; attempt < kStepAttempts; ++attempt) {
          const double angle = 2.0 * std::numbers::pi * rng.uniform();
          const double len = cfg.speed_max * std::sqrt(rng.uniform());
          const Point2D p{reflect(pos[i].x + len * std::cos(angle), xlo, xhi),
                          reflect(pos[i].y + len * std::sin(angle), ylo, yhi)};
          if (separated(pos, i, p, cfg.min_separation)) {
            pos[i] = p;
            break;
          }
        }
      }
    }
    sc.centers.push_back(pos);
  }

  // Tracks and categories are in label order; animal_of[k] is track k's animal.
  std::vector<std::size_t> animal_of(n);
  for (std::size_t i = 0; i < n; ++i) animal_of[i] = i;
  std::sort(animal_of.begin(), animal_of.end(), [](std::size_t a, std::size_t b) {
    return std::to_string(a + 1) < std::to_string(b + 1);
  });
  for (std::size_t k = 0; k < n; ++k) {
    Track t;
    t.label = "animal_" + std::to_string(animal_of[k] + 1);
    sc.gt_dataset.categories.push_back({static_cast<std::int64_t>(k) + 1, t.label});
    sc.gt_tracks.push_back(std::move(t));
  }

  for (std::int64_t f = 0; f < cfg.n_frames; ++f) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06lld.png", static_cast<long long>(f));
    const std::int64_t image_id = f + 1;
    sc.gt_dataset.images.push_back({image_id, name, cfg.arena_height, cfg.arena_width, f});
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t animal = animal_of[k];
      const Polygon disc = disc_polygon(sc.centers[static_cast<std::size_t>(f)][animal], r);
      RleMask mask = rasterize_rle({&disc, 1}, cfg.arena_height, cfg.arena_width);

      CocoAnnotation ann;
      ann.id = static_cast<std::int64_t>(sc.gt_dataset.annotations.size()) + 1;
      ann.image_id = image_id;
      ann.category_id = static_cast<std::int64_t>(k) + 1;
      ann.area = static_cast<double>(rle_area(mask));
      ann.bbox = rle_bbox(mask);

      TrackState s;
      s.frame = f;
      s.present = true;
      s.centroid = centroid(mask);
      s.score = 1.0;
      s.segmentation = mask;
      ann.segmentation = std::move(mask);
      sc.gt_tracks[k].states.push_back(std::move(s));
      sc.gt_dataset.annotations.push_back(std::move(ann));
    }
  }
  return sc;
}

}  // namespace segtrack

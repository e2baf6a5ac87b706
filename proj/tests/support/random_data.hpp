#pragma once

// Seeded random inputs shared by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "segtrack/formats.hpp"
#include "segtrack/geometry.hpp"
#include "segtrack/tracking.hpp"

namespace testdata {

inline segtrack::Polygon rect(double x, double y, double w, double h) {
  return {{{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}}};
}

inline segtrack::BinaryMask random_mask(std::mt19937_64& rng, int h, int w) {
  segtrack::BinaryMask m(h, w);
  // Blobby masks: a few random rectangles plus salt noise, so both long and
  // short runs occur.
  std::uniform_int_distribution<int> rows(0, h - 1), cols(0, w - 1);
  std::uniform_int_distribution<int> blobs(0, 4);
  const int nb = blobs(rng);
  for (int b = 0; b < nb; ++b) {
    int r0 = rows(rng), r1 = rows(rng), c0 = cols(rng), c1 = cols(rng);
    if (r0 > r1) std::swap(r0, r1);
    if (c0 > c1) std::swap(c0, c1);
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) m.set(r, c);
    }
  }
  std::bernoulli_distribution salt(0.02);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (salt(rng)) m.set(r, c, !m.get(r, c));
    }
  }
  return m;
}

// Convex polygon with every edge at least min_edge long: a regular n-gon
// with a random rotation and radial jitter, retried until it qualifies.
inline segtrack::Polygon random_convex(std::mt19937_64& rng, double min_edge, double max_radius,
                                       segtrack::Point2D center) {
  std::uniform_int_distribution<int> sides(3, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const int n = sides(rng);
    const double radius = max_radius * (0.5 + 0.5 * unit(rng));
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    segtrack::Polygon p;
    for (int k = 0; k < n; ++k) {
      const double a = phase + 2.0 * std::numbers::pi * (k + 0.3 * (unit(rng) - 0.5)) / n;
      p.vertices.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    }
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      const auto& a = p.vertices[k];
      const auto& b = p.vertices[(k + 1) % n];
      ok = std::hypot(b.x - a.x, b.y - a.y) >= min_edge;
    }
    if (ok) return p;
  }
}

// A small COCO dataset with detections and the matching dense oracle
// input per category.
struct ApCase {
  segtrack::CocoDataset gt;
  std::vector<segtrack::DetectionRecord> dets;
  // oracle_images[category slot in id order][image]
  std::vector<std::vector<oracle::ApImage>> oracle_images;
};

inline ApCase random_ap_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> n_images_d(1, 20), n_gts_d(0, 4), n_dets_d(0, 10);
  constexpr int kSize = 128;

  ApCase out;
  const std::vector<std::string> names = {"vole_b", "vole_a", "vole_c"};
  const int n_cats = 1 + static_cast<int>(rng() % 3);
  // Category ids deliberately out of name order.
  for (int k = 0; k < n_cats; ++k) out.gt.categories.push_back({n_cats - k, names[k]});
  std::vector<std::size_t> slot_of_id(n_cats + 1);
  {
    std::vector<std::int64_t> ids;
    for (const auto& c : out.gt.categories) ids.push_back(c.id);
    std::sort(ids.begin(), ids.end());
    for (std::size_t s = 0; s < ids.size(); ++s) slot_of_id[ids[s]] = s;
  }
  const int n_images = n_images_d(rng);
  out.oracle_images.assign(n_cats, std::vector<oracle::ApImage>(n_images));

  auto random_shape = [&](double max_side) {
    const double w = 3.0 + unit(rng) * max_side, h = 3.0 + unit(rng) * max_side;
    const double x = unit(rng) * (kSize - w), y = unit(rng) * (kSize - h);
    return rect(x, y, w, h);
  };

  std::size_t order = 0;
  for (int i = 0; i < n_images; ++i) {
    const std::int64_t image_id = i + 1;
    out.gt.images.push_back({image_id, "img_" + std::to_string(i) + ".png", kSize, kSize, i});
    std::vector<std::pair<std::int64_t, segtrack::Polygon>> gt_shapes;
    const int n_gts = n_gts_d(rng);
    for (int g = 0; g < n_gts; ++g) {
      const std::int64_t cat = 1 + static_cast<std::int64_t>(rng() % n_cats);
      const auto shape = random_shape(unit(rng) < 0.3 ? 120.0 : 40.0);
      auto grid = oracle::rasterize({shape}, kSize, kSize);
      const double area = static_cast<double>(oracle::area(grid));
      if (area == 0) continue;
      segtrack::CocoAnnotation ann;
      ann.id = static_cast<std::int64_t>(out.gt.annotations.size()) + 1;
      ann.image_id = image_id;
      ann.category_id = cat;
      ann.segmentation = segtrack::MultiPolygon{shape};
      ann.bbox = segtrack::polygon_bbox(shape);
      ann.area = area;
      ann.iscrowd = unit(rng) < 0.1;
      out.gt.annotations.push_back(ann);
      out.oracle_images[slot_of_id[cat]][i].gts.push_back({std::move(grid), area, ann.iscrowd});
      gt_shapes.emplace_back(cat, shape);
    }
    const int n_dets = n_dets_d(rng);
    for (int d = 0; d < n_dets; ++d) {
      std::int64_t cat;
      segtrack::Polygon shape;
      if (!gt_shapes.empty() && unit(rng) < 0.7) {
        const auto& [c, base] = gt_shapes[rng() % gt_shapes.size()];
        cat = unit(rng) < 0.9 ? c : 1 + static_cast<std::int64_t>(rng() % n_cats);
        const double dx = (unit(rng) - 0.5) * 8.0, dy = (unit(rng) - 0.5) * 8.0;
        for (auto v : base.vertices) shape.vertices.push_back({v.x + dx, v.y + dy});
      } else {
        cat = 1 + static_cast<std::int64_t>(rng() % n_cats);
        shape = random_shape(60.0);
      }
      auto grid = oracle::rasterize({shape}, kSize, kSize);
      segtrack::DetectionRecord det;
      det.frame = i;
      det.label = out.gt.categories[static_cast<std::size_t>(n_cats - cat)].name;
      // Coarse scores so ties occur.
      det.score = std::round(unit(rng) * 10.0) / 10.0;
      if (unit(rng) < 0.5) {
        det.segmentation = segtrack::MultiPolygon{shape};
      } else {
        segtrack::RleMask m{kSize, kSize, oracle::run_lengths(grid, kSize, kSize)};
        det.segmentation = m;
      }
      det.bbox = segtrack::polygon_bbox(shape);
      out.dets.push_back(det);
      out.oracle_images[slot_of_id[cat]][i].dts.push_back({std::move(grid), det.score, order++});
    }
  }
  return out;
}

}  // namespace testdata

#pragma once

// A long two-animal video with a known error budget: 38 misses, 26 label
// exchanges (52 switches) and 11 spurious detections over 10575 frames.
// Static square masks keep every match unambiguous.

#include <cstdint>
#include <string>
#include <vector>

#include "random_data.hpp"
#include "segtrack/formats.hpp"
#include "segtrack/tracking.hpp"

namespace testdata {

struct MotFixture {
  segtrack::CocoDataset gt;
  std::vector<segtrack::DetectionRecord> preds;
  std::int64_t n_frames = 0;
  std::uint64_t fn = 0, ids = 0, fp = 0;
};

inline MotFixture mot_fixture(std::int64_t n_frames = 10575, int misses = 38, int exchanges = 26,
                              int spurious = 11) {
  constexpr int kSide = 8;
  const segtrack::Polygon body[2] = {rect(0, 0, 3, 3), rect(4, 4, 4, 4)};
  const segtrack::Polygon ghost = rect(0, 5, 3, 3);  // disjoint from both bodies

  MotFixture fx;
  fx.n_frames = n_frames;
  fx.gt.categories = {{1, "animal_1"}, {2, "animal_2"}};
  // Events sit on disjoint residues of 100 so none interact.
  auto hits = [](std::int64_t f, std::int64_t offset, int count) {
    return f % 100 == offset && f / 100 < count;
  };
  bool exchanged = false;
  std::int64_t ann = 1;
  for (std::int64_t f = 0; f < n_frames; ++f) {
    const std::int64_t image_id = f + 1;
    fx.gt.images.push_back({image_id, "frame_" + std::to_string(f) + ".png", kSide, kSide, f});
    if (hits(f, 50, exchanges)) exchanged = !exchanged;
    for (int a = 0; a < 2; ++a) {
      const segtrack::MultiPolygon seg{body[a]};
      fx.gt.annotations.push_back({ann++, image_id, a + 1, seg, segtrack::polygon_bbox(body[a]),
                                   segtrack::polygon_area(body[a]), false});
      if (a == 0 && hits(f, 10, misses)) continue;
      const int shown = exchanged ? 1 - a : a;
      fx.preds.push_back({f, "animal_" + std::to_string(shown + 1), 0.9, seg,
                          segtrack::polygon_bbox(body[a])});
    }
    if (hits(f, 30, spurious)) {
      fx.preds.push_back({f, "spurious_1", 0.9, segtrack::MultiPolygon{ghost},
                          segtrack::polygon_bbox(ghost)});
    }
  }
  fx.fn = static_cast<std::uint64_t>(misses);
  fx.ids = 2 * static_cast<std::uint64_t>(exchanges);
  fx.fp = static_cast<std::uint64_t>(spurious);
  return fx;
}

}  // namespace testdata

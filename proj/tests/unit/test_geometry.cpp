#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "random_data.hpp"
#include "segtrack/error.hpp"
#include "segtrack/geometry.hpp"

using namespace segtrack;
using testdata::rect;

namespace {

oracle::Grid to_grid(const BinaryMask& m) {
  oracle::Grid g(static_cast<std::size_t>(m.height()),
                 std::vector<std::uint8_t>(static_cast<std::size_t>(m.width()), 0));
  for (int r = 0; r < m.height(); ++r) {
    for (int c = 0; c < m.width(); ++c) g[r][c] = m.get(r, c);
  }
  return g;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::kIo;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("polygon area") {
  CHECK(polygon_area(rect(0, 0, 1, 1)) == doctest::Approx(1.0));
  CHECK(polygon_area({{{0, 0}, {4, 0}, {0, 3}}}) == doctest::Approx(6.0));
  CHECK(polygon_area({{{0, 0}, {1, 1}, {2, 2}}}) == 0.0);
  // Orientation does not matter.
  CHECK(polygon_area({{{0, 3}, {4, 0}, {0, 0}}}) == doctest::Approx(6.0));
}

TEST_CASE("polygon validation") {
  CHECK(kind_of([] { validate_polygon({{{0, 0}, {1, 1}}}); }) == ErrorKind::kInvalidPolygon);
  CHECK(kind_of([] { validate_polygon({{{0, 0}, {1, NAN}, {2, 0}}}) ; }) == ErrorKind::kInvalidPolygon);
  CHECK_NOTHROW(validate_polygon(rect(0, 0, 2, 2)));
  CHECK(is_simple(rect(0, 0, 2, 2)));
  CHECK_FALSE(is_simple({{{0, 0}, {4, 4}, {4, 0}, {0, 4}}}));
}

TEST_CASE("polygon bbox") {
  CHECK(polygon_bbox({{{0, 0}, {4, 0}, {0, 3}}}) == BoundingBox{0, 0, 4, 3});
  CHECK(polygon_bbox({{{2, 5}, {2, 5}, {2, 5}}}) == BoundingBox{2, 5, 0, 0});
  CHECK(polygon_bbox(rect(10, 20, 3, 3)) == BoundingBox{10, 20, 3, 3});
}

TEST_CASE("rasterize square covers the enclosed pixel centers") {
  const BinaryMask m = rasterize(rect(0, 0, 4, 4), 8, 8);
  CHECK(m.count() == 16);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) CHECK(m.get(r, c) == (r < 4 && c < 4));
  }
  CHECK(rasterize(rect(20, 20, 5, 5), 8, 8).count() == 0);
  CHECK(rasterize(rect(-10, -10, 5, 5), 8, 8).count() == 0);
}

TEST_CASE("rasterize bow-tie matches brute force") {
  const Polygon bow{{{0, 0}, {10, 10}, {10, 0}, {0, 10}}};
  const BinaryMask m = rasterize(bow, 12, 12);
  CHECK(to_grid(m) == oracle::rasterize({bow}, 12, 12));
  // Two triangles meeting at the crossing; the band between them is empty.
  CHECK(m.get(5, 1));
  CHECK_FALSE(m.get(1, 5));
}

TEST_CASE("half-open boundary: adjacent squares tile without overlap") {
  const BinaryMask a = rasterize(rect(0.5, 0.5, 2, 2), 5, 5);
  const BinaryMask b = rasterize(rect(2.5, 0.5, 2, 2), 5, 5);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) CHECK_FALSE((a.get(r, c) && b.get(r, c)));
  }
  CHECK(a.count() + b.count() == 8);
}

TEST_CASE("rasterize agrees with PNPOLY on random polygons") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-5.0, 45.0);
  for (int trial = 0; trial < 200; ++trial) {
    Polygon p;
    const int n = 3 + trial % 7;
    for (int k = 0; k < n; ++k) p.vertices.push_back({coord(rng), coord(rng)});
    // Integer and half-integer vertices hit the boundary rule.
    if (trial % 3 == 0) {
      for (auto& v : p.vertices) v = {std::round(v.x * 2) / 2, std::round(v.y * 2) / 2};
    }
    CHECK(to_grid(rasterize(p, 40, 37)) == oracle::rasterize({p}, 40, 37));
    const RleMask r = rasterize_rle({&p, 1}, 40, 37);
    CHECK(r.counts == oracle::run_lengths(oracle::rasterize({p}, 40, 37), 40, 37));
  }
}

TEST_CASE("rasterize_rle unions rings") {
  const std::vector<Polygon> rings = {rect(0, 0, 3, 3), rect(2, 2, 3, 3), rect(6, 0, 1, 1)};
  const RleMask r = rasterize_rle(rings, 8, 8);
  CHECK(r.counts == oracle::run_lengths(oracle::rasterize(rings, 8, 8), 8, 8));
  CHECK(rle_area(r) == 9 + 9 - 1 + 1);
  CHECK(kind_of([] { rasterize_rle({}, 0, 4); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("mask_to_rle hand-flattened vectors") {
  CHECK(mask_to_rle(BinaryMask(3, 3)).counts == std::vector<std::uint32_t>{9});
  BinaryMask m(2, 2);
  m.set(0, 0);
  CHECK(mask_to_rle(m).counts == std::vector<std::uint32_t>{0, 1, 3});
  BinaryMask n(2, 3);
  n.set(1, 0);
  n.set(0, 1);
  n.set(1, 2);
  // Column-major: 0 1 | 1 0 | 0 1
  CHECK(mask_to_rle(n).counts == std::vector<std::uint32_t>{1, 2, 2, 1});
}

TEST_CASE("RLE roundtrip on random masks") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(1, 64);
  for (int trial = 0; trial < 100; ++trial) {
    const BinaryMask m = testdata::random_mask(rng, dim(rng), dim(rng));
    const RleMask r = mask_to_rle(m);
    CHECK(r.counts == oracle::run_lengths(to_grid(m), m.height(), m.width()));
    CHECK(rle_to_mask(r) == m);
    CHECK(rle_area(r) == m.count());
    CHECK(rle_decode_string(rle_encode_string(r), r.height, r.width) == r);
  }
}

TEST_CASE("counts string vectors") {
  CHECK(rle_encode_string({2, 2, {0, 1, 3}}) == "013");
  CHECK(rle_encode_string({3, 3, {9}}) == "9");
  CHECK(rle_encode_string({16, 8, {5, 100, 20, 3}}) == "5T3d0oL");
  CHECK(rle_decode_string("5T3d0oL", 16, 8).counts == std::vector<std::uint32_t>{5, 100, 20, 3});
}

TEST_CASE("counts string errors") {
  CHECK(kind_of([] { rle_decode_string("01~", 2, 2); }) == ErrorKind::kCorruptString);
  CHECK(kind_of([] { rle_decode_string("0`", 2, 2); }) == ErrorKind::kCorruptString);
  CHECK(kind_of([] { rle_decode_string("013", 3, 3); }) == ErrorKind::kCorruptRle);
  CHECK(kind_of([] { validate_rle({2, 2, {1, 1}}); }) == ErrorKind::kCorruptRle);
}

TEST_CASE("rle iou") {
  const RleMask a = rasterize_rle(std::vector<Polygon>{rect(0, 0, 10, 10)}, 20, 20);
  const RleMask b = rasterize_rle(std::vector<Polygon>{rect(5, 0, 10, 10)}, 20, 20);
  const RleMask far = rasterize_rle(std::vector<Polygon>{rect(15, 15, 5, 5)}, 20, 20);
  CHECK(rle_iou(a, a) == 1.0);
  CHECK(rle_iou(a, far) == 0.0);
  CHECK(rle_iou(a, b) == doctest::Approx(50.0 / 150.0));
  CHECK(rle_iou(a, b, true) == doctest::Approx(50.0 / 100.0));
  CHECK(kind_of([&] { rle_iou(a, RleMask{10, 40, {400}}); }) == ErrorKind::kDimensionMismatch);
}

TEST_CASE("rle iou equals dense pixel counting") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const BinaryMask ma = testdata::random_mask(rng, 30, 25);
    const BinaryMask mb = testdata::random_mask(rng, 30, 25);
    const double v = rle_iou(mask_to_rle(ma), mask_to_rle(mb));
    CHECK(v == doctest::Approx(oracle::iou(to_grid(ma), to_grid(mb))).epsilon(1e-12));
    CHECK(v == rle_iou(mask_to_rle(mb), mask_to_rle(ma)));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("bbox iou") {
  CHECK(bbox_iou({0, 0, 10, 10}, {0, 0, 10, 10}) == 1.0);
  CHECK(bbox_iou({0, 0, 10, 10}, {5, 0, 10, 10}) == doctest::Approx(1.0 / 3.0));
  CHECK(bbox_iou({0, 0, 10, 10}, {10, 0, 10, 10}) == 0.0);
  CHECK(bbox_iou({0, 0, 0, 0}, {0, 0, 0, 0}) == 0.0);
}

TEST_CASE("mask_to_polygons") {
  CHECK(mask_to_polygons(BinaryMask(4, 4)).empty());

  BinaryMask one(5, 6);
  one.set(2, 3);
  const auto px = mask_to_polygons(one);
  REQUIRE(px.size() == 1);
  CHECK(px[0].vertices == std::vector<Point2D>{{3, 2}, {4, 2}, {4, 3}, {3, 3}});

  BinaryMask two(8, 10);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      two.set(r, c);
      two.set(r + 4, c + 6);
    }
  }
  const auto blocks = mask_to_polygons(two);
  REQUIRE(blocks.size() == 2);
  CHECK(polygon_area(blocks[0]) == 9.0);
  CHECK(polygon_area(blocks[1]) == 9.0);
  CHECK(blocks[0].vertices == std::vector<Point2D>{{0, 0}, {3, 0}, {3, 3}, {0, 3}});
}

TEST_CASE("diagonal neighbours are separate components") {
  BinaryMask m(2, 2);
  m.set(0, 0);
  m.set(1, 1);
  CHECK(mask_to_polygons(m).size() == 2);
}

TEST_CASE("rasterizing traced outlines reproduces hole-free masks") {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const BinaryMask m = testdata::random_mask(rng, 24, 24);
    const auto rings = mask_to_polygons(m);
    // Hole-free iff the outline fills match the mask pixel count.
    const RleMask filled = rasterize_rle(rings, 24, 24);
    if (rle_area(filled) != m.count()) continue;
    CHECK(rle_to_mask(filled) == m);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("simplify examples") {
  const Polygon ring{{{0, 0}, {5, 0.1}, {10, 0}, {10, 10}, {0, 10}}};
  CHECK(simplify_polygon(ring, 0.5).vertices ==
        std::vector<Point2D>{{0, 0}, {10, 0}, {10, 10}, {0, 10}});

  const Polygon collinear{{{0, 0}, {5, 0}, {10, 0}, {10, 10}, {0, 10}}};
  CHECK(simplify_polygon(collinear, 0.0).vertices.size() == 4);
  CHECK(simplify_polygon(ring, 0.0).vertices.size() == 5);

  const Polygon square = rect(0, 0, 10, 10);
  const Polygon coarse = simplify_polygon(square, 1000.0);
  CHECK(coarse.vertices.size() == 3);
}

TEST_CASE("simplify keeps a subsequence within epsilon") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> noise(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    Polygon p;
    const int n = 5 + trial % 40;
    for (int k = 0; k < n; ++k) {
      const double a = 2.0 * std::numbers::pi * k / n;
      p.vertices.push_back({50 + 30 * std::cos(a) + noise(rng), 50 + 20 * std::sin(a) + noise(rng)});
    }
    const double eps = 0.25 * (trial % 12);
    const Polygon s = simplify_polygon(p, eps);
    REQUIRE(s.vertices.size() >= 3);
    // Subsequence of the input in cyclic order.
    std::vector<std::size_t> idx;
    for (const auto& v : s.vertices) {
      const auto it = std::find(p.vertices.begin(), p.vertices.end(), v);
      REQUIRE(it != p.vertices.end());
      idx.push_back(static_cast<std::size_t>(it - p.vertices.begin()));
    }
    std::size_t descents = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) descents += idx[(i + 1) % idx.size()] <= idx[i];
    CHECK(descents == 1);
    // Every dropped vertex lies within eps of the kept edge spanning it.
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const std::size_t a = idx[i], b = idx[(i + 1) % idx.size()];
      const Point2D pa = p.vertices[a], pb = p.vertices[b];
      for (std::size_t k = (a + 1) % n; k != b; k = (k + 1) % n) {
        const Point2D q = p.vertices[k];
        const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
        const double d = std::abs((pb.x - pa.x) * (pa.y - q.y) - (pa.x - q.x) * (pb.y - pa.y)) / len;
        CHECK(d <= eps + 1e-9);
      }
    }
  }
}

TEST_CASE("centroids") {
  const Point2D sq = centroid(rect(0, 0, 1, 1));
  CHECK(sq.x == doctest::Approx(0.5));
  CHECK(sq.y == doctest::Approx(0.5));

  BinaryMask one(5, 5);
  one.set(2, 3);
  CHECK(centroid(mask_to_rle(one)) == Point2D{3.5, 2.5});

  BinaryMask two(3, 3);
  two.set(0, 0);
  two.set(0, 2);
  CHECK(centroid(mask_to_rle(two)) == Point2D{1.5, 0.5});

  CHECK(kind_of([] { centroid(RleMask{3, 3, {9}}); }) == ErrorKind::kEmptySegmentation);
}

TEST_CASE("segmentation helpers accept both forms") {
  const Segmentation poly = MultiPolygon{rect(2, 2, 4, 4)};
  const Segmentation rle = rasterize_rle(std::get<MultiPolygon>(poly), 10, 10);
  CHECK(segmentation_area(poly) == doctest::Approx(16.0));
  CHECK(segmentation_area(rle) == doctest::Approx(16.0));
  CHECK(segmentation_iou(poly, rle) == 1.0);
  CHECK(segmentation_iou(poly, MultiPolygon{rect(4, 2, 4, 4)}) == doctest::Approx(8.0 / 24.0));
  CHECK(segmentation_bbox(rle) == BoundingBox{2, 2, 4, 4});
  CHECK(is_empty(Segmentation{RleMask{2, 2, {4}}}));
  CHECK(to_rle(poly, 10, 10) == std::get<RleMask>(rle));
}

TEST_CASE("shoelace and raster area differ by at most the perimeter") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Polygon p = testdata::random_convex(rng, 20.0, 60.0, {80.0, 80.0});
    const double raster = static_cast<double>(rle_area(rasterize_rle({&p, 1}, 160, 160)));
    CHECK(std::abs(polygon_area(p) - raster) <= polygon_perimeter(p));
  }
}

}  // TEST_SUITE

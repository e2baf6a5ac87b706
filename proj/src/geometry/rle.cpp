#include <algorithm>
#include <limits>
#include <string>

#include "geometry/scanline.hpp"
#include "segtrack/error.hpp"
#include "segtrack/geometry.hpp"

namespace segtrack {

namespace {

constexpr int kCharOffset = 48;
constexpr int kMaxChar = kCharOffset + 63;

void check_same_shape(const RleMask& a, const RleMask& b) {
  if (a.height != b.height || a.width != b.width) {
    throw Error(ErrorKind::kDimensionMismatch,
                std::to_string(a.height) + "x" + std::to_string(a.width) +
                    " vs " + std::to_string(b.height) + "x" +
                    std::to_string(b.width));
  }
}

// Visits every one-run split at column boundaries: fn(col, row_begin, row_end).
template <typename Fn>
void for_each_foreground_segment(const RleMask& rle, Fn&& fn) {
  const auto h = static_cast<std::uint64_t>(rle.height);
  std::uint64_t pos = 0;
  for (std::size_t i = 0; i < rle.counts.size(); ++i) {
    const std::uint64_t len = rle.counts[i];
    if (i % 2 == 1) {
      std::uint64_t p = pos;
      const std::uint64_t end = pos + len;
      while (p < end) {
        const std::uint64_t col = p / h;
        const std::uint64_t row = p % h;
        const std::uint64_t take = std::min(end - p, h - row);
        fn(static_cast<int>(col), static_cast<int>(row),
           static_cast<int>(row + take));
        p += take;
      }
    }
    pos += len;
  }
}

}  // namespace

void validate_rle(const RleMask& rle) {
  if (rle.height < 0 || rle.width < 0) {
    throw Error(ErrorKind::kCorruptRle, "negative dimensions");
  }
  std::uint64_t sum = 0;
  for (std::uint32_t c : rle.counts) sum += c;
  const std::uint64_t expected =
      static_cast<std::uint64_t>(rle.height) * static_cast<std::uint64_t>(rle.width);
  if (sum != expected) {
    throw Error(ErrorKind::kCorruptRle, "counts sum to " + std::to_string(sum) +
                                            ", expected " +
                                            std::to_string(expected));
  }
}

RleMask mask_to_rle(const BinaryMask& mask) {
  detail::RunBuilder runs;
  for (int c = 0; c < mask.width(); ++c) {
    for (int r = 0; r < mask.height(); ++r) runs.push(mask.get(r, c), 1);
  }
  return {mask.height(), mask.width(), runs.finish()};
}

BinaryMask rle_to_mask(const RleMask& rle) {
  validate_rle(rle);
  BinaryMask mask(rle.height, rle.width);
  for_each_foreground_segment(rle, [&](int col, int r0, int r1) {
    for (int r = r0; r < r1; ++r) mask.set(r, col);
  });
  return mask;
}

std::string rle_encode_string(const RleMask& rle) {
  validate_rle(rle);
  std::string out;
  for (std::size_t i = 0; i < rle.counts.size(); ++i) {
    auto x = static_cast<std::int64_t>(rle.counts[i]);
    // pycocotools deltas from index 3 on; counts[2] is stored raw.
    if (i > 2) x -= static_cast<std::int64_t>(rle.counts[i - 2]);
    bool more = true;
    while (more) {
      std::int64_t c = x & 0x1f;
      x >>= 5;
      more = (c & 0x10) ? x != -1 : x != 0;
      if (more) c |= 0x20;
      out.push_back(static_cast<char>(c + kCharOffset));
    }
  }
  return out;
}

RleMask rle_decode_string(std::string_view counts, int height, int width) {
  if (height < 0 || width < 0) {
    throw Error(ErrorKind::kInvalidArgument, "negative mask dimensions");
  }
  RleMask rle{height, width, {}};
  std::size_t p = 0;
  while (p < counts.size()) {
    std::int64_t x = 0;
    int k = 0;
    bool more = true;
    while (more) {
      if (p >= counts.size()) {
        throw Error(ErrorKind::kCorruptString,
                    "truncated continuation at offset " + std::to_string(p));
      }
      const int ch = static_cast<unsigned char>(counts[p]);
      if (ch < kCharOffset || ch > kMaxChar) {
        throw Error(ErrorKind::kCorruptString,
                    "character code " + std::to_string(ch) + " at offset " +
                        std::to_string(p) + " outside [48,111]");
      }
      if (5 * k >= 60) {
        throw Error(ErrorKind::kCorruptString,
                    "value overflows at offset " + std::to_string(p));
      }
      const std::int64_t c = ch - kCharOffset;
      x |= (c & 0x1f) << (5 * k);
      more = (c & 0x20) != 0;
      ++p;
      ++k;
      if (!more && (c & 0x10)) x |= static_cast<std::int64_t>(-1) * (std::int64_t{1} << (5 * k));
    }
    if (rle.counts.size() > 2) {
      x += static_cast<std::int64_t>(rle.counts[rle.counts.size() - 2]);
    }
    if (x < 0 || x > std::numeric_limits<std::uint32_t>::max()) {
      throw Error(ErrorKind::kCorruptString,
                  "decoded count " + std::to_string(x) + " out of range");
    }
    rle.counts.push_back(static_cast<std::uint32_t>(x));
  }
  validate_rle(rle);
  return rle;
}

std::uint64_t rle_area(const RleMask& rle) {
  std::uint64_t area = 0;
  for (std::size_t i = 1; i < rle.counts.size(); i += 2) area += rle.counts[i];
  return area;
}

BoundingBox rle_bbox(const RleMask& rle) {
  int xmin = std::numeric_limits<int>::max(), xmax = -1;
  int ymin = std::numeric_limits<int>::max(), ymax = -1;
  for_each_foreground_segment(rle, [&](int col, int r0, int r1) {
    xmin = std::min(xmin, col);
    xmax = std::max(xmax, col);
    ymin = std::min(ymin, r0);
    ymax = std::max(ymax, r1 - 1);
  });
  if (xmax < 0) return {};
  return {static_cast<double>(xmin), static_cast<double>(ymin),
          static_cast<double>(xmax - xmin + 1), static_cast<double>(ymax - ymin + 1)};
}

double rle_iou(const RleMask& a, const RleMask& b, bool crowd) {
  check_same_shape(a, b);
  std::uint64_t inter = 0;
  std::size_t ia = 0, ib = 0;
  std::uint64_t left_a = a.counts.empty() ? 0 : a.counts[0];
  std::uint64_t left_b = b.counts.empty() ? 0 : b.counts[0];
  while (ia < a.counts.size() && ib < b.counts.size()) {
    const std::uint64_t step = std::min(left_a, left_b);
    if ((ia % 2 == 1) && (ib % 2 == 1)) inter += step;
    left_a -= step;
    left_b -= step;
    while (left_a == 0 && ++ia < a.counts.size()) left_a = a.counts[ia];
    while (left_b == 0 && ++ib < b.counts.size()) left_b = b.counts[ib];
  }
  const std::uint64_t area_a = rle_area(a);
  const std::uint64_t area_b = rle_area(b);
  const std::uint64_t uni = crowd ? area_a : area_a + area_b - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double bbox_iou(const BoundingBox& a, const BoundingBox& b) {
  if (a.w <= 0 || a.h <= 0 || b.w <= 0 || b.h <= 0) return 0.0;
  const double iw = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double ih = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

Point2D centroid(const RleMask& rle) {
  double sx = 0.0, sy = 0.0;
  std::uint64_t n = 0;
  for_each_foreground_segment(rle, [&](int col, int r0, int r1) {
    const auto len = static_cast<std::uint64_t>(r1 - r0);
    sx += static_cast<double>(len) * (col + 0.5);
    // Sum of (r + 0.5) for r in [r0, r1).
    sy += static_cast<double>(len) * (static_cast<double>(r0 + r1 - 1) / 2.0 + 0.5);
    n += len;
  });
  if (n == 0) throw Error(ErrorKind::kEmptySegmentation, "centroid of an empty mask");
  return {sx / static_cast<double>(n), sy / static_cast<double>(n)};
}

}  // namespace segtrack

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "detail/random.hpp"
#include "segtrack/error.hpp"
#include "segtrack/formats.hpp"

namespace segtrack {

namespace {

CocoDataset subset(const CocoDataset& ds, std::vector<std::size_t> positions) {
  std::sort(positions.begin(), positions.end());
  CocoDataset part;
  part.categories = ds.categories;
  std::map<std::int64_t, std::int64_t> new_image_id;
  for (std::size_t pos : positions) {
    CocoImage im = ds.images[pos];
    const auto id = static_cast<std::int64_t>(part.images.size()) + 1;
    new_image_id[im.id] = id;
    im.id = id;
    part.images.push_back(std::move(im));
  }
  for (const CocoAnnotation& a : ds.annotations) {
    const auto it = new_image_id.find(a.image_id);
    if (it == new_image_id.end()) continue;
    CocoAnnotation copy = a;
    copy.id = static_cast<std::int64_t>(part.annotations.size()) + 1;
    copy.image_id = it->second;
    part.annotations.push_back(std::move(copy));
  }
  return part;
}

}  // namespace

SplitResult split_dataset(const CocoDataset& ds, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "split ratio must lie in (0, 1)");
  }
  const std::size_t n = ds.images.size();
  if (n < 2) {
    throw Error(ErrorKind::kTooSmall,
                "need at least 2 images to split, got " + std::to_string(n));
  }
  ds.validate();

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  detail::Rng rng(seed);
  rng.shuffle(order);

  // Guard against products like 0.7 * 10 = 7.000000000000001.
  const auto n_train = static_cast<std::size_t>(
      std::ceil(ratio * static_cast<double>(n) - 1e-9));
  SplitResult out;
  out.seed = seed;
  out.ratio = ratio;
  out.train = subset(ds, {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train)});
  out.val = subset(ds, {order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end()});
  return out;
}

std::vector<std::int64_t> sample_frames(std::int64_t n_total, std::int64_t k,
                                        SamplingStrategy strategy) {
  if (k <= 0 || n_total <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "sample size and frame count must be > 0");
  }
  if (k > n_total) {
    throw Error(ErrorKind::kInvalidArgument,
                "cannot sample " + std::to_string(k) + " of " + std::to_string(n_total) +
                    " frames");
  }
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(k));
  if (strategy.kind == SamplingStrategy::Kind::kUniform) {
    for (std::int64_t i = 0; i < k; ++i) out.push_back(i * n_total / k);
    return out;
  }
  // Floyd's sampling without replacement.
  detail::Rng rng(strategy.seed);
  std::set<std::int64_t> chosen;
  for (std::int64_t j = n_total - k; j < n_total; ++j) {
    const auto t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j) + 1));
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  out.assign(chosen.begin(), chosen.end());
  return out;
}

}  // namespace segtrack

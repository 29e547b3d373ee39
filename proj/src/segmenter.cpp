#include "seedseg/segmenter.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <string>

#include "seedseg/error.hpp"
#include "seedseg/neighborhood.hpp"

namespace seedseg {

PairDecider mlp_decider(const Mlp& mlp) {
  if (mlp.norm() == kDefaultNorm) {
    return [mlp](const PairInput& in) { return decide(mlp, in); };
  }
  const double scale = kDefaultNorm / mlp.norm();
  return [mlp, scale](const PairInput& in) {
    PairInput scaled = in;
    for (double& v : scaled) v *= scale;
    return decide(mlp, scaled);
  };
}

std::size_t grow_segment(const Image& img, LabelMap& labels, PixelCoord seed, Label label,
                         const PairDecider& decider, GrowStats& stats) {
  if (img.width() != labels.width() || img.height() != labels.height()) {
    throw Error(ErrorCode::DimensionMismatch, "label map and image differ in size");
  }
  if (!img.contains(seed)) {
    throw Error(ErrorCode::OutOfBounds, "seed (" + std::to_string(seed.x) + "," +
                                            std::to_string(seed.y) + ") is outside the image");
  }
  if (labels.at(seed) != 0) throw Error(ErrorCode::AlreadyLabeled, "seed is already labeled");
  if (label != labels.max_label() + 1) {
    throw Error(ErrorCode::InvalidArgument, "label must be " +
                                                std::to_string(labels.max_label() + 1));
  }

  std::deque<PixelCoord> queue{seed};
  labels.set(seed, label);
  std::size_t grown = 1;
  while (!queue.empty()) {
    const PixelCoord v = queue.front();
    queue.pop_front();
    const Rgb inside = img.at(v);
    for (const PixelCoord off : kNeighbors8) {
      const PixelCoord u{v.x + off.x, v.y + off.y};
      if (!img.contains(u) || labels.at(u) != 0) continue;
      ++stats.evaluations;
      if (decider(make_input(inside, img.at(u))) == Decision::Join) {
        labels.set(u, label);
        queue.push_back(u);
        ++grown;
      }
    }
  }

  ++stats.segments;
  if (stats.sizes.size() <= label) stats.sizes.resize(static_cast<std::size_t>(label) + 1, 0);
  stats.sizes[label] = grown;
  return grown;
}

AutoSegmentation segment_auto(const Image& img, const PairDecider& decider,
                              std::uint64_t rng_seed) {
  AutoSegmentation out{LabelMap(img.width(), img.height()), {}};
  // Walking a uniform permutation and skipping labeled pixels picks each seed uniformly
  // among the pixels still unlabeled at that moment.
  std::vector<std::uint32_t> order(img.size());
  std::iota(order.begin(), order.end(), 0u);
  std::mt19937_64 rng(rng_seed);
  std::shuffle(order.begin(), order.end(), rng);

  for (const std::uint32_t i : order) {
    if (out.labels[i] != 0) continue;
    grow_segment(img, out.labels, img.coord(i), out.labels.max_label() + 1, decider, out.stats);
  }
  return out;
}

PointSegmentation segment_from_point(const Image& img, const PairDecider& decider,
                                     PixelCoord at) {
  if (!img.contains(at)) {
    throw Error(ErrorCode::OutOfBounds, "point (" + std::to_string(at.x) + "," +
                                            std::to_string(at.y) + ") is outside the image");
  }
  LabelMap labels(img.width(), img.height());
  PointSegmentation out;
  const std::size_t n = grow_segment(img, labels, at, 1, decider, out.stats);
  out.mask.reserve(n);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) out.mask.push_back(img.coord(i));
  }
  return out;
}

std::map<Label, std::size_t> segment_stats(const LabelMap& labels) {
  std::map<Label, std::size_t> sizes;
  for (const Label l : labels.labels()) ++sizes[l];
  return sizes;
}

}  // namespace seedseg

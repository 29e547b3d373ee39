#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "seedseg/image.hpp"
#include "seedseg/perceptron.hpp"

namespace seedseg {

/// Decides whether the second pixel of a normalized pair joins the segment holding the
/// first. Must be deterministic.
using PairDecider = std::function<Decision(const PairInput&)>;

/// Decider backed by a copy of `mlp`.
PairDecider mlp_decider(const Mlp& mlp);

struct GrowStats {
  /// Decider calls.
  std::uint64_t evaluations = 0;
  std::size_t segments = 0;
  /// Pixel count per label; index 0 is unused.
  std::vector<std::size_t> sizes;
};

/// Grows segment `label` from `seed` over unlabeled pixels with a FIFO work queue.
/// Every newly labeled pixel is dequeued once and its unlabeled 8-neighbors are offered to
/// the decider as (labeled, candidate). `label` must be labels.max_label() + 1.
/// Returns the number of pixels labeled.
std::size_t grow_segment(const Image& img, LabelMap& labels, PixelCoord seed, Label label,
                         const PairDecider& decider, GrowStats& stats);

struct AutoSegmentation {
  LabelMap labels;
  GrowStats stats;
};

/// Grows segments from uniformly chosen unlabeled pixels until none remain.
/// Labels come out as 1..k.
AutoSegmentation segment_auto(const Image& img, const PairDecider& decider,
                              std::uint64_t rng_seed);

struct PointSegmentation {
  /// Row-major order.
  std::vector<PixelCoord> mask;
  GrowStats stats;
};

PointSegmentation segment_from_point(const Image& img, const PairDecider& decider,
                                     PixelCoord at);

/// Pixel count per label, including 0 when present.
std::map<Label, std::size_t> segment_stats(const LabelMap& labels);

}  // namespace seedseg

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "seedseg/image.hpp"
#include "seedseg/perceptron.hpp"
#include "seedseg/trainset.hpp"

namespace seedseg {

struct PipelineConfig {
  NoiseConfig noise;
  TrainConfig train;
  int hidden_size = 50;
  std::uint64_t init_seed = 0;
  std::uint64_t auto_seed = 0;

  /// Derives every stage seed from one value: noise = s, init = s + 1, shuffle = s + 2,
  /// auto = s + 3.
  static PipelineConfig with_seed(std::uint64_t seed);
};

struct TrainedModel {
  Mlp mlp;
  TrainReport report;
  /// Number of training samples built from the image.
  std::size_t pairs = 0;
  double seconds = 0.0;
};

/// Builds the impulse-noise training set from `img`, initializes and trains the perceptron.
TrainedModel train_on_image(const Image& img, const PipelineConfig& cfg);

/// Row runs of a mask as {y, x_start, length}, sorted by row then column.
std::vector<std::array<int, 3>> encode_runs(std::vector<PixelCoord> mask);
std::vector<PixelCoord> decode_runs(const std::vector<std::array<int, 3>>& runs);

}  // namespace seedseg

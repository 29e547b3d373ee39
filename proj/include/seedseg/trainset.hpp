#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seedseg/image.hpp"
#include "seedseg/perceptron.hpp"

namespace seedseg {

struct NoiseConfig {
  /// Percentage of pixels damaged per run. Values above kRecommendedMaxNoise are accepted
  /// but callers should warn.
  double p = 10.0;
  int runs = 100;
  std::uint64_t rng_seed = 0;
};

inline constexpr double kRecommendedMaxNoise = 10.0;

/// Throws InvalidArgument unless 0 < p <= 100 and runs >= 1.
void validate(const NoiseConfig& cfg);

/// floor(p * W * H / 100)
std::size_t damaged_count(const Image& img, double p);

struct CorruptionResult {
  Image corrupted;
  /// Distinct pixels in selection order.
  std::vector<PixelCoord> damaged;
};

/// Replaces every channel of floor(p*W*H/100) randomly chosen pixels with a value from the
/// opposite half of the palette: > 128 maps into [0, 127], otherwise into [129, 255].
/// `run_index` salts the generator so each run differs deterministically.
CorruptionResult corrupt_impulse(const Image& img, const NoiseConfig& cfg, int run_index);

/// Runs `cfg.runs` corruptions. For every damaged pixel d and each in-bounds 8-neighbor u
/// it emits Reject (u', d'), (d', u') from corrupted colors and Join (u, d), (d, u) from
/// original colors, then shuffles the whole set.
std::vector<PairSample> build_training_set(const Image& img, const NoiseConfig& cfg);

/// Debug dump: one line per sample, six normalized inputs then J or R, tab separated.
std::string samples_to_tsv(std::span<const PairSample> samples, double norm = kDefaultNorm);

}  // namespace seedseg

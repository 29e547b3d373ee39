#include "seedseg/trainset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "seedseg/error.hpp"
#include "seedseg/neighborhood.hpp"

namespace seedseg {

namespace {

constexpr std::uint32_t kCorruptStream = 1;
constexpr std::uint32_t kShuffleStream = 2;

std::mt19937_64 stream(std::uint64_t seed, std::uint32_t kind, std::uint32_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    kind, index};
  return std::mt19937_64(seq);
}

std::uint8_t opposite_half(std::uint8_t v, std::mt19937_64& rng) {
  constexpr int half = kPaletteDepth / 2;
  if (v > half) return static_cast<std::uint8_t>(std::uniform_int_distribution<int>(0, half - 1)(rng));
  return static_cast<std::uint8_t>(
      std::uniform_int_distribution<int>(half + 1, kPaletteDepth - 1)(rng));
}

}  // namespace

void validate(const NoiseConfig& cfg) {
  if (!(cfg.p > 0.0) || !(cfg.p <= 100.0)) {
    throw Error(ErrorCode::InvalidArgument, "noise percentage must lie in (0, 100]");
  }
  if (cfg.runs < 1) throw Error(ErrorCode::InvalidArgument, "noise runs must be >= 1");
}

std::size_t damaged_count(const Image& img, double p) {
  return static_cast<std::size_t>(std::floor(p * static_cast<double>(img.size()) / 100.0));
}

CorruptionResult corrupt_impulse(const Image& img, const NoiseConfig& cfg, int run_index) {
  validate(cfg);
  if (run_index < 0) throw Error(ErrorCode::InvalidArgument, "run index must be >= 0");
  const std::size_t count = damaged_count(img, cfg.p);
  if (count == 0) {
    throw Error(ErrorCode::InvalidArgument,
                "image too small: " + std::to_string(cfg.p) + "% of " +
                    std::to_string(img.size()) + " pixels damages none");
  }

  auto rng = stream(cfg.rng_seed, kCorruptStream, static_cast<std::uint32_t>(run_index));
  std::vector<std::uint32_t> order(img.size());
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);

  CorruptionResult result{img, {}};
  result.damaged.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rgb& px = result.corrupted[order[i]];
    px.r = opposite_half(px.r, rng);
    px.g = opposite_half(px.g, rng);
    px.b = opposite_half(px.b, rng);
    result.damaged.push_back(img.coord(order[i]));
  }
  return result;
}

std::vector<PairSample> build_training_set(const Image& img, const NoiseConfig& cfg) {
  validate(cfg);
  if (img.size() < 2) throw Error(ErrorCode::InvalidArgument, "image needs at least 2 pixels");

  std::vector<PairSample> samples;
  samples.reserve(damaged_count(img, cfg.p) * 32 * static_cast<std::size_t>(cfg.runs));
  for (int run = 0; run < cfg.runs; ++run) {
    const CorruptionResult cr = corrupt_impulse(img, cfg, run);
    for (const PixelCoord d : cr.damaged) {
      const Rgb d_orig = img.at(d);
      const Rgb d_noisy = cr.corrupted.at(d);
      for (const PixelCoord off : kNeighbors8) {
        const PixelCoord u{d.x + off.x, d.y + off.y};
        if (!img.contains(u)) continue;
        const Rgb u_orig = img.at(u);
        const Rgb u_noisy = cr.corrupted.at(u);
        samples.push_back({u_noisy, d_noisy, Decision::Reject});
        samples.push_back({d_noisy, u_noisy, Decision::Reject});
        samples.push_back({u_orig, d_orig, Decision::Join});
        samples.push_back({d_orig, u_orig, Decision::Join});
      }
    }
  }
  auto rng = stream(cfg.rng_seed, kShuffleStream, 0);
  std::shuffle(samples.begin(), samples.end(), rng);
  return samples;
}

std::string samples_to_tsv(std::span<const PairSample> samples, double norm) {
  std::string out;
  out.reserve(samples.size() * 64);
  char buf[32];
  for (const PairSample& s : samples) {
    for (double v : s.input(norm)) {
      const int n = std::snprintf(buf, sizeof buf, "%.17g\t", v);
      out.append(buf, static_cast<std::size_t>(n));
    }
    out += s.target == Decision::Join ? "J\n" : "R\n";
  }
  return out;
}

}  // namespace seedseg

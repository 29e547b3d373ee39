#include "seedseg/pipeline.hpp"

#include <algorithm>
#include <chrono>

namespace seedseg {

PipelineConfig PipelineConfig::with_seed(std::uint64_t seed) {
  PipelineConfig cfg;
  cfg.noise.rng_seed = seed;
  cfg.init_seed = seed + 1;
  cfg.train.shuffle_seed = seed + 2;
  cfg.auto_seed = seed + 3;
  return cfg;
}

TrainedModel train_on_image(const Image& img, const PipelineConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<PairSample> samples = build_training_set(img, cfg.noise);
  auto [mlp, report] = train(init_mlp(cfg.hidden_size, cfg.init_seed), samples, cfg.train);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return {std::move(mlp), report, samples.size(), elapsed.count()};
}

std::vector<std::array<int, 3>> encode_runs(std::vector<PixelCoord> mask) {
  std::sort(mask.begin(), mask.end());
  mask.erase(std::unique(mask.begin(), mask.end()), mask.end());
  std::vector<std::array<int, 3>> runs;
  for (const PixelCoord& p : mask) {
    if (!runs.empty()) {
      auto& last = runs.back();
      if (last[0] == p.y && last[1] + last[2] == p.x) {
        ++last[2];
        continue;
      }
    }
    runs.push_back({p.y, p.x, 1});
  }
  return runs;
}

std::vector<PixelCoord> decode_runs(const std::vector<std::array<int, 3>>& runs) {
  std::vector<PixelCoord> mask;
  for (const auto& [y, x, len] : runs) {
    for (int i = 0; i < len; ++i) mask.push_back({x + i, y});
  }
  return mask;
}

}  // namespace seedseg

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seedseg/image.hpp"

namespace seedseg {

enum class Decision : std::uint8_t { Reject = 0, Join = 1 };

/// Normalized color pair: first pixel r,g,b then second pixel r,g,b.
using PairInput = std::array<double, 6>;

inline constexpr double kDefaultNorm = 255.0;

inline PairInput make_input(Rgb first, Rgb second, double norm = kDefaultNorm) {
  return {first.r / norm, first.g / norm, first.b / norm,
          second.r / norm, second.g / norm, second.b / norm};
}

/// Three-layer perceptron with 6 inputs, a sigmoid hidden layer and two sigmoid outputs
/// (join, reject).
///
/// All parameters live in one contiguous buffer:
///   [ w1 (6 x H, input-major) | b1 (H) | w2 (2 x H, output-major) | b2 (2) ]
/// The input-major w1 layout keeps the hidden-layer loops contiguous over H.
class Mlp {
 public:
  static constexpr int kInputs = 6;
  static constexpr int kOutputs = 2;
  static constexpr int kJoin = 0;
  static constexpr int kReject = 1;

  /// Zero-initialized model.
  explicit Mlp(int hidden_size = 50, double norm = kDefaultNorm);

  int hidden_size() const noexcept { return hidden_; }
  double norm() const noexcept { return norm_; }
  std::size_t parameter_count() const noexcept { return params_.size(); }

  /// Weight from input c to hidden unit h.
  double& w1(int h, int c) { return params_[w1_index(h, c)]; }
  double w1(int h, int c) const { return params_[w1_index(h, c)]; }
  double& b1(int h) { return params_[b1_index(h)]; }
  double b1(int h) const { return params_[b1_index(h)]; }
  /// Weight from hidden unit h to output k.
  double& w2(int k, int h) { return params_[w2_index(k, h)]; }
  double w2(int k, int h) const { return params_[w2_index(k, h)]; }
  double& b2(int k) { return params_[b2_index(k)]; }
  double b2(int k) const { return params_[b2_index(k)]; }

  std::size_t w1_index(int h, int c) const noexcept {
    return static_cast<std::size_t>(c) * hidden_ + h;
  }
  std::size_t b1_index(int h) const noexcept { return 6 * static_cast<std::size_t>(hidden_) + h; }
  std::size_t w2_index(int k, int h) const noexcept {
    return 7 * static_cast<std::size_t>(hidden_) + static_cast<std::size_t>(k) * hidden_ + h;
  }
  std::size_t b2_index(int k) const noexcept { return 9 * static_cast<std::size_t>(hidden_) + k; }

  std::span<double> params() noexcept { return params_; }
  std::span<const double> params() const noexcept { return params_; }

  friend bool operator==(const Mlp&, const Mlp&) = default;

 private:
  int hidden_;
  double norm_;
  std::vector<double> params_;
};

/// Weights and biases drawn independently from U[-0.5, 0.5] with a seeded generator.
Mlp init_mlp(int hidden_size, std::uint64_t rng_seed);

struct Outputs {
  double join;
  double reject;
};

Outputs forward(const Mlp& mlp, const PairInput& input);

/// Join iff out_join > out_reject; an exact tie rejects.
Decision decide(const Mlp& mlp, const PairInput& input);

struct Sample {
  PairInput input;
  Decision target;
};

/// A sample stored as raw colors; normalized by the model's norm when used.
struct PairSample {
  Rgb first;
  Rgb second;
  Decision target;

  PairInput input(double norm = kDefaultNorm) const { return make_input(first, second, norm); }
};

struct TrainConfig {
  int epochs = 30;
  double learning_rate = 0.1;
  std::uint64_t shuffle_seed = 0;
};

struct TrainReport {
  int epochs_run = 0;
  /// Mean per-sample loss over the final epoch, measured before each update.
  double final_mean_loss = 0.0;
  std::size_t samples = 0;
};

/// Per-sample loss: half the summed squared error over the two outputs against one-hot
/// targets, i.e. the mean over outputs.
double sample_loss(const Mlp& mlp, const PairInput& input, Decision target);

/// Writes d(sample_loss)/d(params) into `grad` (sized parameter_count()) and returns the loss.
double backprop(const Mlp& mlp, const PairInput& input, Decision target, std::span<double> grad);

/// Plain per-sample SGD with a seeded reshuffle before every epoch.
std::pair<Mlp, TrainReport> train(Mlp mlp, std::span<const Sample> samples,
                                  const TrainConfig& cfg);
std::pair<Mlp, TrainReport> train(Mlp mlp, std::span<const PairSample> samples,
                                  const TrainConfig& cfg);

/// Model text format:
///   SEEDSEG-MLP 1
///   dims 6 <H> 2 norm 255
///   H lines of 6 values (w1 rows), 1 line of H (b1), 2 lines of H (w2 rows), 1 line of 2 (b2)
std::string serialize_model(const Mlp& mlp);
Mlp parse_model(std::string_view text);

}  // namespace seedseg

#pragma once

// Test-only reference implementations. They share no code path with the library beyond the
// plain data types so they can serve as independent oracles.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "seedseg/image.hpp"
#include "seedseg/perceptron.hpp"

namespace oracle {

using seedseg::Decision;
using seedseg::Image;
using seedseg::Mlp;
using seedseg::PixelCoord;
using seedseg::Rgb;

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Forward {
  std::vector<double> hidden;
  double join;
  double reject;
};

// Scalar 6-H-2 forward pass written straight from the layer definitions.
inline Forward forward(const Mlp& m, const std::array<double, 6>& in) {
  Forward f;
  const int H = m.hidden_size();
  f.hidden.resize(H);
  for (int h = 0; h < H; ++h) {
    double z = m.b1(h);
    for (int c = 0; c < 6; ++c) z += m.w1(h, c) * in[c];
    f.hidden[h] = sigmoid(z);
  }
  double zj = m.b2(0);
  double zr = m.b2(1);
  for (int h = 0; h < H; ++h) {
    zj += m.w2(0, h) * f.hidden[h];
    zr += m.w2(1, h) * f.hidden[h];
  }
  f.join = sigmoid(zj);
  f.reject = sigmoid(zr);
  return f;
}

inline double loss(const Mlp& m, const std::array<double, 6>& in, Decision t) {
  const Forward f = oracle::forward(m, in);
  const double tj = t == Decision::Join ? 1.0 : 0.0;
  return 0.5 * ((f.join - tj) * (f.join - tj) + (f.reject - (1 - tj)) * (f.reject - (1 - tj)));
}

// Plain SGD with the same shuffle schedule the trainer documents: a std::mt19937_64 seeded
// with the shuffle seed, std::shuffle over sample indices before every epoch.
inline Mlp reference_train(Mlp m, const std::vector<seedseg::Sample>& samples, int epochs,
                           double lr, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0u);
  const int H = m.hidden_size();
  for (int e = 0; e < epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::uint32_t i : order) {
      const auto& s = samples[i];
      const Forward f = oracle::forward(m, s.input);
      const double tj = s.target == Decision::Join ? 1.0 : 0.0;
      const double dj = (f.join - tj) * f.join * (1 - f.join);
      const double dr = (f.reject - (1 - tj)) * f.reject * (1 - f.reject);
      std::vector<double> dh(H);
      for (int h = 0; h < H; ++h) {
        const double a = f.hidden[h];
        dh[h] = (dj * m.w2(0, h) + dr * m.w2(1, h)) * a * (1 - a);
      }
      for (int h = 0; h < H; ++h) {
        m.w2(0, h) -= lr * dj * f.hidden[h];
        m.w2(1, h) -= lr * dr * f.hidden[h];
        m.b1(h) -= lr * dh[h];
        for (int c = 0; c < 6; ++c) m.w1(h, c) -= lr * dh[h] * s.input[c];
      }
      m.b2(0) -= lr * dj;
      m.b2(1) -= lr * dr;
    }
  }
  return m;
}

// Union-find over 8-adjacent pairs joined by a symmetric predicate.
class Components {
 public:
  Components(const Image& img, const std::function<bool(Rgb, Rgb)>& joined)
      : width_(img.width()), parent_(img.size()) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const PixelCoord u{x + dx, y + dy};
            if ((dx == 0 && dy == 0) || !img.contains(u)) continue;
            if (joined(img.at({x, y}), img.at(u))) unite(img.index({x, y}), img.index(u));
          }
        }
      }
    }
  }

  std::size_t root(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }

  // Members of the component containing p, row-major.
  std::vector<PixelCoord> component(PixelCoord p) {
    const std::size_t r = root(static_cast<std::size_t>(p.y) * width_ + p.x);
    std::vector<PixelCoord> out;
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      if (root(i) == r) out.push_back({static_cast<int>(i % width_), static_cast<int>(i / width_)});
    }
    return out;
  }

  std::size_t count() {
    std::size_t n = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) n += root(i) == i;
    return n;
  }

 private:
  void unite(std::size_t a, std::size_t b) { parent_[root(a)] = root(b); }

  std::size_t width_;
  std::vector<std::size_t> parent_;
};

inline int max_channel_diff(Rgb a, Rgb b) {
  return std::max({std::abs(a.r - b.r), std::abs(a.g - b.g), std::abs(a.b - b.b)});
}

inline Image random_image(int w, int h, std::mt19937_64& rng) {
  Image img(w, h);
  std::uniform_int_distribution<int> d(0, 255);
  for (auto& p : img.pixels()) {
    p = {static_cast<std::uint8_t>(d(rng)), static_cast<std::uint8_t>(d(rng)),
         static_cast<std::uint8_t>(d(rng))};
  }
  return img;
}

// Blocky random image: a few flat-ish patches so thresholded components are non-trivial.
inline Image patchy_image(int w, int h, std::mt19937_64& rng, int levels = 4, int jitter = 6) {
  Image img(w, h);
  std::uniform_int_distribution<int> lvl(0, levels - 1);
  std::uniform_int_distribution<int> jit(0, jitter);
  const int bs = 3;
  std::vector<int> block((w / bs + 1) * (h / bs + 1));
  for (auto& b : block) b = lvl(rng);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int base = block[(y / bs) * (w / bs + 1) + x / bs] * (200 / levels) + 20;
      img.at({x, y}) = {static_cast<std::uint8_t>(base + jit(rng)),
                        static_cast<std::uint8_t>(base + jit(rng)),
                        static_cast<std::uint8_t>(base + jit(rng))};
    }
  }
  return img;
}

// Channels of a normalized pair, back in 0..255.
inline std::pair<Rgb, Rgb> colors(const std::array<double, 6>& in) {
  auto ch = [&](int i) { return static_cast<std::uint8_t>(std::lround(in[i] * 255.0)); };
  return {{ch(0), ch(1), ch(2)}, {ch(3), ch(4), ch(5)}};
}

}  // namespace oracle

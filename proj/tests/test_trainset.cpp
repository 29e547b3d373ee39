#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "seedseg/error.hpp"
#include "seedseg/trainset.hpp"

using namespace seedseg;

namespace {

bool in_opposite_half(std::uint8_t before, std::uint8_t after) {
  return before > 128 ? after <= 127 : after >= 129;
}

std::size_t count_target(const std::vector<PairSample>& s, Decision t) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [t](const PairSample& p) { return p.target == t; }));
}

}  // namespace

TEST_CASE("impulse noise flips every channel into the opposite half") {
  NoiseConfig cfg{100.0, 1, 5};
  for (int run = 0; run < 20; ++run) {
    const Image bright(1, 1, Rgb{200, 200, 200});
    const Rgb b = corrupt_impulse(bright, cfg, run).corrupted.at({0, 0});
    CHECK(b.r <= 127);
    CHECK(b.g <= 127);
    CHECK(b.b <= 127);

    const Image mid(1, 1, Rgb{128, 128, 128});
    const Rgb m = corrupt_impulse(mid, cfg, run).corrupted.at({0, 0});
    CHECK(m.r >= 129);
    CHECK(m.g >= 129);
    CHECK(m.b >= 129);
  }
}

TEST_CASE("corruption damages floor(p*W*H/100) distinct pixels") {
  const Image img(10, 10, Rgb{50, 60, 70});
  const CorruptionResult cr = corrupt_impulse(img, {10.0, 1, 3}, 0);
  CHECK(cr.damaged.size() == 10);
  CHECK(std::set<PixelCoord>(cr.damaged.begin(), cr.damaged.end()).size() == 10);

  CHECK(damaged_count(Image(256, 256), 10.0) == 6553);
  CHECK(damaged_count(Image(3, 3), 50.0) == 4);
}

TEST_CASE("corruption leaves undamaged pixels and respects channel halves") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const Image img = oracle::random_image(1 + rng() % 20, 1 + rng() % 20, rng);
    const NoiseConfig cfg{1.0 + static_cast<double>(rng() % 100), 1, rng()};
    if (damaged_count(img, cfg.p) == 0) continue;
    const CorruptionResult cr = corrupt_impulse(img, cfg, static_cast<int>(rng() % 5));
    CHECK(cr.damaged.size() == damaged_count(img, cfg.p));
    const std::set<PixelCoord> hit(cr.damaged.begin(), cr.damaged.end());
    CHECK(hit.size() == cr.damaged.size());
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        const Rgb a = img.at({x, y});
        const Rgb b = cr.corrupted.at({x, y});
        if (hit.count({x, y})) {
          CHECK(in_opposite_half(a.r, b.r));
          CHECK(in_opposite_half(a.g, b.g));
          CHECK(in_opposite_half(a.b, b.b));
        } else {
          CHECK(a == b);
        }
      }
    }
  }
}

TEST_CASE("corruption is deterministic per seed and run") {
  std::mt19937_64 rng(1);
  const Image img = oracle::random_image(16, 16, rng);
  const NoiseConfig cfg{10.0, 1, 77};
  const CorruptionResult a = corrupt_impulse(img, cfg, 3);
  const CorruptionResult b = corrupt_impulse(img, cfg, 3);
  CHECK(a.corrupted == b.corrupted);
  CHECK(a.damaged == b.damaged);
  CHECK_FALSE(corrupt_impulse(img, cfg, 4).damaged == a.damaged);
  CHECK_FALSE(corrupt_impulse(img, {10.0, 1, 78}, 3).damaged == a.damaged);
}

TEST_CASE("noise configuration is validated") {
  const Image img(4, 4);
  CHECK_THROWS_AS(corrupt_impulse(img, {0.0, 1, 0}, 0), Error);
  CHECK_THROWS_AS(corrupt_impulse(img, {101.0, 1, 0}, 0), Error);
  CHECK_THROWS_AS(corrupt_impulse(img, {10.0, 1, 0}, -1), Error);
  // 5% of 16 pixels rounds down to nothing.
  CHECK_THROWS_AS(corrupt_impulse(img, {5.0, 1, 0}, 0), Error);
  CHECK_THROWS_AS(build_training_set(img, {10.0, 0, 0}), Error);
  CHECK_THROWS_AS(build_training_set(Image(1, 1), {100.0, 1, 0}), Error);
}

TEST_CASE("2x2 image at 25 percent yields 12 balanced samples") {
  const Image img(2, 2, Rgb{40, 90, 140});
  const auto samples = build_training_set(img, {25.0, 1, 9});
  CHECK(samples.size() == 12);
  CHECK(count_target(samples, Decision::Join) == 6);
  CHECK(count_target(samples, Decision::Reject) == 6);
  for (const PairSample& s : samples) {
    if (s.target == Decision::Join) {
      CHECK(s.first == Rgb{40, 90, 140});
      CHECK(s.second == Rgb{40, 90, 140});
    } else {
      // Exactly one side of a reject pair is the corrupted pixel.
      CHECK((s.first == Rgb{40, 90, 140}) != (s.second == Rgb{40, 90, 140}));
    }
  }
}

TEST_CASE("training set structure on random images") {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 10; ++trial) {
    const int w = 3 + static_cast<int>(rng() % 10);
    const int h = 3 + static_cast<int>(rng() % 10);
    const Image img = oracle::random_image(w, h, rng);
    const NoiseConfig cfg{10.0 + static_cast<double>(rng() % 20), 1 + static_cast<int>(rng() % 4), rng()};

    // Expected count: 4 samples per (damaged pixel, in-bounds neighbor).
    std::size_t expected = 0;
    for (int run = 0; run < cfg.runs; ++run) {
      const CorruptionResult cr = corrupt_impulse(img, cfg, run);
      for (const PixelCoord d : cr.damaged) {
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const PixelCoord u{d.x + dx, d.y + dy};
            if ((dx || dy) && img.contains(u)) expected += 4;
          }
        }
      }
    }
    const auto samples = build_training_set(img, cfg);
    CHECK(samples.size() == expected);
    CHECK(count_target(samples, Decision::Join) == expected / 2);
    CHECK(build_training_set(img, cfg).size() == samples.size());

    // Every join pair is a pair of original colors of 8-adjacent pixels.
    std::set<std::pair<Rgb, Rgb>, bool (*)(const std::pair<Rgb, Rgb>&, const std::pair<Rgb, Rgb>&)>
        adjacent([](const auto& a, const auto& b) {
          auto key = [](const std::pair<Rgb, Rgb>& p) {
            return std::array<int, 6>{p.first.r, p.first.g, p.first.b,
                                      p.second.r, p.second.g, p.second.b};
          };
          return key(a) < key(b);
        });
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const PixelCoord u{x + dx, y + dy};
            if ((dx || dy) && img.contains(u)) adjacent.insert({img.at({x, y}), img.at(u)});
          }
        }
      }
    }
    for (const PairSample& s : samples) {
      if (s.target == Decision::Join) CHECK(adjacent.count({s.first, s.second}) == 1);
    }
  }
}

TEST_CASE("training set is deterministic and shuffled") {
  std::mt19937_64 rng(2);
  const Image img = oracle::random_image(12, 12, rng);
  const NoiseConfig cfg{10.0, 3, 5};
  const auto a = build_training_set(img, cfg);
  const auto b = build_training_set(img, cfg);
  REQUIRE(a.size() == b.size());
  bool same = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = same && a[i].first == b[i].first && a[i].second == b[i].second && a[i].target == b[i].target;
  }
  CHECK(same);

  // Emission order would alternate R,R,J,J; a shuffled set must not.
  bool blocky = true;
  for (std::size_t i = 0; i + 4 <= a.size(); i += 4) {
    blocky = blocky && a[i].target == Decision::Reject && a[i + 1].target == Decision::Reject &&
             a[i + 2].target == Decision::Join && a[i + 3].target == Decision::Join;
  }
  CHECK_FALSE(blocky);
}

TEST_CASE("samples_to_tsv writes one labeled line per sample") {
  const std::vector<PairSample> s{{{255, 0, 51}, {0, 255, 102}, Decision::Join},
                                  {{0, 0, 0}, {255, 255, 255}, Decision::Reject}};
  const std::string tsv = samples_to_tsv(s);
  std::istringstream in(tsv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].back() == 'J');
  CHECK(lines[1].back() == 'R');
  CHECK(std::count(lines[0].begin(), lines[0].end(), '\t') == 6);
  std::istringstream fields(lines[0]);
  const double expected[] = {1, 0, 0.2, 0, 1, 0.4};
  for (double e : expected) {
    double v = -1;
    fields >> v;
    CHECK(v == doctest::Approx(e).epsilon(1e-15));
  }
}

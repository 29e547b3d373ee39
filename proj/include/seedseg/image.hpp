#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace seedseg {

/// Palette depth per channel.
inline constexpr int kPaletteDepth = 256;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// x is the column, y the row; origin top-left.
struct PixelCoord {
  int x = 0;
  int y = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
  friend auto operator<=>(const PixelCoord& a, const PixelCoord& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

/// Row-major W x H grid of 8-bit RGB pixels.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {});
  Image(int width, int height, std::vector<Rgb> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  bool contains(PixelCoord p) const noexcept {
    return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
  }
  std::size_t index(PixelCoord p) const noexcept {
    return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(p.x);
  }
  PixelCoord coord(std::size_t index) const noexcept {
    return {static_cast<int>(index % static_cast<std::size_t>(width_)),
            static_cast<int>(index / static_cast<std::size_t>(width_))};
  }

  const Rgb& at(PixelCoord p) const { return pixels_[index(p)]; }
  Rgb& at(PixelCoord p) { return pixels_[index(p)]; }
  const Rgb& operator[](std::size_t i) const { return pixels_[i]; }
  Rgb& operator[](std::size_t i) { return pixels_[i]; }

  std::span<const Rgb> pixels() const noexcept { return pixels_; }
  std::span<Rgb> pixels() noexcept { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

using Label = std::uint32_t;

/// Segment label per pixel. Label 0 marks a pixel not yet assigned to a segment.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return labels_.size(); }
  Label max_label() const noexcept { return max_label_; }

  Label at(PixelCoord p) const { return labels_[index(p)]; }
  Label operator[](std::size_t i) const { return labels_[i]; }

  /// Assigns a label and raises max_label when needed.
  void set(std::size_t i, Label label) {
    labels_[i] = label;
    if (label > max_label_) max_label_ = label;
  }
  void set(PixelCoord p, Label label) { set(index(p), label); }
  /// Declares labels up to k as allocated even if some are unused; never lowers the maximum.
  void reserve_labels(Label k) {
    if (k > max_label_) max_label_ = k;
  }

  std::span<const Label> labels() const noexcept { return labels_; }

  std::size_t index(PixelCoord p) const noexcept {
    return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(p.x);
  }
  bool contains(PixelCoord p) const noexcept {
    return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
  }

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  Label max_label_ = 0;
  std::vector<Label> labels_;
};

inline constexpr Rgb kContourColor{255, 0, 0};

/// Paints kContourColor over every pixel whose 4-neighborhood contains a different label.
Image render_contours(const Image& img, const LabelMap& labels);

/// Blends `color` into the masked pixels: round((1 - alpha) * orig + alpha * color).
Image overlay_mask(const Image& img, std::span<const PixelCoord> mask, Rgb color,
                   double alpha);

}  // namespace seedseg

#include "seedseg/image.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "seedseg/error.hpp"

namespace seedseg {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::BadDimensions, "image dimensions must be positive, got " +
                                              std::to_string(width) + "x" +
                                              std::to_string(height));
  }
}

std::uint8_t blend(std::uint8_t orig, std::uint8_t color, double alpha) {
  const double v = (1.0 - alpha) * orig + alpha * color;
  return static_cast<std::uint8_t>(std::lround(v));
}

}  // namespace

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  check_dims(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Image::Image(int width, int height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::DimensionMismatch, "pixel count does not match " +
                                                  std::to_string(width) + "x" +
                                                  std::to_string(height));
  }
}

LabelMap::LabelMap(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  labels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

Image render_contours(const Image& img, const LabelMap& labels) {
  if (img.width() != labels.width() || img.height() != labels.height()) {
    throw Error(ErrorCode::DimensionMismatch, "label map and image differ in size");
  }
  for (Label l : labels.labels()) {
    if (l == 0) throw Error(ErrorCode::ZeroLabel, "label map has unprocessed pixels");
  }

  Image out = img;
  const int w = img.width();
  const int h = img.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Label here = labels.at({x, y});
      const bool edge = (x > 0 && labels.at({x - 1, y}) != here) ||
                        (x + 1 < w && labels.at({x + 1, y}) != here) ||
                        (y > 0 && labels.at({x, y - 1}) != here) ||
                        (y + 1 < h && labels.at({x, y + 1}) != here);
      if (edge) out.at({x, y}) = kContourColor;
    }
  }
  return out;
}

Image overlay_mask(const Image& img, std::span<const PixelCoord> mask, Rgb color,
                   double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
  }
  for (const PixelCoord& p : mask) {
    if (!img.contains(p)) {
      throw Error(ErrorCode::OutOfBounds, "mask pixel (" + std::to_string(p.x) + "," +
                                              std::to_string(p.y) + ") is outside the image");
    }
  }
  Image out = img;
  for (const PixelCoord& p : mask) {
    const Rgb orig = img.at(p);
    out.at(p) = {blend(orig.r, color.r, alpha), blend(orig.g, color.g, alpha),
                 blend(orig.b, color.b, alpha)};
  }
  return out;
}

}  // namespace seedseg

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "seedseg/image.hpp"

namespace seedseg {

// Byte sequences are carried in std::string.

/// Binary PPM, magic P6, maxval 255 only.
Image load_ppm(std::string_view bytes);
std::string save_ppm(const Image& img);

/// Label-map text format:
///   SEEDSEG-LABELS 1
///   <W> <H> <k>
///   H rows of W space-separated labels
std::string save_smap(const LabelMap& labels);
LabelMap load_smap(std::string_view text);

/// Plain PBM (P1); 1 marks a pixel in the mask.
std::string save_pbm(int width, int height, const std::vector<PixelCoord>& mask);
/// Returns the set pixels in row-major order.
std::vector<PixelCoord> load_pbm(std::string_view text, int* width = nullptr,
                                 int* height = nullptr);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace seedseg

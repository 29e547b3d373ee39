#pragma once

#include <array>

#include "seedseg/image.hpp"

namespace seedseg {

/// 8-connected offsets in raster order around the center.
inline constexpr std::array<PixelCoord, 8> kNeighbors8{{
    {-1, -1}, {0, -1}, {1, -1},
    {-1, 0},           {1, 0},
    {-1, 1},  {0, 1},  {1, 1},
}};

}  // namespace seedseg

#ifndef EPIGRAPH_GRAYSCALE_HPP
#define EPIGRAPH_GRAYSCALE_HPP

#include <algorithm>
#include <cmath>

#include "epigraph/raster.hpp"

namespace epigraph {

/// BT.601 luma of one RGB triple, rounded half-up and clamped to [0,255].
inline std::uint8_t luma601(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  double y = 0.299 * r + 0.587 * g + 0.114 * b;
  long v = std::lround(y);
  return static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
}

inline GrayRaster to_grayscale(const RgbRaster& img) {
  GrayRaster out(img.width(), img.height());
  const auto& src = img.data();
  auto& dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i)
    dst[i] = luma601(src[3 * i], src[3 * i + 1], src[3 * i + 2]);
  return out;
}

}  // namespace epigraph

#endif  // EPIGRAPH_GRAYSCALE_HPP

#ifndef EPIGRAPH_FEATURES_HPP
#define EPIGRAPH_FEATURES_HPP

// The 2-D (mean, std) descriptor computed over text regions or whole images.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "epigraph/binarize.hpp"
#include "epigraph/errors.hpp"
#include "epigraph/raster.hpp"

namespace epigraph {

struct FeatureVector {
  double mean = 0.0;
  double stddev = 0.0;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Population mean/std of the gray values under the mask.
inline FeatureVector region_mean_std(const GrayRaster& img,
                                     const BinaryRaster& mask) {
  if (mask.width() != img.width() || mask.height() != img.height())
    throw std::invalid_argument("mask dimensions do not match image");
  std::uint64_t n = 0, sum = 0, sq = 0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (!mask.data()[i]) continue;
    std::uint64_t v = img.data()[i];
    ++n;
    sum += v;
    sq += v * v;
  }
  if (n == 0) throw EmptyMaskError();
  auto [mu, sigma] = detail::stats_from_sums(sum, sq, n);
  return {mu, sigma};
}

struct ImageFeatures {
  FeatureVector features;
  bool whole_image_fallback = false;  // set when an empty mask forced it
};

/// Per-image descriptor: masked pixels when a mask with foreground is given,
/// all pixels otherwise. An empty mask falls back to whole-image statistics
/// and flags the fallback instead of failing.
inline ImageFeatures image_features(
    const GrayRaster& img, const std::optional<BinaryRaster>& mask = {}) {
  if (mask && mask->foreground_count() > 0)
    return {region_mean_std(img, *mask), false};

  std::uint64_t sum = 0, sq = 0;
  for (std::uint8_t v : img.data()) {
    sum += v;
    sq += static_cast<std::uint64_t>(v) * v;
  }
  auto [mu, sigma] = detail::stats_from_sums(sum, sq, img.size());
  return {{mu, sigma}, mask.has_value()};
}

}  // namespace epigraph

#endif  // EPIGRAPH_FEATURES_HPP

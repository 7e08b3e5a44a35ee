#ifndef EPIGRAPH_RASTER_HPP
#define EPIGRAPH_RASTER_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "epigraph/errors.hpp"

namespace epigraph {

/// Side-length bound keeping 64-bit integral-image sums exact.
inline constexpr std::size_t kMaxRasterSide = 1u << 16;

namespace detail {

inline void check_raster_dims(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0)
    throw std::invalid_argument("raster dimensions must be positive");
  if (width > kMaxRasterSide || height > kMaxRasterSide)
    throw std::invalid_argument("raster side exceeds " +
                                std::to_string(kMaxRasterSide));
}

}  // namespace detail

/// Row-major 8-bit grayscale image.
class GrayRaster {
 public:
  GrayRaster(std::size_t width, std::size_t height, std::uint8_t fill = 0)
      : width_(width), height_(height) {
    detail::check_raster_dims(width, height);
    data_.assign(width * height, fill);
  }

  GrayRaster(std::size_t width, std::size_t height,
             std::vector<std::uint8_t> data)
      : width_(width), height_(height), data_(std::move(data)) {
    detail::check_raster_dims(width, height);
    if (data_.size() != width * height)
      throw std::invalid_argument("gray raster data length mismatch");
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  std::uint8_t at(std::size_t row, std::size_t col) const {
    return data_[row * width_ + col];
  }
  void set(std::size_t row, std::size_t col, std::uint8_t v) {
    data_[row * width_ + col] = v;
  }

  const std::vector<std::uint8_t>& data() const { return data_; }
  std::vector<std::uint8_t>& data() { return data_; }

  friend bool operator==(const GrayRaster&, const GrayRaster&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> data_;
};

/// Row-major interleaved 8-bit RGB image.
class RgbRaster {
 public:
  RgbRaster(std::size_t width, std::size_t height)
      : width_(width), height_(height) {
    detail::check_raster_dims(width, height);
    data_.assign(width * height * 3, 0);
  }

  RgbRaster(std::size_t width, std::size_t height,
            std::vector<std::uint8_t> data)
      : width_(width), height_(height), data_(std::move(data)) {
    detail::check_raster_dims(width, height);
    if (data_.size() != width * height * 3)
      throw std::invalid_argument("rgb raster data length mismatch");
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t pixel_count() const { return width_ * height_; }

  std::uint8_t red(std::size_t row, std::size_t col) const {
    return data_[(row * width_ + col) * 3];
  }
  std::uint8_t green(std::size_t row, std::size_t col) const {
    return data_[(row * width_ + col) * 3 + 1];
  }
  std::uint8_t blue(std::size_t row, std::size_t col) const {
    return data_[(row * width_ + col) * 3 + 2];
  }
  void set(std::size_t row, std::size_t col, std::uint8_t r, std::uint8_t g,
           std::uint8_t b) {
    std::size_t i = (row * width_ + col) * 3;
    data_[i] = r;
    data_[i + 1] = g;
    data_[i + 2] = b;
  }

  const std::vector<std::uint8_t>& data() const { return data_; }
  std::vector<std::uint8_t>& data() { return data_; }

  friend bool operator==(const RgbRaster&, const RgbRaster&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> data_;
};

/// Two-level image; 1 marks foreground text, 0 background.
class BinaryRaster {
 public:
  BinaryRaster(std::size_t width, std::size_t height, std::uint8_t fill = 0)
      : width_(width), height_(height) {
    detail::check_raster_dims(width, height);
    if (fill > 1) throw std::invalid_argument("binary fill must be 0 or 1");
    data_.assign(width * height, fill);
  }

  BinaryRaster(std::size_t width, std::size_t height,
               std::vector<std::uint8_t> data)
      : width_(width), height_(height), data_(std::move(data)) {
    detail::check_raster_dims(width, height);
    if (data_.size() != width * height)
      throw std::invalid_argument("binary raster data length mismatch");
    for (std::uint8_t v : data_)
      if (v > 1) throw std::invalid_argument("binary raster value not in {0,1}");
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  std::uint8_t at(std::size_t row, std::size_t col) const {
    return data_[row * width_ + col];
  }
  void set(std::size_t row, std::size_t col, std::uint8_t v) {
    data_[row * width_ + col] = v;
  }

  std::size_t foreground_count() const {
    std::size_t n = 0;
    for (std::uint8_t v : data_) n += v;
    return n;
  }

  const std::vector<std::uint8_t>& data() const { return data_; }
  std::vector<std::uint8_t>& data() { return data_; }

  friend bool operator==(const BinaryRaster&, const BinaryRaster&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> data_;
};

}  // namespace epigraph

#endif  // EPIGRAPH_RASTER_HPP

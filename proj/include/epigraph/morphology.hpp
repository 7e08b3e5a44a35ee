#ifndef EPIGRAPH_MORPHOLOGY_HPP
#define EPIGRAPH_MORPHOLOGY_HPP

// Binary morphology with zero padding outside the image, plus connected
// component labeling and speck removal.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "epigraph/raster.hpp"

namespace epigraph {

/// Offset-set probe for erosion/dilation. Offsets are (dy, dx).
class StructuringElement {
 public:
  explicit StructuringElement(std::vector<std::pair<int, int>> offsets)
      : offsets_(std::move(offsets)) {
    if (offsets_.empty())
      throw std::invalid_argument("structuring element must be non-empty");
  }

  static StructuringElement box(int size) {
    check_odd(size);
    int half = size / 2;
    std::vector<std::pair<int, int>> offs;
    for (int dy = -half; dy <= half; ++dy)
      for (int dx = -half; dx <= half; ++dx) offs.emplace_back(dy, dx);
    return StructuringElement(std::move(offs));
  }

  static StructuringElement cross(int size) {
    check_odd(size);
    int half = size / 2;
    std::vector<std::pair<int, int>> offs;
    for (int dy = -half; dy <= half; ++dy) offs.emplace_back(dy, 0);
    for (int dx = -half; dx <= half; ++dx)
      if (dx != 0) offs.emplace_back(0, dx);
    return StructuringElement(std::move(offs));
  }

  static StructuringElement origin() {
    return StructuringElement({{0, 0}});
  }

  StructuringElement reflect() const {
    std::vector<std::pair<int, int>> offs;
    offs.reserve(offsets_.size());
    for (auto [dy, dx] : offsets_) offs.emplace_back(-dy, -dx);
    return StructuringElement(std::move(offs));
  }

  bool contains_origin() const {
    for (auto [dy, dx] : offsets_)
      if (dy == 0 && dx == 0) return true;
    return false;
  }

  int max_reach() const {
    int r = 0;
    for (auto [dy, dx] : offsets_) {
      r = std::max(r, dy < 0 ? -dy : dy);
      r = std::max(r, dx < 0 ? -dx : dx);
    }
    return r;
  }

  const std::vector<std::pair<int, int>>& offsets() const { return offsets_; }

 private:
  static void check_odd(int size) {
    if (size < 1 || size % 2 == 0)
      throw std::invalid_argument("structuring element size must be odd >= 1");
  }

  std::vector<std::pair<int, int>> offsets_;
};

/// Output is 1 iff every SE offset lands on a 1; reads outside the image are 0.
inline BinaryRaster erode(const BinaryRaster& img,
                          const StructuringElement& se) {
  const auto h = static_cast<long>(img.height());
  const auto w = static_cast<long>(img.width());
  BinaryRaster out(img.width(), img.height());
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      bool all = true;
      for (auto [dy, dx] : se.offsets()) {
        long rr = r + dy, cc = c + dx;
        if (rr < 0 || rr >= h || cc < 0 || cc >= w ||
            !img.at(static_cast<std::size_t>(rr),
                    static_cast<std::size_t>(cc))) {
          all = false;
          break;
        }
      }
      if (all) out.set(static_cast<std::size_t>(r), static_cast<std::size_t>(c), 1);
    }
  }
  return out;
}

/// Minkowski sum: output is 1 iff some reflected-SE offset lands on a 1.
inline BinaryRaster dilate(const BinaryRaster& img,
                           const StructuringElement& se) {
  const auto h = static_cast<long>(img.height());
  const auto w = static_cast<long>(img.width());
  BinaryRaster out(img.width(), img.height());
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      bool any = false;
      for (auto [dy, dx] : se.offsets()) {
        long rr = r - dy, cc = c - dx;
        if (rr >= 0 && rr < h && cc >= 0 && cc < w &&
            img.at(static_cast<std::size_t>(rr),
                   static_cast<std::size_t>(cc))) {
          any = true;
          break;
        }
      }
      if (any) out.set(static_cast<std::size_t>(r), static_cast<std::size_t>(c), 1);
    }
  }
  return out;
}

inline BinaryRaster open(const BinaryRaster& img,
                         const StructuringElement& se) {
  return dilate(erode(img, se), se);
}

/// Dilation spill is kept on a canvas expanded by the SE reach so the erosion
/// that follows sees it; a frame-clipped intermediate would let closing eat
/// foreground near the border.
inline BinaryRaster close(const BinaryRaster& img,
                          const StructuringElement& se) {
  const auto pad = static_cast<std::size_t>(se.max_reach());
  BinaryRaster padded(img.width() + 2 * pad, img.height() + 2 * pad);
  for (std::size_t r = 0; r < img.height(); ++r)
    for (std::size_t c = 0; c < img.width(); ++c)
      if (img.at(r, c)) padded.set(r + pad, c + pad, 1);
  BinaryRaster closed = erode(dilate(padded, se), se);
  BinaryRaster out(img.width(), img.height());
  for (std::size_t r = 0; r < img.height(); ++r)
    for (std::size_t c = 0; c < img.width(); ++c)
      out.set(r, c, closed.at(r + pad, c + pad));
  return out;
}

enum class Connectivity { Four = 4, Eight = 8 };

struct Region {
  int label = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pixels;  // (row, col)
  std::size_t area = 0;
  std::size_t min_row = 0, min_col = 0, max_row = 0, max_col = 0;
};

/// Flood-fill labeling; labels follow raster-scan first encounter, from 1.
inline std::vector<Region> label_components(const BinaryRaster& img,
                                            Connectivity conn) {
  const std::size_t h = img.height(), w = img.width();
  std::vector<int> labels(w * h, 0);
  std::vector<Region> regions;

  static constexpr int dy8[] = {-1, -1, -1, 0, 0, 1, 1, 1};
  static constexpr int dx8[] = {-1, 0, 1, -1, 1, -1, 0, 1};
  static constexpr int dy4[] = {-1, 0, 0, 1};
  static constexpr int dx4[] = {0, -1, 1, 0};
  const int* dy = conn == Connectivity::Eight ? dy8 : dy4;
  const int* dx = conn == Connectivity::Eight ? dx8 : dx4;
  const int nn = conn == Connectivity::Eight ? 8 : 4;

  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < w * h; ++start) {
    if (!img.data()[start] || labels[start]) continue;
    Region region;
    region.label = static_cast<int>(regions.size()) + 1;
    region.min_row = region.max_row = start / w;
    region.min_col = region.max_col = start % w;
    labels[start] = region.label;
    stack.assign(1, start);
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      std::size_t r = i / w, c = i % w;
      region.pixels.emplace_back(r, c);
      region.min_row = std::min(region.min_row, r);
      region.max_row = std::max(region.max_row, r);
      region.min_col = std::min(region.min_col, c);
      region.max_col = std::max(region.max_col, c);
      for (int k = 0; k < nn; ++k) {
        long rr = static_cast<long>(r) + dy[k];
        long cc = static_cast<long>(c) + dx[k];
        if (rr < 0 || cc < 0 || rr >= static_cast<long>(h) ||
            cc >= static_cast<long>(w))
          continue;
        std::size_t j = static_cast<std::size_t>(rr) * w +
                        static_cast<std::size_t>(cc);
        if (img.data()[j] && !labels[j]) {
          labels[j] = region.label;
          stack.push_back(j);
        }
      }
    }
    region.area = region.pixels.size();
    regions.push_back(std::move(region));
  }
  return regions;
}

/// Drops foreground components with area < min_area; survivors are untouched.
inline BinaryRaster remove_small_components(const BinaryRaster& img,
                                            std::size_t min_area,
                                            Connectivity conn) {
  if (min_area < 1) throw std::invalid_argument("min_area must be >= 1");
  if (min_area == 1) return img;
  BinaryRaster out(img.width(), img.height());
  for (const Region& region : label_components(img, conn)) {
    if (region.area < min_area) continue;
    for (auto [r, c] : region.pixels) out.set(r, c, 1);
  }
  return out;
}

}  // namespace epigraph

#endif  // EPIGRAPH_MORPHOLOGY_HPP

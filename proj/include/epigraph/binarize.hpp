#ifndef EPIGRAPH_BINARIZE_HPP
#define EPIGRAPH_BINARIZE_HPP

// Global (Otsu) and local (Niblack/Sauvola) thresholding plus the
// regular/irregular auto dispatcher. Local statistics run on integral images;
// all window sums are exact 64-bit integers.

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "epigraph/errors.hpp"
#include "epigraph/raster.hpp"

namespace epigraph {

struct Histogram256 {
  std::array<std::uint64_t, 256> counts{};

  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (auto c : counts) n += c;
    return n;
  }
  std::size_t distinct_values() const {
    std::size_t n = 0;
    for (auto c : counts) n += c > 0;
    return n;
  }
};

inline Histogram256 histogram(const GrayRaster& img) {
  Histogram256 h;
  for (std::uint8_t v : img.data()) ++h.counts[v];
  return h;
}

/// Threshold maximizing between-class variance w0*w1*(mu0-mu1)^2 with class 0
/// holding intensities <= t. Comparisons are exact (256-bit rationals), ties
/// resolve to the smallest t. Throws DegenerateHistogramError when fewer than
/// two intensities carry mass.
inline int otsu_threshold(const Histogram256& hist) {
  using boost::multiprecision::int256_t;

  std::uint64_t total = 0, grand_sum = 0;
  std::size_t distinct = 0;
  for (int v = 0; v < 256; ++v) {
    std::uint64_t c = hist.counts[v];
    total += c;
    grand_sum += static_cast<std::uint64_t>(v) * c;
    distinct += c > 0;
  }
  if (distinct < 2) throw DegenerateHistogramError();

  // Between-class variance at t is proportional to
  //   (s0*total - grand_sum*w0)^2 / (w0*w1)
  // which we compare as a fraction without ever rounding.
  int best_t = 0;
  int256_t best_num = -1, best_den = 1;
  std::uint64_t w0 = 0, s0 = 0;
  for (int t = 0; t <= 254; ++t) {
    w0 += hist.counts[t];
    s0 += static_cast<std::uint64_t>(t) * hist.counts[t];
    std::uint64_t w1 = total - w0;
    int256_t num = 0, den = 1;
    if (w0 != 0 && w1 != 0) {
      int256_t a = int256_t(s0) * total - int256_t(grand_sum) * w0;
      num = a * a;
      den = int256_t(w0) * w1;
    }
    if (num * best_den > best_num * den) {
      best_num = num;
      best_den = den;
      best_t = t;
    }
  }
  return best_t;
}

enum class Polarity { DarkText, LightText };

inline std::string to_string(Polarity p) {
  return p == Polarity::DarkText ? "dark-text" : "light-text";
}

inline Polarity parse_polarity(const std::string& s) {
  if (s == "dark-text" || s == "dark") return Polarity::DarkText;
  if (s == "light-text" || s == "light") return Polarity::LightText;
  throw std::invalid_argument("unknown polarity: " + s);
}

/// Fixed-threshold binarization. Dark text: foreground iff pixel <= t.
inline BinaryRaster binarize_global(const GrayRaster& img, int t,
                                    Polarity polarity) {
  if (t < 0 || t > 255) throw std::invalid_argument("threshold outside [0,255]");
  BinaryRaster out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    bool fg = polarity == Polarity::DarkText ? img.data()[i] <= t
                                             : img.data()[i] > t;
    out.data()[i] = fg ? 1 : 0;
  }
  return out;
}

/// Cumulative intensity and squared-intensity tables with a zero top row and
/// left column; any rectangle sum falls out of four corner reads.
class IntegralPair {
 public:
  explicit IntegralPair(const GrayRaster& img)
      : width_(img.width()), height_(img.height()),
        sum_((width_ + 1) * (height_ + 1), 0),
        sq_((width_ + 1) * (height_ + 1), 0) {
    for (std::size_t r = 0; r < height_; ++r) {
      std::uint64_t row_sum = 0, row_sq = 0;
      for (std::size_t c = 0; c < width_; ++c) {
        std::uint64_t v = img.at(r, c);
        row_sum += v;
        row_sq += v * v;
        sum_[idx(r + 1, c + 1)] = sum_[idx(r, c + 1)] + row_sum;
        sq_[idx(r + 1, c + 1)] = sq_[idx(r, c + 1)] + row_sq;
      }
    }
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }

  /// Sum over rows [r1, r2) and cols [c1, c2).
  std::uint64_t window_sum(std::size_t r1, std::size_t c1, std::size_t r2,
                           std::size_t c2) const {
    return sum_[idx(r2, c2)] - sum_[idx(r1, c2)] - sum_[idx(r2, c1)] +
           sum_[idx(r1, c1)];
  }
  std::uint64_t window_sq_sum(std::size_t r1, std::size_t c1, std::size_t r2,
                              std::size_t c2) const {
    return sq_[idx(r2, c2)] - sq_[idx(r1, c2)] - sq_[idx(r2, c1)] +
           sq_[idx(r1, c1)];
  }

  std::uint64_t sum_table_at(std::size_t r, std::size_t c) const {
    return sum_[idx(r, c)];
  }
  std::uint64_t sq_table_at(std::size_t r, std::size_t c) const {
    return sq_[idx(r, c)];
  }

 private:
  std::size_t idx(std::size_t r, std::size_t c) const {
    return r * (width_ + 1) + c;
  }

  std::size_t width_, height_;
  std::vector<std::uint64_t> sum_;
  std::vector<std::uint64_t> sq_;
};

inline IntegralPair integral_pair(const GrayRaster& img) {
  return IntegralPair(img);
}

namespace detail {

/// Population mean/std from exact window sums. Shared by every stats path so
/// equal sums give bit-equal results.
inline std::pair<double, double> stats_from_sums(std::uint64_t sum,
                                                 std::uint64_t sq_sum,
                                                 std::uint64_t n) {
  double mu = static_cast<double>(sum) / static_cast<double>(n);
  double var = static_cast<double>(sq_sum) / static_cast<double>(n) - mu * mu;
  return {mu, std::sqrt(std::max(0.0, var))};
}

}  // namespace detail

/// Per-pixel windowed mean/std maps. Windows are clamped to the image border;
/// count(r,c) is the clipped window area actually averaged.
struct LocalStatsMap {
  std::size_t width = 0;
  std::size_t height = 0;
  int window = 0;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<std::uint32_t> count;

  double mean_at(std::size_t r, std::size_t c) const {
    return mean[r * width + c];
  }
  double stddev_at(std::size_t r, std::size_t c) const {
    return stddev[r * width + c];
  }
  std::uint32_t count_at(std::size_t r, std::size_t c) const {
    return count[r * width + c];
  }
};

inline LocalStatsMap local_stats(const GrayRaster& img, int window) {
  if (window < 3 || window % 2 == 0)
    throw std::invalid_argument("window must be odd and >= 3");
  const std::size_t w = img.width(), h = img.height();
  const std::size_t half = static_cast<std::size_t>(window / 2);
  IntegralPair ip(img);

  LocalStatsMap out;
  out.width = w;
  out.height = h;
  out.window = window;
  out.mean.resize(w * h);
  out.stddev.resize(w * h);
  out.count.resize(w * h);

  for (std::size_t r = 0; r < h; ++r) {
    std::size_t r1 = r >= half ? r - half : 0;
    std::size_t r2 = std::min(h, r + half + 1);
    for (std::size_t c = 0; c < w; ++c) {
      std::size_t c1 = c >= half ? c - half : 0;
      std::size_t c2 = std::min(w, c + half + 1);
      std::uint64_t n = static_cast<std::uint64_t>(r2 - r1) * (c2 - c1);
      auto [mu, sigma] = detail::stats_from_sums(
          ip.window_sum(r1, c1, r2, c2), ip.window_sq_sum(r1, c1, r2, c2), n);
      std::size_t i = r * w + c;
      out.mean[i] = mu;
      out.stddev[i] = sigma;
      out.count[i] = static_cast<std::uint32_t>(n);
    }
  }
  return out;
}

enum class ThresholdMethod { GlobalOtsu, LocalNiblack, LocalSauvola, Auto };

inline std::string to_string(ThresholdMethod m) {
  switch (m) {
    case ThresholdMethod::GlobalOtsu: return "global-otsu";
    case ThresholdMethod::LocalNiblack: return "local-niblack";
    case ThresholdMethod::LocalSauvola: return "local-sauvola";
    case ThresholdMethod::Auto: return "auto";
  }
  return "auto";
}

inline ThresholdMethod parse_threshold_method(const std::string& s) {
  if (s == "global-otsu") return ThresholdMethod::GlobalOtsu;
  if (s == "local-niblack") return ThresholdMethod::LocalNiblack;
  if (s == "local-sauvola") return ThresholdMethod::LocalSauvola;
  if (s == "auto") return ThresholdMethod::Auto;
  throw std::invalid_argument("unknown threshold method: " + s);
}

struct ThresholdParams {
  ThresholdMethod method = ThresholdMethod::Auto;
  int window = 31;
  std::optional<double> k;  // defaults to -0.2 (niblack) / 0.5 (sauvola)
  double dynamic_range = 128.0;  // Sauvola R
  Polarity polarity = Polarity::DarkText;
  double regularity_cutoff = 18.0;  // auto mode only
  int regularity_block = 16;

  double effective_k(ThresholdMethod m) const {
    if (k) return *k;
    return m == ThresholdMethod::LocalNiblack ? -0.2 : 0.5;
  }

  void validate() const {
    if (window < 3 || window % 2 == 0)
      throw std::invalid_argument("window must be odd and >= 3");
    if (dynamic_range <= 0.0)
      throw std::invalid_argument("dynamic range R must be positive");
    if (regularity_cutoff < 0.0)
      throw std::invalid_argument("regularity cutoff must be >= 0");
    if (regularity_block < 2)
      throw std::invalid_argument("regularity block must be >= 2");
  }
};

namespace detail {

/// Niblack: T = mu + k*sigma.  Sauvola: T = mu * (1 + k*(sigma/R - 1)).
inline double local_threshold(double mu, double sigma, ThresholdMethod method,
                              double k, double dynamic_range) {
  if (method == ThresholdMethod::LocalNiblack) return mu + k * sigma;
  return mu * (1.0 + k * (sigma / dynamic_range - 1.0));
}

}  // namespace detail

/// Thresholds against precomputed stats. Foreground needs a strict inequality,
/// so constant regions (sigma = 0, T = mu) stay background.
inline BinaryRaster binarize_local_from_stats(const GrayRaster& img,
                                              const LocalStatsMap& stats,
                                              const ThresholdParams& params) {
  ThresholdMethod m = params.method;
  if (m != ThresholdMethod::LocalNiblack && m != ThresholdMethod::LocalSauvola)
    throw std::invalid_argument("binarize_local requires a local method");
  if (stats.width != img.width() || stats.height != img.height())
    throw std::invalid_argument("stats map does not match image");
  double k = params.effective_k(m);
  BinaryRaster out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    double t = detail::local_threshold(stats.mean[i], stats.stddev[i], m, k,
                                       params.dynamic_range);
    double px = img.data()[i];
    bool fg = params.polarity == Polarity::DarkText ? px < t : px > t;
    out.data()[i] = fg ? 1 : 0;
  }
  return out;
}

inline BinaryRaster binarize_local(const GrayRaster& img,
                                   const ThresholdParams& params) {
  return binarize_local_from_stats(img, local_stats(img, params.window),
                                   params);
}

/// Spread of mean intensity across a non-overlapping block tiling (population
/// std of the block means; partial edge blocks count). Constant images score 0;
/// gradients and blotchy backgrounds score high.
inline double background_regularity(const GrayRaster& img, int block = 16) {
  if (block < 2) throw std::invalid_argument("block must be >= 2");
  const std::size_t w = img.width(), h = img.height();
  const std::size_t b = static_cast<std::size_t>(block);
  std::vector<double> means;
  for (std::size_t r0 = 0; r0 < h; r0 += b) {
    std::size_t r1 = std::min(h, r0 + b);
    for (std::size_t c0 = 0; c0 < w; c0 += b) {
      std::size_t c1 = std::min(w, c0 + b);
      std::uint64_t sum = 0;
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) sum += img.at(r, c);
      means.push_back(static_cast<double>(sum) /
                      static_cast<double>((r1 - r0) * (c1 - c0)));
    }
  }
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= static_cast<double>(means.size());
  double acc = 0.0;
  for (double m : means) acc += (m - grand) * (m - grand);
  return std::sqrt(acc / static_cast<double>(means.size()));
}

struct BinarizeResult {
  BinaryRaster image;
  ThresholdMethod method_used;
  bool auto_routed = false;
  std::optional<double> regularity;    // present when auto routing ran
  std::optional<int> global_threshold; // present on the global path
};

/// Method dispatch. Auto measures background regularity and routes to Otsu
/// below the cutoff, Sauvola at or above it.
inline BinarizeResult binarize(const GrayRaster& img,
                               const ThresholdParams& params) {
  params.validate();
  ThresholdMethod m = params.method;
  BinarizeResult result{BinaryRaster(img.width(), img.height()), m, false,
                        std::nullopt, std::nullopt};

  if (m == ThresholdMethod::Auto) {
    double score = background_regularity(img, params.regularity_block);
    result.auto_routed = true;
    result.regularity = score;
    m = score < params.regularity_cutoff ? ThresholdMethod::GlobalOtsu
                                         : ThresholdMethod::LocalSauvola;
  }
  result.method_used = m;

  if (m == ThresholdMethod::GlobalOtsu) {
    int t = otsu_threshold(histogram(img));
    result.global_threshold = t;
    result.image = binarize_global(img, t, params.polarity);
  } else {
    ThresholdParams local = params;
    local.method = m;
    result.image = binarize_local(img, local);
  }
  return result;
}

}  // namespace epigraph

#endif  // EPIGRAPH_BINARIZE_HPP

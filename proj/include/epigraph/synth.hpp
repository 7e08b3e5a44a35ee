#ifndef EPIGRAPH_SYNTH_HPP
#define EPIGRAPH_SYNTH_HPP

// Seeded generator of glyph-bearing test images: dark strokes over uniform
// (regular) or gradient/blotched (irregular) backgrounds, with per-material
// texture overlays. Stands in for a real inscription corpus in experiments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "epigraph/manifest.hpp"
#include "epigraph/pnm.hpp"
#include "epigraph/raster.hpp"
#include "epigraph/rng.hpp"

namespace epigraph {

struct SynthConfig {
  std::filesystem::path out_dir;
  int per_class = 10;  // images per (material, background) pair
  std::uint64_t seed = 7;
  std::size_t size = 96;  // square canvas side
};

namespace detail {

class SynthCanvas {
 public:
  explicit SynthCanvas(std::size_t size) : size_(size), px_(size * size, 0.0) {}

  std::size_t size() const { return size_; }
  double& at(std::size_t r, std::size_t c) { return px_[r * size_ + c]; }

  void fill(double v) { std::fill(px_.begin(), px_.end(), v); }

  void add_noise(Rng& rng, double sigma) {
    for (double& v : px_) v += rng.normal(0.0, sigma);
  }

  void add_gradient(Rng& rng, double amplitude) {
    double theta = rng.uniform(0.0, 6.283185307179586);
    double cy = std::sin(theta), cx = std::cos(theta);
    double n = static_cast<double>(size_ - 1);
    // projection range over the canvas corners
    double lo = std::min({0.0, cx * n, cy * n, (cx + cy) * n});
    double hi = std::max({0.0, cx * n, cy * n, (cx + cy) * n});
    double span = hi - lo;
    for (std::size_t r = 0; r < size_; ++r)
      for (std::size_t c = 0; c < size_; ++c) {
        double p = (cx * static_cast<double>(c) + cy * static_cast<double>(r) -
                    lo) / span;
        at(r, c) += amplitude * (p - 0.5);
      }
  }

  void add_blotch(Rng& rng) {
    double cy = rng.uniform(0.0, static_cast<double>(size_));
    double cx = rng.uniform(0.0, static_cast<double>(size_));
    double radius = rng.uniform(9.0, 16.0);
    double depth = rng.uniform(65.0, 115.0);
    long r0 = std::max(0L, static_cast<long>(cy - radius) - 1);
    long r1 = std::min(static_cast<long>(size_) - 1,
                       static_cast<long>(cy + radius) + 1);
    long c0 = std::max(0L, static_cast<long>(cx - radius) - 1);
    long c1 = std::min(static_cast<long>(size_) - 1,
                       static_cast<long>(cx + radius) + 1);
    for (long r = r0; r <= r1; ++r)
      for (long c = c0; c <= c1; ++c) {
        double dy = static_cast<double>(r) - cy;
        double dx = static_cast<double>(c) - cx;
        double d2 = (dy * dy + dx * dx) / (radius * radius);
        if (d2 < 1.0) at(r, c) -= depth * (1.0 - d2);
      }
  }

  /// Stamps ink (dark wins) in a disk around (r, c).
  void stamp(double r, double c, double radius, double ink) {
    long r0 = std::max(0L, static_cast<long>(r - radius) - 1);
    long r1 = std::min(static_cast<long>(size_) - 1,
                       static_cast<long>(r + radius) + 1);
    long c0 = std::max(0L, static_cast<long>(c - radius) - 1);
    long c1 = std::min(static_cast<long>(size_) - 1,
                       static_cast<long>(c + radius) + 1);
    for (long rr = r0; rr <= r1; ++rr)
      for (long cc = c0; cc <= c1; ++cc) {
        double dy = static_cast<double>(rr) - r;
        double dx = static_cast<double>(cc) - c;
        if (dy * dy + dx * dx <= radius * radius)
          at(rr, cc) = std::min(at(rr, cc), ink);
      }
  }

  void stroke(Rng& rng, double r0, double c0, double r1, double c1,
              double radius, double ink, double jitter) {
    double len = std::max(std::abs(r1 - r0), std::abs(c1 - c0));
    int steps = static_cast<int>(len * 2.0) + 1;
    for (int s = 0; s <= steps; ++s) {
      double t = static_cast<double>(s) / static_cast<double>(steps);
      stamp(r0 + t * (r1 - r0), c0 + t * (c1 - c0), radius,
            ink + rng.normal(0.0, jitter));
    }
  }

  GrayRaster to_raster() const {
    GrayRaster out(size_, size_);
    for (std::size_t i = 0; i < px_.size(); ++i) {
      long v = std::lround(px_[i]);
      out.data()[i] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
    }
    return out;
  }

 private:
  std::size_t size_;
  std::vector<double> px_;
};

inline void render_background(SynthCanvas& canvas, Rng& rng, Background bg) {
  if (bg == Background::Regular) {
    canvas.fill(rng.uniform(205.0, 235.0));
    canvas.add_noise(rng, 2.5);
  } else {
    canvas.fill(rng.uniform(165.0, 200.0));
    canvas.add_gradient(rng, rng.uniform(100.0, 145.0));
    int blotches = 3 + static_cast<int>(rng.below(3));
    for (int i = 0; i < blotches; ++i) canvas.add_blotch(rng);
    canvas.add_noise(rng, rng.uniform(8.0, 16.0));
  }
}

inline void render_texture(SynthCanvas& canvas, Rng& rng, Material material) {
  std::size_t n = canvas.size();
  switch (material) {
    case Material::Stone: {
      std::size_t granules = n * n / 40;
      for (std::size_t i = 0; i < granules; ++i) {
        std::size_t r = rng.below(n), c = rng.below(n);
        double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        canvas.at(r, c) += sign * rng.uniform(4.0, 12.0);
      }
      canvas.add_noise(rng, 3.0);
      break;
    }
    case Material::Metal: {
      double amplitude = rng.uniform(2.0, 6.0);
      double period = rng.uniform(6.0, 14.0);
      double phase = rng.uniform(0.0, 6.283185307179586);
      for (std::size_t r = 0; r < n; ++r) {
        double band = amplitude *
                      std::sin(6.283185307179586 * static_cast<double>(r) /
                                   period + phase);
        for (std::size_t c = 0; c < n; ++c) canvas.at(r, c) += band;
      }
      break;
    }
    case Material::Document: {
      for (std::size_t c = 0; c < n; ++c) {
        double streak = rng.uniform(-2.0, 2.0);
        for (std::size_t r = 0; r < n; ++r) canvas.at(r, c) += streak;
      }
      break;
    }
  }
}

/// One glyph per cell of a 3x3 grid so ink lands evenly across the canvas
/// and does not drive the block-mean variance that the regularity measure
/// reads. Each glyph is a 4-armed cross of thick strokes: the symmetry
/// spreads ink evenly over the blocks meeting at the cell center, and thick
/// hub-joined strokes leave no thin gaps for closing to fill with
/// background pixels.
inline void render_glyphs(SynthCanvas& canvas, Rng& rng, Background bg) {
  double cell = static_cast<double>(canvas.size()) / 3.0;
  int glyph_index = 0;
  for (int gr = 0; gr < 3; ++gr)
    for (int gc = 0; gc < 3; ++gc, ++glyph_index) {
      double cy = (gr + 0.5) * cell + rng.uniform(-0.06 * cell, 0.06 * cell);
      double cx = (gc + 0.5) * cell + rng.uniform(-0.06 * cell, 0.06 * cell);
      double reach = cell * rng.uniform(0.18, 0.28);
      double radius = rng.uniform(2.2, 2.8);
      double theta = rng.uniform(0.0, 6.283185307179586);
      double ink, jitter;
      if (bg == Background::Regular) {
        ink = rng.uniform(28.0, 52.0);
        jitter = 2.5;
      } else {
        // alternate dark and mid-tone glyphs so every irregular image mixes
        // ink intensities
        ink = glyph_index % 2 == 0 ? rng.uniform(15.0, 40.0)
                                   : rng.uniform(75.0, 105.0);
        jitter = 6.0;
      }
      // wide hub disk covers the wedge gaps between adjacent arms, which
      // closing would otherwise fill with background pixels
      canvas.stamp(cy, cx, radius * 1.7, ink + rng.normal(0.0, jitter));
      for (int arm = 0; arm < 4; ++arm) {
        double a = theta + arm * 1.5707963267948966;
        double len = reach * rng.uniform(0.8, 1.0);
        canvas.stroke(rng, cy, cx, cy + len * std::sin(a),
                      cx + len * std::cos(a), radius, ink, jitter);
      }
    }
}

}  // namespace detail

/// Renders one synthetic inscription image. Deterministic in the seed.
inline GrayRaster synth_image(Material material, Background bg,
                              std::uint64_t seed, std::size_t size = 96) {
  Rng rng(seed);
  detail::SynthCanvas canvas(size);
  detail::render_background(canvas, rng, bg);
  detail::render_texture(canvas, rng, material);
  detail::render_glyphs(canvas, rng, bg);
  return canvas.to_raster();
}

/// Writes per_class images for every (material, background) pair plus a
/// manifest.json next to them. Identical seeds give identical bytes.
inline DatasetManifest generate_synthetic_corpus(const SynthConfig& cfg) {
  if (cfg.per_class < 2)
    throw std::invalid_argument("per_class must be >= 2");
  if (cfg.size < 32)
    throw std::invalid_argument("canvas must be at least 32 px");
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.out_dir.string());

  DatasetManifest manifest;
  int class_index = 0;
  for (Material material : kAllMaterials) {
    for (Background bg : kAllBackgrounds) {
      for (int i = 0; i < cfg.per_class; ++i) {
        std::uint64_t image_seed =
            mix_seed(mix_seed(cfg.seed, static_cast<std::uint64_t>(class_index)),
                     static_cast<std::uint64_t>(i));
        GrayRaster img = synth_image(material, bg, image_seed, cfg.size);

        char suffix[16];
        std::snprintf(suffix, sizeof suffix, "%03d", i);
        std::string id =
            to_string(material) + "_" + to_string(bg) + "_" + suffix;
        std::filesystem::path path = cfg.out_dir / (id + ".pgm");
        save_gray(img, path);
        manifest.entries.push_back({path, id, material, bg});
      }
      ++class_index;
    }
  }
  write_manifest(manifest, cfg.out_dir / "manifest.json");
  return manifest;
}

}  // namespace epigraph

#endif  // EPIGRAPH_SYNTH_HPP

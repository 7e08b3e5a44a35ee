#ifndef EPIGRAPH_DATASET_HPP
#define EPIGRAPH_DATASET_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "epigraph/errors.hpp"
#include "epigraph/features.hpp"
#include "epigraph/rng.hpp"

namespace epigraph {

enum class Material { Stone, Metal, Document };
enum class Background { Regular, Irregular };

inline constexpr std::array<Material, 3> kAllMaterials = {
    Material::Stone, Material::Metal, Material::Document};
inline constexpr std::array<Background, 2> kAllBackgrounds = {
    Background::Regular, Background::Irregular};

inline std::string to_string(Material m) {
  switch (m) {
    case Material::Stone: return "stone";
    case Material::Metal: return "metal";
    case Material::Document: return "document";
  }
  return "stone";
}

inline std::string to_string(Background b) {
  return b == Background::Regular ? "regular" : "irregular";
}

inline Material parse_material(const std::string& s) {
  if (s == "stone") return Material::Stone;
  if (s == "metal") return Material::Metal;
  if (s == "document") return Material::Document;
  throw std::invalid_argument("unknown material: " + s);
}

inline Background parse_background(const std::string& s) {
  if (s == "regular") return Background::Regular;
  if (s == "irregular") return Background::Irregular;
  throw std::invalid_argument("unknown background: " + s);
}

struct LabeledSample {
  std::string image_id;
  Material material = Material::Stone;
  Background background = Background::Regular;
  FeatureVector features;
};

struct DatasetSplit {
  std::vector<LabeledSample> train;
  std::vector<LabeledSample> test;
};

/// Stratified train/test split over (material, background). Each stratum
/// contributes floor(ratio * n) training samples chosen by seeded shuffle,
/// the rest go to test. Strata are processed in fixed (material, background)
/// order and samples sorted by image_id first, so the split depends only on
/// (samples, ratio, seed).
inline DatasetSplit split_dataset(const std::vector<LabeledSample>& samples,
                                  double ratio, std::uint64_t seed) {
  if (ratio < 0.0 || ratio > 1.0)
    throw std::invalid_argument("split ratio must be in [0,1]");

  std::map<std::pair<int, int>, std::vector<LabeledSample>> strata;
  for (const auto& s : samples)
    strata[{static_cast<int>(s.material), static_cast<int>(s.background)}]
        .push_back(s);

  Rng rng(seed);
  DatasetSplit out;
  for (Material m : kAllMaterials) {
    for (Background b : kAllBackgrounds) {
      auto it = strata.find({static_cast<int>(m), static_cast<int>(b)});
      if (it == strata.end()) continue;
      auto& group = it->second;
      if (group.size() < 2)
        throw StratumTooSmallError(
            "stratum (" + to_string(m) + ", " + to_string(b) + ") has " +
            std::to_string(group.size()) + " sample(s); need at least 2");
      std::sort(group.begin(), group.end(),
                [](const LabeledSample& a, const LabeledSample& x) {
                  return a.image_id < x.image_id;
                });
      deterministic_shuffle(group, rng);
      std::size_t n_train = static_cast<std::size_t>(
          std::floor(ratio * static_cast<double>(group.size()) + 1e-9));
      for (std::size_t i = 0; i < group.size(); ++i)
        (i < n_train ? out.train : out.test).push_back(group[i]);
    }
  }
  return out;
}

}  // namespace epigraph

#endif  // EPIGRAPH_DATASET_HPP

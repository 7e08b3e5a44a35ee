#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "epigraph/classify.hpp"
#include "epigraph/dataset.hpp"
#include "epigraph/rng.hpp"
#include "oracles.hpp"

using namespace epigraph;

namespace {

LabeledSample sample(std::string id, Material m, Background b, double mean,
                     double stddev) {
  return {std::move(id), m, b, FeatureVector{mean, stddev}};
}

std::vector<LabeledSample> random_samples(Rng& rng, std::size_t n) {
  std::vector<LabeledSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "img_%03zu", i);
    out.push_back(sample(id, kAllMaterials[rng.below(3)],
                         kAllBackgrounds[rng.below(2)],
                         rng.uniform() * 255.0, rng.uniform() * 128.0));
  }
  return out;
}

}  // namespace

TEST_CASE("z-score scaler", "[classify]") {
  SECTION("known parameters") {
    Scaler s({100.0, 20.0}, {50.0, 10.0});
    auto t = s.transform({150.0, 30.0});
    CHECK(t[0] == 1.0);
    CHECK(t[1] == 1.0);
  }

  SECTION("fitted training set becomes zero mean, unit std") {
    Rng rng(9);
    auto train = random_samples(rng, 40);
    Scaler s = Scaler::fit(train);
    double m0 = 0, m1 = 0, v0 = 0, v1 = 0;
    for (const auto& x : train) {
      auto t = s.transform(x.features);
      m0 += t[0];
      m1 += t[1];
      v0 += t[0] * t[0];
      v1 += t[1] * t[1];
    }
    double n = static_cast<double>(train.size());
    CHECK_THAT(m0 / n, Catch::Matchers::WithinAbs(0.0, 1e-9));
    CHECK_THAT(m1 / n, Catch::Matchers::WithinAbs(0.0, 1e-9));
    CHECK_THAT(v0 / n, Catch::Matchers::WithinAbs(1.0, 1e-9));
    CHECK_THAT(v1 / n, Catch::Matchers::WithinAbs(1.0, 1e-9));
  }

  SECTION("constant dimension passes through centred") {
    std::vector<LabeledSample> train = {
        sample("a", Material::Stone, Background::Regular, 10.0, 5.0),
        sample("b", Material::Stone, Background::Irregular, 20.0, 5.0)};
    Scaler s = Scaler::fit(train);
    CHECK(s.stddev()[1] == 1.0);
    auto t = s.transform({15.0, 8.0});
    CHECK(t[0] == 0.0);
    CHECK(t[1] == 3.0);
  }

  SECTION("non-positive std rejected") {
    CHECK_THROWS_AS(Scaler({0.0, 0.0}, {1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(Scaler::fit({}), std::invalid_argument);
  }
}

TEST_CASE("k-nn prediction", "[classify][knn]") {
  SECTION("parameter validation") {
    std::vector<LabeledSample> three = {
        sample("a", Material::Stone, Background::Regular, 0, 0),
        sample("b", Material::Stone, Background::Irregular, 5, 5),
        sample("c", Material::Stone, Background::Regular, 9, 2)};
    CHECK_THROWS_AS(KnnModel::train({}, 1), std::invalid_argument);
    CHECK_THROWS_AS(KnnModel::train(three, 0), std::invalid_argument);
    CHECK_THROWS_AS(KnnModel::train(three, 2), std::invalid_argument);
    CHECK_THROWS_AS(KnnModel::train(three, 5), std::invalid_argument);
    CHECK_NOTHROW(KnnModel::train(three, 3));
  }

  SECTION("nearest neighbour with k=1") {
    std::vector<LabeledSample> train = {
        sample("a", Material::Stone, Background::Regular, 0.0, 0.0),
        sample("b", Material::Stone, Background::Irregular, 10.0, 10.0)};
    auto m = KnnModel::train(train, 1);
    CHECK(m.predict({1.0, 1.0}) == Background::Regular);
    CHECK(m.predict({9.0, 9.0}) == Background::Irregular);
  }

  SECTION("majority vote with k=3") {
    std::vector<LabeledSample> train = {
        sample("a", Material::Stone, Background::Regular, 0.0, 0.0),
        sample("b", Material::Stone, Background::Irregular, 2.0, 0.0),
        sample("c", Material::Stone, Background::Irregular, 3.0, 0.0)};
    auto m = KnnModel::from_parts(train, 3, Scaler());
    CHECK(m.predict({2.0, 0.0}) == Background::Irregular);
  }

  SECTION("distance ties resolve by smaller image id") {
    std::vector<LabeledSample> train = {
        sample("b", Material::Stone, Background::Regular, -1.0, 0.0),
        sample("a", Material::Stone, Background::Irregular, 1.0, 0.0)};
    auto m = KnnModel::from_parts(train, 1, Scaler());
    CHECK(m.predict({0.0, 0.0}) == Background::Irregular);
  }

  SECTION("split votes fall back to the nearest neighbour") {
    std::vector<LabeledSample> train = {
        sample("a", Material::Stone, Background::Regular, 0.0, 1.0),
        sample("b", Material::Stone, Background::Irregular, 0.0, 3.0)};
    auto m = KnnModel::from_parts(train, 2, Scaler());
    CHECK(m.predict({0.0, 0.0}) == Background::Regular);
    CHECK(m.predict({0.0, 4.0}) == Background::Irregular);
  }

  SECTION("k=1 reproduces training labels exactly") {
    std::vector<LabeledSample> train;
    for (int i = 0; i < 40; ++i) {
      train.push_back(sample("t" + std::to_string(i),
                             kAllMaterials[i % 3], kAllBackgrounds[i % 2],
                             10.0 + i, (i % 2 ? 20.0 : 60.0) + i));
    }
    auto m = KnnModel::train(train, 1);
    auto report = evaluate(m, train);
    CHECK(report.overall_accuracy == 1.0);
  }

  SECTION("matches the full-scan reference") {
    Rng rng(5150);
    auto train = random_samples(rng, 60);
    for (int k : {1, 3, 5}) {
      auto m = KnnModel::train(train, k);
      for (int q = 0; q < 40; ++q) {
        FeatureVector query{rng.uniform() * 255.0, rng.uniform() * 128.0};
        CHECK(m.predict(query) ==
              oracles::knn_full_scan(m.samples(), m.scaler(), query, k));
      }
    }
  }

  SECTION("per-dimension rescaling never changes predictions") {
    Rng rng(777);
    auto train = random_samples(rng, 50);
    auto scaled = train;
    for (auto& s : scaled) {
      s.features.mean *= 3.0;
      s.features.stddev *= 0.5;
    }
    auto m0 = KnnModel::train(train, 3);
    auto m1 = KnnModel::train(scaled, 3);
    for (int q = 0; q < 50; ++q) {
      FeatureVector f{rng.uniform() * 255.0, rng.uniform() * 128.0};
      FeatureVector g{f.mean * 3.0, f.stddev * 0.5};
      CHECK(m0.predict(f) == m1.predict(g));
    }
  }
}

TEST_CASE("linear svm", "[classify][svm]") {
  SECTION("training set must contain both classes") {
    std::vector<LabeledSample> only_regular = {
        sample("a", Material::Stone, Background::Regular, 1, 1),
        sample("b", Material::Stone, Background::Regular, 2, 2)};
    CHECK_THROWS_AS(SvmModel::train(only_regular), SingleClassTrainingSetError);
  }

  SECTION("config validation") {
    std::vector<LabeledSample> train = {
        sample("a", Material::Stone, Background::Regular, 1, 1),
        sample("b", Material::Stone, Background::Irregular, 9, 9)};
    CHECK_THROWS_AS(SvmModel::train(train, {.C = 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(SvmModel::train(train, {.epochs = 0}),
                    std::invalid_argument);
  }

  SECTION("decision rule with fixed weights") {
    auto m = SvmModel::from_parts({1.0, 0.0}, 0.0, Scaler(), {});
    CHECK(m.decision_value({3.0, 5.0}) == 3.0);
    CHECK(m.predict({3.0, 5.0}) == Background::Irregular);
    CHECK(m.predict({-3.0, 5.0}) == Background::Regular);
    CHECK(m.predict({0.0, 1.0}) == Background::Irregular);
  }

  SECTION("separable clusters reach full training accuracy") {
    Rng rng(42);
    std::vector<LabeledSample> train;
    for (int i = 0; i < 50; ++i) {
      train.push_back(sample("r" + std::to_string(i), kAllMaterials[i % 3],
                             Background::Regular, 20.0 + rng.uniform() * 15.0,
                             30.0 + rng.uniform() * 30.0));
      train.push_back(sample("i" + std::to_string(i), kAllMaterials[i % 3],
                             Background::Irregular, 70.0 + rng.uniform() * 15.0,
                             30.0 + rng.uniform() * 30.0));
    }
    auto m = SvmModel::train(train, {.C = 1.0, .epochs = 1000, .seed = 42});
    auto report = evaluate(m, train);
    CHECK(report.overall_accuracy == 1.0);
    CHECK(m.best_objective() <= m.first_epoch_objective());
  }

  SECTION("training is deterministic for a fixed seed") {
    Rng rng(8);
    auto train = random_samples(rng, 30);
    bool both = false, seen_reg = false, seen_irr = false;
    for (const auto& s : train) {
      seen_reg |= s.background == Background::Regular;
      seen_irr |= s.background == Background::Irregular;
    }
    both = seen_reg && seen_irr;
    REQUIRE(both);
    auto a = SvmModel::train(train, {.C = 2.0, .epochs = 200, .seed = 11});
    auto b = SvmModel::train(train, {.C = 2.0, .epochs = 200, .seed = 11});
    CHECK(a.weights() == b.weights());
    CHECK(a.bias() == b.bias());
    CHECK(a.best_objective() == b.best_objective());
  }
}

TEST_CASE("stratified split", "[classify][split]") {
  SECTION("single stratum of ten splits 8/2") {
    std::vector<LabeledSample> samples;
    for (int i = 0; i < 10; ++i)
      samples.push_back(sample("s" + std::to_string(i), Material::Stone,
                               Background::Regular, i, i));
    auto split = split_dataset(samples, 0.8, 1);
    CHECK(split.train.size() == 8);
    CHECK(split.test.size() == 2);
  }

  SECTION("uneven strata keep per-stratum proportions") {
    // 40/60/20/80/30/20 across the six strata, 250 total.
    const std::size_t sizes[6] = {40, 60, 20, 80, 30, 20};
    std::vector<LabeledSample> samples;
    std::size_t idx = 0, next = 0;
    for (Material m : kAllMaterials) {
      for (Background b : kAllBackgrounds) {
        for (std::size_t i = 0; i < sizes[idx]; ++i) {
          char id[16];
          std::snprintf(id, sizeof id, "x_%04zu", next++);
          samples.push_back(sample(id, m, b, static_cast<double>(i), 1.0));
        }
        ++idx;
      }
    }
    auto split = split_dataset(samples, 0.8, 42);
    CHECK(split.train.size() == 200);
    CHECK(split.test.size() == 50);

    std::map<std::pair<Material, Background>, std::size_t> train_counts;
    for (const auto& s : split.train) ++train_counts[{s.material, s.background}];
    idx = 0;
    for (Material m : kAllMaterials)
      for (Background b : kAllBackgrounds)
        CHECK(train_counts[{m, b}] == sizes[idx++] * 8 / 10);
  }

  SECTION("split is a deterministic partition") {
    Rng rng(31);
    auto samples = random_samples(rng, 60);
    auto a = split_dataset(samples, 0.8, 7);
    auto b = split_dataset(samples, 0.8, 7);
    auto ids = [](const std::vector<LabeledSample>& v) {
      std::vector<std::string> out;
      for (const auto& s : v) out.push_back(s.image_id);
      return out;
    };
    CHECK(ids(a.train) == ids(b.train));
    CHECK(ids(a.test) == ids(b.test));

    auto c = split_dataset(samples, 0.8, 8);
    CHECK(ids(a.train) != ids(c.train));

    std::set<std::string> seen;
    for (const auto& s : a.train) seen.insert(s.image_id);
    for (const auto& s : a.test) seen.insert(s.image_id);
    CHECK(seen.size() == samples.size());
  }

  SECTION("absent strata are allowed, tiny ones are not") {
    std::vector<LabeledSample> stone_only = {
        sample("a", Material::Stone, Background::Regular, 1, 1),
        sample("b", Material::Stone, Background::Regular, 2, 2),
        sample("c", Material::Stone, Background::Irregular, 3, 3),
        sample("d", Material::Stone, Background::Irregular, 4, 4)};
    CHECK_NOTHROW(split_dataset(stone_only, 0.5, 3));

    stone_only.push_back(
        sample("e", Material::Metal, Background::Regular, 5, 5));
    CHECK_THROWS_AS(split_dataset(stone_only, 0.5, 3), StratumTooSmallError);
  }

  SECTION("ratio bounds") {
    std::vector<LabeledSample> samples = {
        sample("a", Material::Stone, Background::Regular, 1, 1),
        sample("b", Material::Stone, Background::Regular, 2, 2)};
    CHECK_THROWS_AS(split_dataset(samples, -0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(split_dataset(samples, 1.1, 1), std::invalid_argument);
  }
}

TEST_CASE("evaluation report", "[classify][evaluate]") {
  std::vector<LabeledSample> test = {
      sample("a", Material::Stone, Background::Regular, 10, 10),
      sample("b", Material::Stone, Background::Irregular, 90, 90),
      sample("c", Material::Metal, Background::Regular, 20, 20),
      sample("d", Material::Metal, Background::Irregular, 80, 80)};

  SECTION("perfect classifier") {
    // w picks the irregular half-plane mean > 50 in raw units.
    auto m = SvmModel::from_parts({1.0, 0.0}, 0.0,
                                  Scaler({50.0, 50.0}, {10.0, 10.0}), {});
    auto r = evaluate(m, test);
    CHECK(r.overall_accuracy == 1.0);
    CHECK(r.per_material_accuracy.at(Material::Stone) == 1.0);
    CHECK(r.per_material_accuracy.at(Material::Metal) == 1.0);
    CHECK(r.confusion[0][0] == 2);
    CHECK(r.confusion[1][1] == 2);
    CHECK(r.confusion[0][1] == 0);
    CHECK(r.confusion[1][0] == 0);
  }

  SECTION("inverted classifier") {
    auto m = SvmModel::from_parts({-1.0, 0.0}, 0.0,
                                  Scaler({50.0, 50.0}, {10.0, 10.0}), {});
    auto r = evaluate(m, test);
    CHECK(r.overall_accuracy == 0.0);
    CHECK(r.confusion[0][0] == 0);
    CHECK(r.confusion[1][1] == 0);
    CHECK(r.confusion[0][1] == 2);
    CHECK(r.confusion[1][0] == 2);
  }

  SECTION("counts are consistent") {
    auto m = SvmModel::from_parts({0.0, 1.0}, -5.0,
                                  Scaler({50.0, 50.0}, {10.0, 10.0}), {});
    auto r = evaluate(m, test);
    std::size_t confusion_total =
        r.confusion[0][0] + r.confusion[0][1] + r.confusion[1][0] +
        r.confusion[1][1];
    CHECK(confusion_total == test.size());
    std::size_t material_total = 0, material_correct = 0;
    for (const auto& [mat, counts] : r.per_material_counts) {
      material_correct += counts.first;
      material_total += counts.second;
    }
    CHECK(material_total == test.size());
    CHECK(static_cast<double>(material_correct) /
              static_cast<double>(material_total) ==
          r.overall_accuracy);
  }

  SECTION("empty test set rejected") {
    auto m = SvmModel::from_parts({1.0, 0.0}, 0.0, Scaler(), {});
    CHECK_THROWS_AS(evaluate(m, {}), std::invalid_argument);
  }
}

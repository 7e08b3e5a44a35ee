// Acceptance gate: eight release criteria, one pass/fail line each.
// argv[1] is the path to the batch CLI binary (used by the end-to-end and
// determinism criteria).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "epigraph/epigraph.hpp"
#include "oracles.hpp"

using namespace epigraph;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_scratch;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = g_scratch / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

/// Naive per-pixel window accumulation sharing only the final sums-to-stats
/// conversion with the library, so equal integer sums must give equal doubles.
LocalStatsMap naive_local_stats(const GrayRaster& img, int window) {
  const std::size_t w = img.width(), h = img.height();
  const int half = window / 2;
  LocalStatsMap out;
  out.width = w;
  out.height = h;
  out.window = window;
  out.mean.resize(w * h);
  out.stddev.resize(w * h);
  out.count.resize(w * h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      std::uint64_t sum = 0, sq = 0, n = 0;
      for (long rr = static_cast<long>(r) - half;
           rr <= static_cast<long>(r) + half; ++rr) {
        if (rr < 0 || rr >= static_cast<long>(h)) continue;
        for (long cc = static_cast<long>(c) - half;
             cc <= static_cast<long>(c) + half; ++cc) {
          if (cc < 0 || cc >= static_cast<long>(w)) continue;
          std::uint64_t v = img.at(static_cast<std::size_t>(rr),
                                   static_cast<std::size_t>(cc));
          sum += v;
          sq += v * v;
          ++n;
        }
      }
      auto [mu, sigma] = detail::stats_from_sums(sum, sq, n);
      std::size_t i = r * w + c;
      out.mean[i] = mu;
      out.stddev[i] = sigma;
      out.count[i] = static_cast<std::uint32_t>(n);
    }
  }
  return out;
}

BinaryRaster complement(const BinaryRaster& img) {
  BinaryRaster out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i)
    out.data()[i] = img.data()[i] ? 0 : 1;
  return out;
}

bool subset_of(const BinaryRaster& a, const BinaryRaster& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.data()[i] && !b.data()[i]) return false;
  return true;
}

// ---------------------------------------------------------------------------

/// 1. otsu_threshold equals an exhaustive 255-candidate search with the
/// smallest-threshold tie-break, on 1000 seeded random histograms, in < 5 s.
bool criterion_otsu(std::string& detail) {
  Rng rng(101);
  auto t0 = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 1000; ++trial) {
    Histogram256 hist;
    int populated = 2 + static_cast<int>(rng.below(120));
    for (int i = 0; i < populated; ++i)
      hist.counts[rng.below(256)] += rng.below(100000) + 1;
    if (hist.counts[10] == 0) hist.counts[10] = 1;
    if (hist.counts[200] == 0) hist.counts[200] = 1;

    int expected = oracles::otsu_exhaustive(hist);
    int got = otsu_threshold(hist);
    if (got != expected) {
      detail = "trial " + std::to_string(trial) + ": got " +
               std::to_string(got) + ", oracle " + std::to_string(expected);
      return false;
    }
  }
  double elapsed = seconds_since(t0);
  detail = "1000 histograms, " + std::to_string(elapsed) + " s";
  return elapsed < 5.0;
}

/// 2. Integral-image mean/std match the naive per-pixel reference within 1e-6
/// everywhere, and binarize_local is bit-identical over the two stats paths.
/// 50 seeded 64x64 images, windows {3, 15, 31}, < 30 s.
bool criterion_local_stats(std::string& detail) {
  Rng rng(202);
  auto t0 = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 50; ++trial) {
    GrayRaster img = oracles::random_gray(rng, 64, 64);
    for (int window : {3, 15, 31}) {
      LocalStatsMap fast = local_stats(img, window);
      for (std::size_t r = 0; r < 64; ++r)
        for (std::size_t c = 0; c < 64; ++c) {
          auto ref = oracles::window_stats_float(img, r, c, window);
          if (std::abs(fast.mean_at(r, c) - ref.mean) > 1e-6 ||
              std::abs(fast.stddev_at(r, c) - ref.stddev) > 1e-6) {
            detail = "trial " + std::to_string(trial) + " window " +
                     std::to_string(window) + ": stats diverge at (" +
                     std::to_string(r) + "," + std::to_string(c) + ")";
            return false;
          }
        }

      LocalStatsMap naive = naive_local_stats(img, window);
      for (ThresholdMethod m :
           {ThresholdMethod::LocalNiblack, ThresholdMethod::LocalSauvola}) {
        ThresholdParams params;
        params.method = m;
        params.window = window;
        if (binarize_local(img, params) !=
            binarize_local_from_stats(img, naive, params)) {
          detail = "trial " + std::to_string(trial) + " window " +
                   std::to_string(window) + ": " + to_string(m) +
                   " differs between stats paths";
          return false;
        }
      }
    }
  }
  double elapsed = seconds_since(t0);
  detail = "50 images x 3 windows, " + std::to_string(elapsed) + " s";
  return elapsed < 30.0;
}

/// 3. Morphological laws on 200 seeded random 32x32 images with box and cross
/// structuring elements: anti-extensivity, extensivity, duality away from the
/// border, idempotence, monotonicity.
bool criterion_morphology(std::string& detail) {
  Rng rng(303);
  const StructuringElement ses[2] = {StructuringElement::box(3),
                                     StructuringElement::cross(3)};
  for (int trial = 0; trial < 200; ++trial) {
    double density = 0.2 + rng.uniform() * 0.6;
    BinaryRaster a = oracles::random_binary(rng, 32, 32, density);
    BinaryRaster b = a;
    for (int extra = 0; extra < 20; ++extra)
      b.set(rng.below(32), rng.below(32), 1);

    for (const auto& se : ses) {
      auto fail = [&](const char* law) {
        detail = "trial " + std::to_string(trial) + ": " + law;
        return false;
      };
      BinaryRaster opened = open(a, se), closed = close(a, se);
      if (!subset_of(opened, a)) return fail("opening not anti-extensive");
      if (!subset_of(erode(a, se), a)) return fail("erosion not anti-extensive");
      if (!subset_of(a, closed)) return fail("closing not extensive");
      if (!subset_of(a, dilate(a, se))) return fail("dilation not extensive");
      if (open(opened, se) != opened) return fail("opening not idempotent");
      if (close(closed, se) != closed) return fail("closing not idempotent");

      BinaryRaster lhs = erode(complement(a), se);
      BinaryRaster rhs = complement(dilate(a, se.reflect()));
      int reach = se.max_reach();
      for (std::size_t r = reach; r + reach < 32; ++r)
        for (std::size_t c = reach; c + reach < 32; ++c)
          if (lhs.at(r, c) != rhs.at(r, c))
            return fail("duality violated in the interior");

      if (!subset_of(erode(a, se), erode(b, se)))
        return fail("erosion not monotone");
      if (!subset_of(dilate(a, se), dilate(b, se)))
        return fail("dilation not monotone");
      if (!subset_of(opened, open(b, se))) return fail("opening not monotone");
      if (!subset_of(closed, close(b, se))) return fail("closing not monotone");
    }
  }
  detail = "200 images x 2 structuring elements, all laws hold";
  return true;
}

/// 4. K-NN equals the brute-force full scan on 500 random queries; the SVM
/// fits a seeded separable 100-point set (margin >= 1 after scaling) to 100%
/// train and >= 99% test accuracy with seed 42, epochs 1000.
bool criterion_classifiers(std::string& detail) {
  Rng rng(404);
  std::vector<LabeledSample> train;
  for (int i = 0; i < 200; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "t%03d", i);
    train.push_back({id, kAllMaterials[rng.below(3)],
                     kAllBackgrounds[rng.below(2)],
                     {rng.uniform() * 255.0, rng.uniform() * 128.0}});
  }
  KnnModel knn = KnnModel::train(train, 3);
  for (int q = 0; q < 500; ++q) {
    FeatureVector f{rng.uniform() * 255.0, rng.uniform() * 128.0};
    if (knn.predict(f) !=
        oracles::knn_full_scan(knn.samples(), knn.scaler(), f, 3)) {
      detail = "k-nn query " + std::to_string(q) + " disagrees with full scan";
      return false;
    }
  }

  // Two diagonal clusters; after z-scoring they sit near (-1,-1) and (1,1),
  // so the diagonal separator keeps a geometric margin above 1.
  Rng svm_rng(42);
  auto cluster_point = [&](Background bg, int i) {
    double cx = bg == Background::Regular ? 30.0 : 100.0;
    double cy = bg == Background::Regular ? 20.0 : 90.0;
    char id[16];
    std::snprintf(id, sizeof id, "%c%03d",
                  bg == Background::Regular ? 'r' : 'i', i);
    return LabeledSample{id, kAllMaterials[i % 3], bg,
                         {cx + svm_rng.uniform(-4.0, 4.0),
                          cy + svm_rng.uniform(-4.0, 4.0)}};
  };
  std::vector<LabeledSample> svm_train, svm_test;
  for (int i = 0; i < 50; ++i) {
    svm_train.push_back(cluster_point(Background::Regular, i));
    svm_train.push_back(cluster_point(Background::Irregular, i));
  }
  for (int i = 0; i < 50; ++i) {
    svm_test.push_back(cluster_point(Background::Regular, 100 + i));
    svm_test.push_back(cluster_point(Background::Irregular, 100 + i));
  }

  Scaler scaler = Scaler::fit(svm_train);
  double min_margin = 1e9;
  for (const auto* set : {&svm_train, &svm_test})
    for (const auto& s : *set) {
      auto t = scaler.transform(s.features);
      double y = s.background == Background::Irregular ? 1.0 : -1.0;
      min_margin = std::min(min_margin, y * (t[0] + t[1]) / std::sqrt(2.0));
    }
  if (min_margin < 1.0) {
    detail = "constructed set margin " + std::to_string(min_margin) + " < 1";
    return false;
  }

  SvmModel svm = SvmModel::train(svm_train, {.C = 1.0, .epochs = 1000,
                                             .seed = 42});
  double train_acc = evaluate(svm, svm_train).overall_accuracy;
  double test_acc = evaluate(svm, svm_test).overall_accuracy;
  detail = "500 k-nn queries exact; svm margin " + std::to_string(min_margin) +
           ", train " + std::to_string(train_acc) + ", test " +
           std::to_string(test_acc);
  return train_acc == 1.0 && test_acc >= 0.99;
}

/// 5. CLI end to end: synth 25 per class at seed 7, pipeline with auto
/// thresholding, k=3 K-NN plus linear SVM, split seed 42; K-NN accuracy
/// >= 0.90 and SVM >= 0.85, in < 60 s.
bool criterion_end_to_end(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  fs::path corpus = fresh_dir("e2e_corpus");
  fs::path out = fresh_dir("e2e_out");
  if (run_cli("synth --out " + corpus.string() + " --per-class 25 --seed 7")) {
    detail = "synth invocation failed";
    return false;
  }
  if (run_cli("pipeline --manifest " + (corpus / "manifest.json").string() +
              " --out " + out.string() +
              " --method auto --algorithm both --knn-k 3 --split-seed 42")) {
    detail = "pipeline invocation failed";
    return false;
  }
  auto report = nlohmann::json::parse(slurp(out / "report.json"), nullptr,
                                      false);
  if (report.is_discarded()) {
    detail = "report.json missing or unparsable";
    return false;
  }
  double knn = report["overall_accuracy"]["knn"].get<double>();
  double svm = report["overall_accuracy"]["svm"].get<double>();
  double elapsed = seconds_since(t0);
  detail = "150 images; k-nn " + std::to_string(knn) + ", svm " +
           std::to_string(svm) + ", " + std::to_string(elapsed) + " s";
  return knn >= 0.90 && svm >= 0.85 && elapsed < 60.0;
}

/// 6. Two identical pipeline runs emit byte-identical report.json,
/// features.csv, and scatter.csv.
bool criterion_determinism(std::string& detail) {
  fs::path corpus = fresh_dir("det_corpus");
  if (run_cli("synth --out " + corpus.string() + " --per-class 5 --seed 7")) {
    detail = "synth invocation failed";
    return false;
  }
  fs::path out_a = fresh_dir("det_a"), out_b = fresh_dir("det_b");
  std::string args = "pipeline --manifest " +
                     (corpus / "manifest.json").string() + " --out ";
  if (run_cli(args + out_a.string()) || run_cli(args + out_b.string())) {
    detail = "pipeline invocation failed";
    return false;
  }
  for (const char* name : {"report.json", "features.csv", "scatter.csv"}) {
    std::string a = slurp(out_a / name), b = slurp(out_b / name);
    if (a.empty() || a != b) {
      detail = std::string(name) + " differs between runs";
      return false;
    }
  }
  detail = "report.json, features.csv, scatter.csv byte-identical";
  return true;
}

/// 7. Integral-image local stats beat the naive reference by >= 5x on a
/// 1024x1024 image with window 31, with identical outputs.
bool criterion_performance(std::string& detail) {
  Rng rng(707);
  GrayRaster img = oracles::random_gray(rng, 1024, 1024);

  auto t0 = std::chrono::steady_clock::now();
  LocalStatsMap fast = local_stats(img, 31);
  double fast_s = seconds_since(t0);

  auto t1 = std::chrono::steady_clock::now();
  LocalStatsMap naive = naive_local_stats(img, 31);
  double naive_s = seconds_since(t1);

  if (fast.mean != naive.mean || fast.stddev != naive.stddev ||
      fast.count != naive.count) {
    detail = "outputs differ between integral and naive paths";
    return false;
  }
  double speedup = naive_s / fast_s;
  detail = "naive " + std::to_string(naive_s) + " s, integral " +
           std::to_string(fast_s) + " s, speedup " + std::to_string(speedup) +
           "x";
  return speedup >= 5.0;
}

/// 8. encode-then-decode identity for PGM, PPM, and PBM on 100 random rasters
/// each.
bool criterion_round_trips(std::string& detail) {
  Rng rng(808);
  fs::path dir = fresh_dir("roundtrip");
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t w = 1 + rng.below(64), h = 1 + rng.below(64);
    PnmEncoding enc = trial % 2 ? PnmEncoding::Ascii : PnmEncoding::Binary;

    GrayRaster gray = oracles::random_gray(rng, w, h);
    save_gray(gray, dir / "g.pgm", enc);
    if (!(std::get<GrayRaster>(load_image(dir / "g.pgm")) == gray)) {
      detail = "PGM trial " + std::to_string(trial) + " not identical";
      return false;
    }

    RgbRaster rgb(w, h);
    for (auto& v : rgb.data()) v = static_cast<std::uint8_t>(rng.below(256));
    save_rgb(rgb, dir / "c.ppm", enc);
    if (!(std::get<RgbRaster>(load_image(dir / "c.ppm")) == rgb)) {
      detail = "PPM trial " + std::to_string(trial) + " not identical";
      return false;
    }

    BinaryRaster bin = oracles::random_binary(rng, w, h, rng.uniform());
    save_binary_pbm(bin, dir / "b.pbm");
    if (!(std::get<BinaryRaster>(load_image(dir / "b.pbm")) == bin)) {
      detail = "PBM trial " + std::to_string(trial) + " not identical";
      return false;
    }
  }
  detail = "100 rasters per format, both encodings for PGM/PPM";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-cli>\n", argv[0]);
    return 2;
  }
  g_cli = argv[1];
  g_scratch = fs::temp_directory_path() / "epigraph_acceptance";
  fs::remove_all(g_scratch);
  fs::create_directories(g_scratch);

  struct Criterion {
    const char* name;
    std::function<bool(std::string&)> fn;
  };
  const Criterion criteria[] = {
      {"otsu matches exhaustive search", criterion_otsu},
      {"local stats match naive reference", criterion_local_stats},
      {"morphology laws hold", criterion_morphology},
      {"classifier oracles agree", criterion_classifiers},
      {"synthetic end-to-end accuracy", criterion_end_to_end},
      {"pipeline runs are deterministic", criterion_determinism},
      {"integral-image speedup", criterion_performance},
      {"PNM round-trips are lossless", criterion_round_trips},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s (%s)\n", ok ? "PASS" : "FAIL", c.name,
                detail.c_str());
    failures += !ok;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}

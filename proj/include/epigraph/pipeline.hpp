#ifndef EPIGRAPH_PIPELINE_HPP
#define EPIGRAPH_PIPELINE_HPP

// Batch orchestration: per-image enhancement, feature extraction, stratified
// split, training, evaluation, and artifact emission (enhanced images,
// features.csv, scatter.csv, histogram.csv, report.json).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epigraph/binarize.hpp"
#include "epigraph/classify.hpp"
#include "epigraph/dataset.hpp"
#include "epigraph/errors.hpp"
#include "epigraph/features.hpp"
#include "epigraph/manifest.hpp"
#include "epigraph/model_io.hpp"
#include "epigraph/morphology.hpp"
#include "epigraph/pnm.hpp"

namespace epigraph {

struct MorphologyConfig {
  bool remove_specks = true;
  std::size_t min_area = 8;
  bool close_gaps = true;
  int se_size = 3;
  Connectivity connectivity = Connectivity::Eight;

  void validate() const {
    if (min_area < 1) throw std::invalid_argument("min_area must be >= 1");
    if (se_size < 1 || se_size % 2 == 0)
      throw std::invalid_argument("se_size must be odd and >= 1");
  }
};

enum class Algorithm { Knn, Svm, Both };

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Knn: return "knn";
    case Algorithm::Svm: return "svm";
    case Algorithm::Both: return "both";
  }
  return "both";
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "knn") return Algorithm::Knn;
  if (s == "svm") return Algorithm::Svm;
  if (s == "both") return Algorithm::Both;
  throw std::invalid_argument("unknown algorithm: " + s);
}

struct ClassifierConfig {
  Algorithm algorithm = Algorithm::Both;
  int knn_k = 3;
  double svm_C = 1.0;
  int svm_epochs = 1000;
  std::uint64_t svm_seed = 42;

  bool runs_knn() const { return algorithm != Algorithm::Svm; }
  bool runs_svm() const { return algorithm != Algorithm::Knn; }
};

struct PipelineConfig {
  ThresholdParams threshold;
  MorphologyConfig morphology;
  ClassifierConfig classifier;
  double split_ratio = 0.8;
  std::uint64_t split_seed = 42;
  std::filesystem::path out_dir;
  bool write_images = true;

  void validate() const {
    threshold.validate();
    morphology.validate();
    if (split_ratio <= 0.0 || split_ratio >= 1.0)
      throw std::invalid_argument("split ratio must be in (0,1)");
  }
};

struct EnhanceResult {
  BinaryRaster enhanced;
  ImageFeatures features;
  ThresholdMethod method_used = ThresholdMethod::Auto;
  bool auto_routed = false;
  std::optional<double> regularity;
  std::optional<int> global_threshold;
  std::size_t region_count = 0;
};

/// Grayscale in, cleaned binary + per-image features out:
/// binarize (dispatch) -> speck removal -> closing -> component labeling ->
/// (mean, std) over the text-region union.
inline EnhanceResult enhance_image(const GrayRaster& gray,
                                   const PipelineConfig& cfg) {
  BinarizeResult bin = binarize(gray, cfg.threshold);

  BinaryRaster cleaned = std::move(bin.image);
  if (cfg.morphology.remove_specks)
    cleaned = remove_small_components(cleaned, cfg.morphology.min_area,
                                      cfg.morphology.connectivity);
  if (cfg.morphology.close_gaps && cfg.morphology.se_size > 1)
    cleaned = close(cleaned, StructuringElement::box(cfg.morphology.se_size));

  auto regions = label_components(cleaned, cfg.morphology.connectivity);

  EnhanceResult result{std::move(cleaned), {}, bin.method_used,
                       bin.auto_routed, bin.regularity, bin.global_threshold,
                       regions.size()};
  result.features = image_features(gray, result.enhanced);
  return result;
}

/// File-level wrapper: load, collapse to grayscale, enhance, optionally write
/// the enhanced binary image.
inline EnhanceResult enhance_one(
    const std::filesystem::path& image_path, const PipelineConfig& cfg,
    const std::optional<std::filesystem::path>& out_path = {}) {
  GrayRaster gray = as_gray(load_image(image_path));
  EnhanceResult result = enhance_image(gray, cfg);
  if (out_path) save_binary(result.enhanced, *out_path);
  return result;
}

struct FeatureRow {
  std::string image_id;
  Material material = Material::Stone;
  Background background = Background::Regular;
  FeatureVector features;
  bool fallback = false;
};

struct SkippedImage {
  std::string image_id;
  std::string reason;
};

struct PipelineOutcome {
  std::vector<FeatureRow> rows;  // manifest order, successfully processed
  std::vector<SkippedImage> skipped;
  DatasetSplit split;
  std::optional<EvaluationReport> knn_report;
  std::optional<EvaluationReport> svm_report;
  std::map<std::string, Background> knn_predictions;  // all processed ids
  std::map<std::string, Background> svm_predictions;
  std::size_t manifest_size = 0;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::vector<LabeledSample> to_samples(
    const std::vector<FeatureRow>& rows) {
  std::vector<LabeledSample> samples;
  samples.reserve(rows.size());
  for (const auto& r : rows)
    samples.push_back({r.image_id, r.material, r.background, r.features});
  return samples;
}

}  // namespace detail

/// Enhances every manifest image and collects feature rows. Failing images
/// are recorded and skipped, never fatal for the batch.
inline PipelineOutcome process_manifest(const DatasetManifest& manifest,
                                        const PipelineConfig& cfg) {
  cfg.validate();
  PipelineOutcome outcome;
  outcome.manifest_size = manifest.entries.size();

  std::filesystem::path enhanced_dir;
  if (cfg.write_images) {
    enhanced_dir = cfg.out_dir / "enhanced";
    std::error_code ec;
    std::filesystem::create_directories(enhanced_dir, ec);
    if (ec) throw IoError("cannot create " + enhanced_dir.string());
  }

  for (const auto& entry : manifest.entries) {
    try {
      std::optional<std::filesystem::path> out_path;
      if (cfg.write_images)
        out_path = enhanced_dir / (entry.image_id + ".pgm");
      EnhanceResult r = enhance_one(entry.path, cfg, out_path);
      outcome.rows.push_back({entry.image_id, entry.material, entry.background,
                              r.features.features,
                              r.features.whole_image_fallback});
    } catch (const Error& e) {
      outcome.skipped.push_back({entry.image_id, e.what()});
    }
  }
  return outcome;
}

/// Splits, trains the configured classifier(s), evaluates on the held-out
/// set, and fills predictions for every processed sample.
inline void train_and_evaluate(PipelineOutcome& outcome,
                               const PipelineConfig& cfg) {
  auto samples = detail::to_samples(outcome.rows);
  outcome.split = split_dataset(samples, cfg.split_ratio, cfg.split_seed);

  if (cfg.classifier.runs_knn()) {
    KnnModel model = KnnModel::train(outcome.split.train, cfg.classifier.knn_k);
    auto report = evaluate(model, outcome.split.test);
    report.split_seed = cfg.split_seed;
    report.n_train = outcome.split.train.size();
    outcome.knn_report = report;
    for (const auto& s : samples)
      outcome.knn_predictions[s.image_id] = model.predict(s.features);
  }
  if (cfg.classifier.runs_svm()) {
    SvmTrainConfig svm_cfg{cfg.classifier.svm_C, cfg.classifier.svm_epochs,
                           cfg.classifier.svm_seed};
    SvmModel model = SvmModel::train(outcome.split.train, svm_cfg);
    auto report = evaluate(model, outcome.split.test);
    report.split_seed = cfg.split_seed;
    report.n_train = outcome.split.train.size();
    outcome.svm_report = report;
    for (const auto& s : samples)
      outcome.svm_predictions[s.image_id] = model.predict(s.features);
  }
}

inline void write_features_csv(const std::vector<FeatureRow>& rows,
                               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "image_id,material,background,mean,std,fallback\n";
  for (const auto& r : rows)
    out << r.image_id << ',' << to_string(r.material) << ','
        << to_string(r.background) << ',' << detail::format_double(r.features.mean)
        << ',' << detail::format_double(r.features.stddev) << ','
        << (r.fallback ? 1 : 0) << '\n';
  if (!out) throw IoError("write failed on " + path.string());
}

inline std::vector<FeatureRow> read_features_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path.string());
  std::string line;
  if (!std::getline(in, line) ||
      line != "image_id,material,background,mean,std,fallback")
    throw Error("unexpected features CSV header in " + path.string());
  std::vector<FeatureRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        fields.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (fields.size() != 6)
      throw Error("line " + std::to_string(lineno) + " of " + path.string() +
                  ": expected 6 fields");
    try {
      rows.push_back({fields[0], parse_material(fields[1]),
                      parse_background(fields[2]),
                      {std::stod(fields[3]), std::stod(fields[4])},
                      fields[5] == "1"});
    } catch (const std::exception& e) {
      throw Error("line " + std::to_string(lineno) + " of " + path.string() +
                  ": " + e.what());
    }
  }
  return rows;
}

/// One (mean, std, actual, predicted) row per processed image; row order
/// matches features.csv so rows join by index.
inline void write_scatter_csv(const PipelineOutcome& outcome,
                              const PipelineConfig& cfg,
                              const std::filesystem::path& path) {
  const auto& predictions = cfg.classifier.runs_knn()
                                ? outcome.knn_predictions
                                : outcome.svm_predictions;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "mean,std,background,predicted\n";
  for (const auto& r : outcome.rows) {
    auto it = predictions.find(r.image_id);
    out << detail::format_double(r.features.mean) << ','
        << detail::format_double(r.features.stddev) << ','
        << to_string(r.background) << ','
        << (it != predictions.end() ? to_string(it->second) : "") << '\n';
  }
  if (!out) throw IoError("write failed on " + path.string());
}

/// Frequency bins of the two feature dimensions: 16 bins of 16 intensity
/// levels for the mean, 16 bins of width 8 for the std.
inline void write_histogram_csv(const std::vector<FeatureRow>& rows,
                                const std::filesystem::path& path) {
  std::array<std::size_t, 16> mean_bins{}, std_bins{};
  for (const auto& r : rows) {
    auto clamp_bin = [](double v, double width) {
      long b = static_cast<long>(v / width);
      return static_cast<std::size_t>(std::clamp(b, 0L, 15L));
    };
    ++mean_bins[clamp_bin(r.features.mean, 16.0)];
    ++std_bins[clamp_bin(r.features.stddev, 8.0)];
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "feature,bin_start,bin_end,count\n";
  for (int i = 0; i < 16; ++i)
    out << "mean," << i * 16 << ',' << (i + 1) * 16 << ',' << mean_bins[i]
        << '\n';
  for (int i = 0; i < 16; ++i)
    out << "std," << i * 8 << ',' << (i + 1) * 8 << ',' << std_bins[i] << '\n';
  if (!out) throw IoError("write failed on " + path.string());
}

namespace detail {

/// Reference accuracy figures for this classification task, carried in every
/// report for side-by-side comparison.
inline nlohmann::json reference_accuracy_json() {
  return {{"knn",
           {{"stone", 0.557}, {"metal", 0.62}, {"document", 0.656}}},
          {"svm",
           {{"stone", 0.532}, {"metal", 0.595}, {"document", 0.678}}}};
}

inline nlohmann::json report_section(const EvaluationReport& r) {
  nlohmann::json per_material = nlohmann::json::object();
  for (const auto& [material, accuracy] : r.per_material_accuracy)
    per_material[to_string(material)] = accuracy;
  nlohmann::json confusion = nlohmann::json::object();
  for (Background actual : kAllBackgrounds) {
    nlohmann::json row = nlohmann::json::object();
    for (Background predicted : kAllBackgrounds)
      row[to_string(predicted)] =
          r.confusion[static_cast<int>(actual)][static_cast<int>(predicted)];
    confusion[to_string(actual)] = row;
  }
  return {{"overall_accuracy", r.overall_accuracy},
          {"per_material", per_material},
          {"confusion", confusion}};
}

}  // namespace detail

inline nlohmann::json build_report_json(const PipelineOutcome& outcome,
                                        const PipelineConfig& cfg) {
  nlohmann::json overall = nlohmann::json::object();
  nlohmann::json per_material = nlohmann::json::object();
  nlohmann::json confusion = nlohmann::json::object();
  for (const auto& [name, report] :
       {std::pair<const char*, const std::optional<EvaluationReport>*>{
            "knn", &outcome.knn_report},
        {"svm", &outcome.svm_report}}) {
    if (!report->has_value()) continue;
    nlohmann::json section = detail::report_section(**report);
    overall[name] = section["overall_accuracy"];
    per_material[name] = section["per_material"];
    confusion[name] = section["confusion"];
  }

  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& s : outcome.skipped)
    skipped.push_back({{"image_id", s.image_id}, {"reason", s.reason}});

  std::vector<std::string> train_ids, test_ids;
  for (const auto& s : outcome.split.train) train_ids.push_back(s.image_id);
  for (const auto& s : outcome.split.test) test_ids.push_back(s.image_id);
  std::sort(train_ids.begin(), train_ids.end());
  std::sort(test_ids.begin(), test_ids.end());

  return {{"overall_accuracy", overall},
          {"per_material", per_material},
          {"confusion", confusion},
          {"seed", cfg.split_seed},
          {"counts",
           {{"total", outcome.manifest_size},
            {"processed", outcome.rows.size()},
            {"skipped", outcome.skipped.size()},
            {"train", outcome.split.train.size()},
            {"test", outcome.split.test.size()}}},
          {"skipped", skipped},
          {"split", {{"train", train_ids}, {"test", test_ids}}},
          {"reference_accuracy", detail::reference_accuracy_json()}};
}

inline void write_report_json(const PipelineOutcome& outcome,
                              const PipelineConfig& cfg,
                              const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << build_report_json(outcome, cfg).dump(2) << "\n";
  if (!out) throw IoError("write failed on " + path.string());
}

/// The whole batch: enhance, extract, split, train, evaluate, emit artifacts
/// into cfg.out_dir.
inline PipelineOutcome run_pipeline(const DatasetManifest& manifest,
                                    const PipelineConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.out_dir.string());

  PipelineOutcome outcome = process_manifest(manifest, cfg);
  train_and_evaluate(outcome, cfg);
  write_features_csv(outcome.rows, cfg.out_dir / "features.csv");
  write_scatter_csv(outcome, cfg, cfg.out_dir / "scatter.csv");
  write_histogram_csv(outcome.rows, cfg.out_dir / "histogram.csv");
  write_report_json(outcome, cfg, cfg.out_dir / "report.json");
  return outcome;
}

}  // namespace epigraph

#endif  // EPIGRAPH_PIPELINE_HPP

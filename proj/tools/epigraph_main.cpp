// epigraph CLI: enhancement, feature extraction, training, evaluation, and
// the full batch pipeline over PNM inscription images.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "epigraph/epigraph.hpp"

namespace fs = std::filesystem;
using namespace epigraph;

namespace {

struct ThresholdFlags {
  std::string method = "auto";
  int window = 31;
  std::optional<double> k;
  double sauvola_r = 128.0;
  std::string polarity = "dark";
  double regularity_cutoff = 18.0;
  int regularity_block = 16;

  void attach(CLI::App* app) {
    app->add_option("--method", method,
                    "Threshold method: auto, global-otsu, local-niblack, "
                    "local-sauvola")
        ->check(CLI::IsMember(
            {"auto", "global-otsu", "local-niblack", "local-sauvola"}));
    app->add_option("--window", window, "Local window side (odd)")
        ->check(CLI::PositiveNumber);
    app->add_option("--threshold-k", k, "Local method k parameter");
    app->add_option("--sauvola-r", sauvola_r, "Sauvola dynamic range R")
        ->check(CLI::PositiveNumber);
    app->add_option("--polarity", polarity, "Text polarity: dark or light")
        ->check(CLI::IsMember({"dark", "light", "dark-text", "light-text"}));
    app->add_option("--regularity-cutoff", regularity_cutoff,
                    "Auto dispatch cutoff on background regularity");
    app->add_option("--regularity-block", regularity_block,
                    "Block side for the regularity measure")
        ->check(CLI::PositiveNumber);
  }

  ThresholdParams to_params() const {
    ThresholdParams p;
    p.method = parse_threshold_method(method);
    p.window = window;
    p.k = k;
    p.dynamic_range = sauvola_r;
    p.polarity = parse_polarity(polarity);
    p.regularity_cutoff = regularity_cutoff;
    p.regularity_block = regularity_block;
    p.validate();
    return p;
  }
};

struct MorphologyFlags {
  std::size_t min_area = 8;
  int se_size = 3;
  int connectivity = 8;
  bool no_speck_removal = false;
  bool no_closing = false;

  void attach(CLI::App* app) {
    app->add_option("--min-area", min_area,
                    "Remove components smaller than this many pixels");
    app->add_option("--se-size", se_size,
                    "Closing structuring element side (odd)")
        ->check(CLI::PositiveNumber);
    app->add_option("--connectivity", connectivity, "4 or 8")
        ->check(CLI::IsMember({4, 8}));
    app->add_flag("--no-speck-removal", no_speck_removal,
                  "Skip small-component removal");
    app->add_flag("--no-closing", no_closing, "Skip morphological closing");
  }

  MorphologyConfig to_config() const {
    MorphologyConfig m;
    m.remove_specks = !no_speck_removal;
    m.min_area = min_area;
    m.close_gaps = !no_closing;
    m.se_size = se_size;
    m.connectivity =
        connectivity == 4 ? Connectivity::Four : Connectivity::Eight;
    m.validate();
    return m;
  }
};

struct ClassifierFlags {
  std::string algorithm = "both";
  int knn_k = 3;
  double svm_c = 1.0;
  int epochs = 1000;
  std::uint64_t svm_seed = 42;

  void attach(CLI::App* app, bool allow_both) {
    std::vector<std::string> choices = {"knn", "svm"};
    if (allow_both) choices.push_back("both");
    app->add_option("--algorithm", algorithm, "Classifier selection")
        ->check(CLI::IsMember(choices));
    if (!allow_both) algorithm = "knn";
    app->add_option("--knn-k", knn_k, "K-NN neighbor count (odd)")
        ->check(CLI::PositiveNumber);
    app->add_option("--svm-c", svm_c, "SVM regularization constant C")
        ->check(CLI::PositiveNumber);
    app->add_option("--epochs", epochs, "SVM training epochs")
        ->check(CLI::PositiveNumber);
    app->add_option("--svm-seed", svm_seed, "SVM shuffle seed");
  }

  ClassifierConfig to_config() const {
    return {parse_algorithm(algorithm), knn_k, svm_c, epochs, svm_seed};
  }
};

struct SplitFlags {
  double ratio = 0.8;
  std::uint64_t seed = 42;

  void attach(CLI::App* app) {
    app->add_option("--split-ratio", ratio, "Training fraction per stratum")
        ->check(CLI::Range(0.01, 0.99));
    app->add_option("--split-seed", seed, "Stratified split seed");
  }
};

void print_evaluation(const std::string& name, const EvaluationReport& r) {
  std::printf("%s accuracy: %.4f (test n=%zu)\n", name.c_str(),
              r.overall_accuracy, r.n_test);
  for (const auto& [material, accuracy] : r.per_material_accuracy) {
    auto counts = r.per_material_counts.at(material);
    std::printf("  %-8s %.4f (%zu/%zu)\n", to_string(material).c_str(),
                accuracy, counts.first, counts.second);
  }
  std::printf("  confusion rows=actual cols=predicted [regular irregular]\n");
  for (Background actual : kAllBackgrounds)
    std::printf("    %-9s %6zu %6zu\n", to_string(actual).c_str(),
                r.confusion[static_cast<int>(actual)][0],
                r.confusion[static_cast<int>(actual)][1]);
}

int run_synth(const SynthConfig& cfg) {
  DatasetManifest manifest = generate_synthetic_corpus(cfg);
  std::printf("wrote %zu images and manifest.json to %s\n",
              manifest.entries.size(), cfg.out_dir.string().c_str());
  return 0;
}

int run_enhance(const fs::path& input, std::optional<fs::path> output,
                const ThresholdFlags& tf, const MorphologyFlags& mf) {
  PipelineConfig cfg;
  cfg.threshold = tf.to_params();
  cfg.morphology = mf.to_config();
  fs::path out =
      output ? *output
             : input.parent_path() / (input.stem().string() + ".enhanced.pgm");
  EnhanceResult r = enhance_one(input, cfg, out);
  std::printf("method: %s%s\n", to_string(r.method_used).c_str(),
              r.auto_routed ? " (auto)" : "");
  if (r.regularity)
    std::printf("background regularity: %.4f\n", *r.regularity);
  if (r.global_threshold)
    std::printf("otsu threshold: %d\n", *r.global_threshold);
  std::printf("regions: %zu\n", r.region_count);
  std::printf("mean: %.6f std: %.6f%s\n", r.features.features.mean,
              r.features.features.stddev,
              r.features.whole_image_fallback ? " (whole-image fallback)" : "");
  std::printf("wrote %s\n", out.string().c_str());
  return 0;
}

int run_features(const fs::path& manifest_path, const fs::path& out_dir,
                 bool write_images, const ThresholdFlags& tf,
                 const MorphologyFlags& mf) {
  DatasetManifest manifest = parse_manifest(manifest_path);
  PipelineConfig cfg;
  cfg.threshold = tf.to_params();
  cfg.morphology = mf.to_config();
  cfg.out_dir = out_dir;
  cfg.write_images = write_images;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string());
  PipelineOutcome outcome = process_manifest(manifest, cfg);
  write_features_csv(outcome.rows, out_dir / "features.csv");
  std::printf("processed %zu of %zu images, wrote %s\n", outcome.rows.size(),
              outcome.manifest_size,
              (out_dir / "features.csv").string().c_str());
  for (const auto& s : outcome.skipped)
    std::printf("skipped %s: %s\n", s.image_id.c_str(), s.reason.c_str());
  return 0;
}

int run_train(const fs::path& features_path, const fs::path& model_path,
              const ClassifierFlags& cf, const SplitFlags& sf) {
  auto rows = read_features_csv(features_path);
  auto samples = detail::to_samples(rows);
  DatasetSplit split = split_dataset(samples, sf.ratio, sf.seed);
  std::printf("split: %zu train / %zu test\n", split.train.size(),
              split.test.size());

  ClassifierModel model = [&]() -> ClassifierModel {
    if (cf.algorithm == "svm") {
      SvmTrainConfig svm_cfg{cf.svm_c, cf.epochs, cf.svm_seed};
      return SvmModel::train(split.train, svm_cfg);
    }
    return KnnModel::train(split.train, cf.knn_k);
  }();

  std::visit(
      [&](const auto& m) {
        auto report = evaluate(m, split.test);
        report.split_seed = sf.seed;
        report.n_train = split.train.size();
        print_evaluation(algorithm_name(model), report);
      },
      model);

  save_model(model, model_path);
  std::printf("wrote %s\n", model_path.string().c_str());
  return 0;
}

int run_evaluate(const fs::path& features_path, const fs::path& model_path) {
  auto rows = read_features_csv(features_path);
  auto samples = detail::to_samples(rows);
  ClassifierModel model = load_model(model_path);
  std::visit(
      [&](const auto& m) {
        print_evaluation(algorithm_name(model), evaluate(m, samples));
      },
      model);
  return 0;
}

int run_pipeline_verb(const fs::path& manifest_path, const fs::path& out_dir,
                      const ThresholdFlags& tf, const MorphologyFlags& mf,
                      const ClassifierFlags& cf, const SplitFlags& sf,
                      bool no_images) {
  DatasetManifest manifest = parse_manifest(manifest_path);
  PipelineConfig cfg;
  cfg.threshold = tf.to_params();
  cfg.morphology = mf.to_config();
  cfg.classifier = cf.to_config();
  cfg.split_ratio = sf.ratio;
  cfg.split_seed = sf.seed;
  cfg.out_dir = out_dir;
  cfg.write_images = !no_images;

  PipelineOutcome outcome = run_pipeline(manifest, cfg);
  std::printf("processed %zu of %zu images (%zu skipped)\n",
              outcome.rows.size(), outcome.manifest_size,
              outcome.skipped.size());
  std::printf("split: %zu train / %zu test\n", outcome.split.train.size(),
              outcome.split.test.size());
  if (outcome.knn_report) print_evaluation("knn", *outcome.knn_report);
  if (outcome.svm_report) print_evaluation("svm", *outcome.svm_report);
  std::printf("artifacts in %s\n", out_dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inscription image enhancement and background classification"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  SynthConfig synth_cfg;
  synth->add_option("--out", synth_cfg.out_dir, "Output directory")
      ->required();
  synth->add_option("--per-class", synth_cfg.per_class,
                    "Images per (material, background) pair")
      ->check(CLI::Range(2, 10000));
  synth->add_option("--seed", synth_cfg.seed, "Corpus seed");
  synth->add_option("--size", synth_cfg.size, "Square image side")
      ->check(CLI::Range(32, 4096));

  // enhance
  auto* enhance = app.add_subcommand("enhance", "Enhance a single image");
  fs::path enhance_input;
  std::optional<fs::path> enhance_output;
  ThresholdFlags enhance_tf;
  MorphologyFlags enhance_mf;
  enhance->add_option("input", enhance_input, "Input PNM image")->required();
  enhance->add_option("-o,--out", enhance_output, "Enhanced output path");
  enhance_tf.attach(enhance);
  enhance_mf.attach(enhance);

  // features
  auto* features =
      app.add_subcommand("features", "Extract features for a manifest");
  fs::path features_manifest, features_out;
  bool features_write_images = false;
  ThresholdFlags features_tf;
  MorphologyFlags features_mf;
  features->add_option("--manifest", features_manifest, "Dataset manifest")
      ->required();
  features->add_option("--out", features_out, "Output directory")->required();
  features->add_flag("--write-images", features_write_images,
                     "Also write enhanced images");
  features_tf.attach(features);
  features_mf.attach(features);

  // train
  auto* train = app.add_subcommand("train", "Train a classifier from a "
                                            "features CSV");
  fs::path train_features, train_model;
  ClassifierFlags train_cf;
  SplitFlags train_sf;
  train->add_option("--features", train_features, "features.csv path")
      ->required();
  train->add_option("--model", train_model, "Model JSON output path")
      ->required();
  train_cf.attach(train, false);
  train_sf.attach(train);

  // evaluate
  auto* evaluate_cmd =
      app.add_subcommand("evaluate", "Evaluate a saved model on a features "
                                     "CSV");
  fs::path eval_features, eval_model;
  evaluate_cmd->add_option("--features", eval_features, "features.csv path")
      ->required();
  evaluate_cmd->add_option("--model", eval_model, "Model JSON path")
      ->required();

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Full batch run");
  fs::path pipeline_manifest, pipeline_out;
  bool pipeline_no_images = false;
  ThresholdFlags pipeline_tf;
  MorphologyFlags pipeline_mf;
  ClassifierFlags pipeline_cf;
  SplitFlags pipeline_sf;
  pipeline->add_option("--manifest", pipeline_manifest, "Dataset manifest")
      ->required();
  pipeline->add_option("--out", pipeline_out, "Output directory")->required();
  pipeline->add_flag("--no-images", pipeline_no_images,
                     "Skip writing enhanced images");
  pipeline_tf.attach(pipeline);
  pipeline_mf.attach(pipeline);
  pipeline_cf.attach(pipeline, true);
  pipeline_sf.attach(pipeline);

  try {
    app.parse(argc, argv);
    if (synth->parsed()) return run_synth(synth_cfg);
    if (enhance->parsed())
      return run_enhance(enhance_input, enhance_output, enhance_tf,
                         enhance_mf);
    if (features->parsed())
      return run_features(features_manifest, features_out,
                          features_write_images, features_tf, features_mf);
    if (train->parsed())
      return run_train(train_features, train_model, train_cf, train_sf);
    if (evaluate_cmd->parsed()) return run_evaluate(eval_features, eval_model);
    if (pipeline->parsed())
      return run_pipeline_verb(pipeline_manifest, pipeline_out, pipeline_tf,
                               pipeline_mf, pipeline_cf, pipeline_sf,
                               pipeline_no_images);
    return 1;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ManifestParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const StratumTooSmallError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const SingleClassTrainingSetError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

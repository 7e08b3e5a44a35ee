#ifndef EPIGRAPH_MODEL_IO_HPP
#define EPIGRAPH_MODEL_IO_HPP

// Versioned JSON (de)serialization for trained classifiers. K-NN embeds its
// training samples; both carry the fitted scaler.

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <variant>

#include "epigraph/classify.hpp"
#include "epigraph/errors.hpp"

namespace epigraph {

using ClassifierModel = std::variant<KnnModel, SvmModel>;

inline std::string algorithm_name(const ClassifierModel& model) {
  return std::holds_alternative<KnnModel>(model) ? "knn" : "svm";
}

inline Background predict(const ClassifierModel& model,
                          const FeatureVector& f) {
  return std::visit([&](const auto& m) { return m.predict(f); }, model);
}

namespace detail {

inline nlohmann::json scaler_to_json(const Scaler& s) {
  return {{"mean", {s.mean()[0], s.mean()[1]}},
          {"std", {s.stddev()[0], s.stddev()[1]}}};
}

inline Scaler scaler_from_json(const nlohmann::json& j) {
  return Scaler({j.at("mean").at(0).get<double>(),
                 j.at("mean").at(1).get<double>()},
                {j.at("std").at(0).get<double>(),
                 j.at("std").at(1).get<double>()});
}

}  // namespace detail

inline nlohmann::json model_to_json(const ClassifierModel& model) {
  nlohmann::json j;
  j["version"] = 1;
  j["algorithm"] = algorithm_name(model);
  if (const auto* knn = std::get_if<KnnModel>(&model)) {
    j["scaler"] = detail::scaler_to_json(knn->scaler());
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : knn->samples())
      samples.push_back({{"image_id", s.image_id},
                         {"material", to_string(s.material)},
                         {"background", to_string(s.background)},
                         {"features", {s.features.mean, s.features.stddev}}});
    j["knn"] = {{"k", knn->k()}, {"samples", samples}};
  } else {
    const auto& svm = std::get<SvmModel>(model);
    j["scaler"] = detail::scaler_to_json(svm.scaler());
    j["svm"] = {{"weights", {svm.weights()[0], svm.weights()[1]}},
                {"bias", svm.bias()},
                {"C", svm.config().C},
                {"epochs", svm.config().epochs},
                {"seed", svm.config().seed}};
  }
  return j;
}

inline ClassifierModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != 1)
      throw Error("unsupported model version");
    Scaler scaler = detail::scaler_from_json(j.at("scaler"));
    std::string algorithm = j.at("algorithm").get<std::string>();
    if (algorithm == "knn") {
      const auto& knn = j.at("knn");
      std::vector<LabeledSample> samples;
      for (const auto& e : knn.at("samples")) {
        LabeledSample s;
        s.image_id = e.at("image_id").get<std::string>();
        s.material = parse_material(e.at("material").get<std::string>());
        s.background = parse_background(e.at("background").get<std::string>());
        s.features = {e.at("features").at(0).get<double>(),
                      e.at("features").at(1).get<double>()};
        samples.push_back(std::move(s));
      }
      return KnnModel::from_parts(std::move(samples), knn.at("k").get<int>(),
                                  scaler);
    }
    if (algorithm == "svm") {
      const auto& svm = j.at("svm");
      SvmTrainConfig cfg;
      cfg.C = svm.at("C").get<double>();
      cfg.epochs = svm.at("epochs").get<int>();
      cfg.seed = svm.at("seed").get<std::uint64_t>();
      return SvmModel::from_parts({svm.at("weights").at(0).get<double>(),
                                   svm.at("weights").at(1).get<double>()},
                                  svm.at("bias").get<double>(), scaler, cfg);
    }
    throw Error("unknown model algorithm: " + algorithm);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model JSON: ") + e.what());
  }
}

inline void save_model(const ClassifierModel& model,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << model_to_json(model).dump(2) << "\n";
  if (!out) throw IoError("write failed on " + path.string());
}

inline ClassifierModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model JSON: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace epigraph

#endif  // EPIGRAPH_MODEL_IO_HPP

#ifndef EPIGRAPH_CLASSIFY_HPP
#define EPIGRAPH_CLASSIFY_HPP

// From-scratch classifiers over the 2-D (mean, std) feature space: z-score
// scaling, K-NN with deterministic tie-breaking, and a linear SVM trained by
// Pegasos-style subgradient descent with best-iterate tracking.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "epigraph/dataset.hpp"
#include "epigraph/errors.hpp"
#include "epigraph/features.hpp"
#include "epigraph/rng.hpp"

namespace epigraph {

using ScaledFeatures = std::array<double, 2>;

/// Z-score transform fitted on training data (population form). Zero-spread
/// dimensions keep std 1 so they pass through unscaled.
class Scaler {
 public:
  Scaler() : mean_{0.0, 0.0}, std_{1.0, 1.0} {}
  Scaler(ScaledFeatures mean, ScaledFeatures std) : mean_(mean), std_(std) {
    if (std_[0] <= 0.0 || std_[1] <= 0.0)
      throw std::invalid_argument("scaler std must be positive");
  }

  static Scaler fit(const std::vector<LabeledSample>& train) {
    if (train.empty())
      throw std::invalid_argument("cannot fit scaler on empty set");
    double n = static_cast<double>(train.size());
    ScaledFeatures mean{0.0, 0.0}, var{0.0, 0.0};
    for (const auto& s : train) {
      mean[0] += s.features.mean;
      mean[1] += s.features.stddev;
    }
    mean[0] /= n;
    mean[1] /= n;
    for (const auto& s : train) {
      double d0 = s.features.mean - mean[0];
      double d1 = s.features.stddev - mean[1];
      var[0] += d0 * d0;
      var[1] += d1 * d1;
    }
    ScaledFeatures std{std::sqrt(var[0] / n), std::sqrt(var[1] / n)};
    if (std[0] == 0.0) std[0] = 1.0;
    if (std[1] == 0.0) std[1] = 1.0;
    return Scaler(mean, std);
  }

  ScaledFeatures transform(const FeatureVector& f) const {
    return {(f.mean - mean_[0]) / std_[0], (f.stddev - mean_[1]) / std_[1]};
  }

  const ScaledFeatures& mean() const { return mean_; }
  const ScaledFeatures& stddev() const { return std_; }

 private:
  ScaledFeatures mean_;
  ScaledFeatures std_;
};

/// Majority vote among the k nearest training samples (Euclidean distance in
/// scaled space). Distance ties order by image_id; a split vote falls back to
/// the single nearest neighbor.
class KnnModel {
 public:
  static KnnModel train(std::vector<LabeledSample> samples, int k = 3) {
    if (samples.empty())
      throw std::invalid_argument("knn needs a non-empty training set");
    if (k < 1 || k % 2 == 0)
      throw std::invalid_argument("k must be odd and positive");
    if (static_cast<std::size_t>(k) > samples.size())
      throw std::invalid_argument("k exceeds training-set size");
    KnnModel m;
    m.k_ = k;
    m.scaler_ = Scaler::fit(samples);
    m.samples_ = std::move(samples);
    m.scaled_.reserve(m.samples_.size());
    for (const auto& s : m.samples_)
      m.scaled_.push_back(m.scaler_.transform(s.features));
    return m;
  }

  static KnnModel from_parts(std::vector<LabeledSample> samples, int k,
                             Scaler scaler) {
    KnnModel m;
    m.k_ = k;
    m.scaler_ = scaler;
    m.samples_ = std::move(samples);
    m.scaled_.reserve(m.samples_.size());
    for (const auto& s : m.samples_)
      m.scaled_.push_back(m.scaler_.transform(s.features));
    return m;
  }

  Background predict(const FeatureVector& f) const {
    ScaledFeatures q = scaler_.transform(f);
    std::vector<std::size_t> order(samples_.size());
    std::iota(order.begin(), order.end(), 0);
    auto dist2 = [&](std::size_t i) {
      double d0 = scaled_[i][0] - q[0], d1 = scaled_[i][1] - q[1];
      return d0 * d0 + d1 * d1;
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      double da = dist2(a), db = dist2(b);
      if (da != db) return da < db;
      return samples_[a].image_id < samples_[b].image_id;
    });
    int votes_irregular = 0;
    int take = std::min<std::size_t>(k_, order.size());
    for (int i = 0; i < take; ++i)
      votes_irregular += samples_[order[i]].background == Background::Irregular;
    if (2 * votes_irregular > take) return Background::Irregular;
    if (2 * votes_irregular < take) return Background::Regular;
    return samples_[order[0]].background;
  }

  int k() const { return k_; }
  const Scaler& scaler() const { return scaler_; }
  const std::vector<LabeledSample>& samples() const { return samples_; }

 private:
  int k_ = 3;
  Scaler scaler_;
  std::vector<LabeledSample> samples_;
  std::vector<ScaledFeatures> scaled_;
};

struct SvmTrainConfig {
  double C = 1.0;
  int epochs = 1000;
  std::uint64_t seed = 42;
};

/// Linear SVM minimizing 0.5*|w|^2 + C * sum hinge(y*(w.x+b)) over scaled
/// features; regular maps to -1, irregular to +1. Subgradient steps with the
/// 1/(lambda*t) rate, lambda = 1/(C*n), samples shuffled each epoch by seed.
/// The returned model is the best iterate by full objective.
class SvmModel {
 public:
  static SvmModel train(const std::vector<LabeledSample>& samples,
                        const SvmTrainConfig& cfg = {}) {
    if (cfg.C <= 0.0) throw std::invalid_argument("C must be positive");
    if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    bool has_regular = false, has_irregular = false;
    for (const auto& s : samples) {
      has_regular |= s.background == Background::Regular;
      has_irregular |= s.background == Background::Irregular;
    }
    if (!has_regular || !has_irregular) throw SingleClassTrainingSetError();

    SvmModel m;
    m.cfg_ = cfg;
    m.scaler_ = Scaler::fit(samples);

    const std::size_t n = samples.size();
    std::vector<ScaledFeatures> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = m.scaler_.transform(samples[i].features);
      y[i] = samples[i].background == Background::Irregular ? 1.0 : -1.0;
    }

    const double lambda = 1.0 / (cfg.C * static_cast<double>(n));
    std::array<double, 2> w{0.0, 0.0};
    double b = 0.0;
    std::array<double, 2> best_w{0.0, 0.0};
    double best_b = 0.0;
    double best_obj = objective(x, y, cfg.C, w, b);

    auto consider = [&](double obj, const std::array<double, 2>& cw,
                        double cb) {
      if (obj < best_obj) {
        best_obj = obj;
        best_w = cw;
        best_b = cb;
      }
    };

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::uint64_t t = 1;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      deterministic_shuffle(order, rng);
      for (std::size_t i : order) {
        double eta = 1.0 / (lambda * static_cast<double>(t));
        double margin = y[i] * (w[0] * x[i][0] + w[1] * x[i][1] + b);
        double shrink = 1.0 - 1.0 / static_cast<double>(t);
        w[0] *= shrink;
        w[1] *= shrink;
        if (margin < 1.0) {
          w[0] += eta * y[i] * x[i][0];
          w[1] += eta * y[i] * x[i][1];
          b += eta * y[i];
        }
        ++t;
      }
      double obj = objective(x, y, cfg.C, w, b);
      if (epoch == 0) m.first_epoch_objective_ = obj;
      consider(obj, w, b);
    }

    m.w_ = best_w;
    m.b_ = best_b;
    m.best_objective_ = best_obj;
    return m;
  }

  static SvmModel from_parts(std::array<double, 2> w, double b, Scaler scaler,
                             SvmTrainConfig cfg) {
    SvmModel m;
    m.w_ = w;
    m.b_ = b;
    m.scaler_ = scaler;
    m.cfg_ = cfg;
    return m;
  }

  double decision_value(const FeatureVector& f) const {
    ScaledFeatures q = scaler_.transform(f);
    return w_[0] * q[0] + w_[1] * q[1] + b_;
  }

  /// sign(w.x + b); zero lands on irregular.
  Background predict(const FeatureVector& f) const {
    return decision_value(f) >= 0.0 ? Background::Irregular
                                    : Background::Regular;
  }

  const std::array<double, 2>& weights() const { return w_; }
  double bias() const { return b_; }
  const Scaler& scaler() const { return scaler_; }
  const SvmTrainConfig& config() const { return cfg_; }
  double first_epoch_objective() const { return first_epoch_objective_; }
  double best_objective() const { return best_objective_; }

 private:
  static double objective(const std::vector<ScaledFeatures>& x,
                          const std::vector<double>& y, double C,
                          const std::array<double, 2>& w, double b) {
    double J = 0.5 * (w[0] * w[0] + w[1] * w[1]);
    for (std::size_t i = 0; i < x.size(); ++i) {
      double margin = y[i] * (w[0] * x[i][0] + w[1] * x[i][1] + b);
      J += C * std::max(0.0, 1.0 - margin);
    }
    return J;
  }

  std::array<double, 2> w_{0.0, 0.0};
  double b_ = 0.0;
  Scaler scaler_;
  SvmTrainConfig cfg_;
  double first_epoch_objective_ = 0.0;
  double best_objective_ = 0.0;
};

struct EvaluationReport {
  double overall_accuracy = 0.0;
  std::map<Material, double> per_material_accuracy;
  std::map<Material, std::pair<std::size_t, std::size_t>>
      per_material_counts;  // correct, total
  // confusion[actual][predicted], indexed by Background enum value
  std::array<std::array<std::size_t, 2>, 2> confusion{};
  std::uint64_t split_seed = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

template <typename Model>
EvaluationReport evaluate(const Model& model,
                          const std::vector<LabeledSample>& test) {
  if (test.empty()) throw std::invalid_argument("test set is empty");
  EvaluationReport report;
  report.n_test = test.size();
  std::size_t correct = 0;
  for (const auto& s : test) {
    Background predicted = model.predict(s.features);
    bool hit = predicted == s.background;
    correct += hit;
    auto& [mat_correct, mat_total] = report.per_material_counts[s.material];
    mat_correct += hit;
    ++mat_total;
    ++report.confusion[static_cast<int>(s.background)]
                      [static_cast<int>(predicted)];
  }
  report.overall_accuracy =
      static_cast<double>(correct) / static_cast<double>(test.size());
  for (const auto& [material, counts] : report.per_material_counts)
    report.per_material_accuracy[material] =
        static_cast<double>(counts.first) / static_cast<double>(counts.second);
  return report;
}

}  // namespace epigraph

#endif  // EPIGRAPH_CLASSIFY_HPP

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace ties {

struct FeatureRow {
  std::string id;
  std::set<std::string> labels;
  std::vector<double> x;
};

struct SplitSpec {
  double train_fraction = 2.0 / 3.0;
  std::uint64_t seed = 0;
};

/// Row indices of each side, ascending.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded random partition with ceil(f * n) training rows. Needs n >= 2 and
/// leaves at least one row on each side.
Split split(std::size_t n_rows, const SplitSpec& spec);

/// Zero mean / unit variance per feature. Constant features map to 0.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(std::span<const FeatureRow> rows);
  std::vector<double> transform(std::span<const double> x) const;
};

struct TrainConfig {
  double l2 = 1e-3;
  std::size_t max_epochs = 2000;
  double learning_rate = 0.5;
  /// Stop once the max-abs gradient entry falls below this.
  double tolerance = 1e-6;
};

struct BinaryLogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  bool converged = false;
  std::size_t epochs = 0;
  std::vector<double> loss_history;

  double probability(std::span<const double> z) const;
};

struct Model {
  std::vector<std::string> labels;
  Standardizer scaler;
  std::vector<BinaryLogisticModel> per_label;
  SplitSpec split;

  bool converged() const;
  /// One probability per label, in `labels` order.
  std::vector<double> predict(std::span<const double> x) const;

  nlohmann::json to_json() const;
  static Model from_json(const nlohmann::json& j);
};

/// Mean log-loss of (w, b) on standardized rows plus (l2 / 2) |w|^2. The bias is not penalized.
double logistic_loss(std::span<const std::vector<double>> z, std::span<const int> y, std::span<const double> w, double b,
                     double l2);

/// Gradient of logistic_loss; the last entry is the bias derivative.
std::vector<double> logistic_gradient(std::span<const std::vector<double>> z, std::span<const int> y,
                                      std::span<const double> w, double b, double l2);

/// Full-batch gradient descent for one label.
BinaryLogisticModel train_binary(std::span<const std::vector<double>> z, std::span<const int> y, const TrainConfig& config);

/// One-vs-rest training. `label_alphabet` defaults to the union of labels in
/// `rows`; every label in it needs at least one positive example.
Model train(std::span<const FeatureRow> rows, const TrainConfig& config, std::set<std::string> label_alphabet = {});

struct LabelMetrics {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0, accuracy = 0.0;
};

/// Micro-averaged over every (example, label) decision.
struct Metrics {
  LabelMetrics micro;
  std::map<std::string, LabelMetrics> per_label;

  double precision() const { return micro.precision; }
  double recall() const { return micro.recall; }
  double f1() const { return micro.f1; }
  double accuracy() const { return micro.accuracy; }

  nlohmann::json to_json() const;
  std::string table() const;
};

/// Fills precision/recall/f1/accuracy from the counts; 0 where a denominator vanishes.
LabelMetrics finalize_counts(LabelMetrics counts);

Metrics evaluate(const Model& model, std::span<const FeatureRow> rows, double threshold = 0.5);

}  // namespace ties

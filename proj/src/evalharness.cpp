#include "ties/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "ties/error.hpp"

namespace ties {

namespace {

// Uniform integer in [0, bound) by rejection; std distributions are not
// reproducible across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow.
double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double linear(std::span<const double> w, double b, std::span<const double> z) {
  double s = b;
  for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * z[k];
  return s;
}

}  // namespace

Split split(std::size_t n_rows, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) throw Error("train fraction must lie in (0, 1)");
  if (n_rows < 2) throw Error("cannot split fewer than 2 rows");
  auto n_train = static_cast<std::size_t>(std::ceil(spec.train_fraction * static_cast<double>(n_rows) - 1e-9));
  n_train = std::clamp<std::size_t>(n_train, 1, n_rows - 1);

  std::vector<std::size_t> perm(n_rows);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = n_rows - 1; i > 0; --i) std::swap(perm[i], perm[uniform_below(rng, i + 1)]);

  Split s;
  s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

Standardizer Standardizer::fit(std::span<const FeatureRow> rows) {
  Standardizer s;
  if (rows.empty()) throw Error("cannot fit a standardizer on zero rows");
  const std::size_t k = rows.front().x.size();
  s.mean.assign(k, 0.0);
  s.scale.assign(k, 1.0);
  for (const auto& r : rows) {
    if (r.x.size() != k) throw ContractViolation("feature rows have inconsistent widths");
    for (std::size_t j = 0; j < k; ++j) s.mean[j] += r.x[j];
  }
  for (auto& m : s.mean) m /= static_cast<double>(rows.size());
  std::vector<double> var(k, 0.0);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < k; ++j) var[j] += (r.x[j] - s.mean[j]) * (r.x[j] - s.mean[j]);
  }
  for (std::size_t j = 0; j < k; ++j) {
    double sd = std::sqrt(var[j] / static_cast<double>(rows.size()));
    s.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

std::vector<double> Standardizer::transform(std::span<const double> x) const {
  if (x.size() != mean.size()) throw ContractViolation("feature width does not match the standardizer");
  std::vector<double> z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean[j]) / scale[j];
  return z;
}

double BinaryLogisticModel::probability(std::span<const double> z) const { return sigmoid(linear(weights, bias, z)); }

double logistic_loss(std::span<const std::vector<double>> z, std::span<const int> y, std::span<const double> w, double b,
                     double l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    double t = linear(w, b, z[i]);
    loss += softplus(t) - y[i] * t;
  }
  loss /= static_cast<double>(z.size());
  double reg = 0.0;
  for (double v : w) reg += v * v;
  return loss + 0.5 * l2 * reg;
}

std::vector<double> logistic_gradient(std::span<const std::vector<double>> z, std::span<const int> y,
                                      std::span<const double> w, double b, double l2) {
  const std::size_t k = w.size();
  std::vector<double> g(k + 1, 0.0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    double r = sigmoid(linear(w, b, z[i])) - y[i];
    for (std::size_t j = 0; j < k; ++j) g[j] += r * z[i][j];
    g[k] += r;
  }
  const double inv_n = 1.0 / static_cast<double>(z.size());
  for (std::size_t j = 0; j < k; ++j) g[j] = g[j] * inv_n + l2 * w[j];
  g[k] *= inv_n;
  return g;
}

BinaryLogisticModel train_binary(std::span<const std::vector<double>> z, std::span<const int> y, const TrainConfig& config) {
  if (z.empty()) throw Error("cannot train on zero rows");
  BinaryLogisticModel m;
  const std::size_t k = z.front().size();
  m.weights.assign(k, 0.0);
  m.loss_history.push_back(logistic_loss(z, y, m.weights, m.bias, config.l2));
  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    auto g = logistic_gradient(z, y, m.weights, m.bias, config.l2);
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    if (gmax < config.tolerance) {
      m.converged = true;
      break;
    }
    for (std::size_t j = 0; j < k; ++j) m.weights[j] -= config.learning_rate * g[j];
    m.bias -= config.learning_rate * g[k];
    m.epochs = epoch + 1;
    m.loss_history.push_back(logistic_loss(z, y, m.weights, m.bias, config.l2));
  }
  return m;
}

bool Model::converged() const {
  return std::all_of(per_label.begin(), per_label.end(), [](const auto& m) { return m.converged; });
}

std::vector<double> Model::predict(std::span<const double> x) const {
  auto z = scaler.transform(x);
  std::vector<double> p;
  p.reserve(per_label.size());
  for (const auto& m : per_label) p.push_back(m.probability(z));
  return p;
}

Model train(std::span<const FeatureRow> rows, const TrainConfig& config, std::set<std::string> label_alphabet) {
  if (rows.empty()) throw Error("cannot train on zero rows");
  if (label_alphabet.empty()) {
    for (const auto& r : rows) label_alphabet.insert(r.labels.begin(), r.labels.end());
  }
  if (label_alphabet.empty()) throw Error("training rows carry no labels");

  Model model;
  model.labels.assign(label_alphabet.begin(), label_alphabet.end());
  model.scaler = Standardizer::fit(rows);
  std::vector<std::vector<double>> z;
  z.reserve(rows.size());
  for (const auto& r : rows) z.push_back(model.scaler.transform(r.x));

  std::vector<int> y(rows.size());
  for (const auto& label : model.labels) {
    std::size_t positives = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      y[i] = rows[i].labels.contains(label) ? 1 : 0;
      positives += static_cast<std::size_t>(y[i]);
    }
    if (positives == 0) throw Error("label '" + label + "' has no example in the training set");
    model.per_label.push_back(train_binary(z, y, config));
  }
  return model;
}

nlohmann::json Model::to_json() const {
  nlohmann::json j;
  j["labels"] = labels;
  j["scaler"] = {{"mean", scaler.mean}, {"scale", scaler.scale}};
  j["split"] = {{"train_fraction", split.train_fraction}, {"seed", split.seed}};
  auto& ms = j["models"] = nlohmann::json::array();
  for (const auto& m : per_label) {
    ms.push_back({{"weights", m.weights}, {"bias", m.bias}, {"converged", m.converged}, {"epochs", m.epochs}});
  }
  return j;
}

Model Model::from_json(const nlohmann::json& j) {
  try {
    Model m;
    m.labels = j.at("labels").get<std::vector<std::string>>();
    m.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
    m.scaler.scale = j.at("scaler").at("scale").get<std::vector<double>>();
    if (j.contains("split")) {
      m.split.train_fraction = j["split"].at("train_fraction").get<double>();
      m.split.seed = j["split"].at("seed").get<std::uint64_t>();
    }
    for (const auto& mj : j.at("models")) {
      BinaryLogisticModel b;
      b.weights = mj.at("weights").get<std::vector<double>>();
      b.bias = mj.at("bias").get<double>();
      b.converged = mj.value("converged", false);
      b.epochs = mj.value("epochs", std::size_t{0});
      if (b.weights.size() != m.scaler.mean.size()) throw Error("model weight width does not match scaler");
      m.per_label.push_back(std::move(b));
    }
    if (m.per_label.size() != m.labels.size()) throw Error("model has " + std::to_string(m.per_label.size()) +
                                                           " classifiers for " + std::to_string(m.labels.size()) +
                                                           " labels");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model: ") + e.what());
  }
}

LabelMetrics finalize_counts(LabelMetrics c) {
  auto ratio = [](std::size_t num, std::size_t den) { return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0; };
  c.precision = ratio(c.tp, c.tp + c.fp);
  c.recall = ratio(c.tp, c.tp + c.fn);
  c.f1 = c.precision + c.recall > 0.0 ? 2.0 * c.precision * c.recall / (c.precision + c.recall) : 0.0;
  c.accuracy = ratio(c.tp + c.tn, c.tp + c.tn + c.fp + c.fn);
  return c;
}

Metrics evaluate(const Model& model, std::span<const FeatureRow> rows, double threshold) {
  Metrics out;
  std::vector<LabelMetrics> counts(model.labels.size());
  const std::set<std::string> known(model.labels.begin(), model.labels.end());
  for (const auto& row : rows) {
    for (const auto& l : row.labels) {
      if (!known.contains(l)) throw ContractViolation("test label '" + l + "' is unknown to the model");
    }
    auto p = model.predict(row.x);
    for (std::size_t k = 0; k < p.size(); ++k) {
      const bool gold = row.labels.contains(model.labels[k]);
      const bool pred = p[k] >= threshold;
      auto& c = counts[k];
      if (pred && gold) ++c.tp;
      else if (pred) ++c.fp;
      else if (gold) ++c.fn;
      else ++c.tn;
    }
  }
  for (std::size_t k = 0; k < counts.size(); ++k) {
    out.micro.tp += counts[k].tp;
    out.micro.fp += counts[k].fp;
    out.micro.fn += counts[k].fn;
    out.micro.tn += counts[k].tn;
    out.per_label[model.labels[k]] = finalize_counts(counts[k]);
  }
  out.micro = finalize_counts(out.micro);
  return out;
}

nlohmann::json Metrics::to_json() const {
  auto one = [](const LabelMetrics& m) {
    return nlohmann::json{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"accuracy", m.accuracy},
                          {"tp", m.tp},           {"fp", m.fp},         {"fn", m.fn}, {"tn", m.tn}};
  };
  nlohmann::json j = one(micro);
  auto& pl = j["per_label"] = nlohmann::json::object();
  for (const auto& [label, m] : per_label) pl[label] = one(m);
  return j;
}

std::string Metrics::table() const {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  auto line = [&](const std::string& name, const LabelMetrics& m) {
    os << name;
    for (std::size_t pad = name.size(); pad < 16; ++pad) os << ' ';
    os << "  " << m.precision << "  " << m.recall << "  " << m.f1 << "  " << m.accuracy << '\n';
  };
  os << "label             prec   rec    f1     acc\n";
  for (const auto& [label, m] : per_label) line(label, m);
  line("micro", micro);
  return os.str();
}

}  // namespace ties

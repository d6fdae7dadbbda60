// Command-line front end: extract, ph, dist, train, eval.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "ties/csv.hpp"
#include "ties/diagram_metric.hpp"
#include "ties/error.hpp"
#include "ties/evalharness.hpp"
#include "ties/format.hpp"
#include "ties/persistence.hpp"
#include "ties/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;

struct ExtractFlags {
  std::string config;
  std::optional<std::string> corpus, format, lexicon, stopwords, window_kind, metric, out, report, phi_dir;
  std::optional<bool> lowercase;
  std::optional<std::size_t> window, workers, dimension_workers;
  std::optional<std::uint64_t> seed;
};

int run_extract(const ExtractFlags& f) {
  ties::RunConfig cfg;
  if (!f.config.empty()) cfg = ties::RunConfig::from_table(ties::ConfigTable::load(f.config));

  if (const char* env = std::getenv(ties::kWorkersEnv); env && *env) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw ties::Error(std::string(ties::kWorkersEnv) + " must be a positive integer");
    cfg.workers = static_cast<std::size_t>(v);
  }
  if (f.corpus) cfg.corpus = *f.corpus;
  if (f.format) cfg.corpus_format = ties::parse_corpus_format(*f.format);
  if (f.lexicon) cfg.lexicon = *f.lexicon;
  if (f.lowercase) cfg.lowercase = *f.lowercase;
  if (f.stopwords) cfg.stopwords = *f.stopwords;
  if (f.window || f.window_kind) {
    cfg.window = ties::WindowSpec(f.window.value_or(cfg.window.size()),
                                  f.window_kind ? ties::parse_window_kind(*f.window_kind) : cfg.window.kind());
  }
  if (f.metric) cfg.psi.metric = ties::parse_diagram_metric(*f.metric);
  if (f.out) cfg.features_out = *f.out;
  if (f.report) cfg.report_out = *f.report;
  if (f.phi_dir) cfg.phi_dir = *f.phi_dir;
  if (f.workers) cfg.workers = *f.workers;
  if (f.dimension_workers) cfg.dimension_workers = *f.dimension_workers;
  if (f.seed) cfg.seed = *f.seed;

  auto report = ties::run_extract(cfg);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& e : report.corpus_errors) {
    std::cerr << "skipped record" << (e.line ? " at line " + std::to_string(e.line) : " " + e.source) << ": " << e.message
              << '\n';
  }
  for (const auto& s : report.skipped) std::cerr << "skipped document '" << s.id << "': " << s.reason << '\n';
  std::cerr << "processed " << report.processed << " of " << report.documents << " documents";
  for (const auto& [stage, secs] : report.stage_seconds) std::cerr << ", " << stage << " " << secs << "s";
  std::cerr << '\n';
  return report.exit_code();
}

int run_ph(const std::string& matrix, int max_hdim, const std::string& out_path) {
  ties::DistanceMatrix phi(ties::read_matrix_csv(matrix));
  auto dg = ties::rips_persistence(phi, max_hdim);
  if (out_path.empty()) {
    ties::write_diagram_csv(std::cout, dg);
  } else {
    std::ofstream out(out_path);
    if (!out) throw ties::IoError("cannot write " + out_path);
    ties::write_diagram_csv(out, dg);
  }
  return kExitOk;
}

int run_dist(const std::string& a, const std::string& b, int hdim, const std::string& metric) {
  auto da = ties::read_diagram_csv(a);
  auto db = ties::read_diagram_csv(b);
  std::cout << ties::format_double(ties::diagram_distance(da, db, hdim, ties::parse_diagram_metric(metric))) << '\n';
  return kExitOk;
}

std::vector<ties::FeatureRow> pick(const std::vector<ties::FeatureRow>& rows, const std::vector<std::size_t>& idx) {
  std::vector<ties::FeatureRow> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(rows[i]);
  return out;
}

int run_train(const std::string& features, const ties::SplitSpec& spec, const ties::TrainConfig& tc,
              const std::string& out_path) {
  auto rows = ties::read_feature_file(features);
  auto s = ties::split(rows.size(), spec);
  std::set<std::string> alphabet;
  for (const auto& r : rows) alphabet.insert(r.labels.begin(), r.labels.end());
  auto model = ties::train(pick(rows, s.train), tc, alphabet);
  model.split = spec;
  std::ofstream out(out_path);
  if (!out) throw ties::IoError("cannot write " + out_path);
  out << model.to_json().dump(2) << '\n';
  std::cerr << "trained " << model.labels.size() << " label classifier(s) on " << s.train.size() << " rows"
            << (model.converged() ? "" : " (not all converged)") << '\n';
  return kExitOk;
}

int run_eval(const std::string& features, const std::string& model_path, double threshold, const std::string& json_out) {
  std::ifstream in(model_path);
  if (!in) throw ties::IoError("cannot open " + model_path);
  nlohmann::json mj;
  try {
    mj = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ties::Error(std::string("malformed model file: ") + e.what());
  }
  auto model = ties::Model::from_json(mj);
  auto rows = ties::read_feature_file(features);
  auto s = ties::split(rows.size(), model.split);
  auto metrics = ties::evaluate(model, pick(rows, s.test), threshold);
  std::cout << metrics.to_json().dump(2) << '\n' << metrics.table();
  if (!json_out.empty()) {
    std::ofstream out(json_out);
    if (!out) throw ties::IoError("cannot write " + json_out);
    out << metrics.to_json().dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological features of word-embedding dimensions"};
  app.require_subcommand(1);

  ExtractFlags ef;
  auto* extract = app.add_subcommand("extract", "Compute feature vectors for a corpus");
  extract->add_option("--config", ef.config, "TOML run configuration");
  extract->add_option("--corpus", ef.corpus, "Corpus path");
  extract->add_option("--format", ef.format, "jsonl or directory");
  extract->add_option("--lexicon", ef.lexicon, "Embedding text file");
  extract->add_option("--lowercase", ef.lowercase, "Case-fold tokens (true/false)");
  extract->add_option("--stopwords", ef.stopwords, "Stopword file");
  extract->add_option("--window", ef.window, "Odd window size");
  extract->add_option("--window-kind", ef.window_kind, "arithmetic or exponential");
  extract->add_option("--metric", ef.metric, "w1, w2 or bottleneck");
  extract->add_option("--out", ef.out, "Feature file (.csv or .jsonl)");
  extract->add_option("--report", ef.report, "Run report JSON");
  extract->add_option("--phi-dir", ef.phi_dir, "Directory for per-document distance matrices");
  extract->add_option("--workers", ef.workers, "Document-level worker threads");
  extract->add_option("--dimension-workers", ef.dimension_workers, "Threads per document");
  extract->add_option("--seed", ef.seed, "Run seed");

  std::string ph_matrix, ph_out;
  int ph_max_hdim = 1;
  auto* ph = app.add_subcommand("ph", "Persistence diagram of a distance matrix CSV");
  ph->add_option("matrix", ph_matrix, "Distance matrix CSV")->required();
  ph->add_option("--max-hdim", ph_max_hdim, "Highest homology dimension (0 or 1)")->check(CLI::Range(0, 1));
  ph->add_option("--out", ph_out, "Output CSV (default stdout)");

  std::string dist_a, dist_b, dist_metric = "w1";
  int dist_hdim = 0;
  auto* dist = app.add_subcommand("dist", "Distance between two diagram CSVs");
  dist->add_option("diagram_a", dist_a)->required();
  dist->add_option("diagram_b", dist_b)->required();
  dist->add_option("--hdim", dist_hdim, "Homology dimension")->check(CLI::Range(0, 1));
  dist->add_option("--metric", dist_metric, "w1, w2 or bottleneck");

  std::string train_features, train_out;
  ties::SplitSpec train_split;
  ties::TrainConfig train_cfg;
  auto* train = app.add_subcommand("train", "Train one-vs-rest logistic regression on the training split");
  train->add_option("--features", train_features)->required();
  train->add_option("--seed", train_split.seed);
  train->add_option("--train-fraction", train_split.train_fraction);
  train->add_option("--out", train_out)->required();
  train->add_option("--l2", train_cfg.l2);
  train->add_option("--epochs", train_cfg.max_epochs);
  train->add_option("--learning-rate", train_cfg.learning_rate);
  train->add_option("--tolerance", train_cfg.tolerance);

  std::string eval_features, eval_model, eval_json;
  double eval_threshold = 0.5;
  auto* eval = app.add_subcommand("eval", "Evaluate a model on the held-out split");
  eval->add_option("--features", eval_features)->required();
  eval->add_option("--model", eval_model)->required();
  eval->add_option("--threshold", eval_threshold);
  eval->add_option("--json", eval_json, "Also write metrics JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFatal;
  }

  try {
    if (*extract) return run_extract(ef);
    if (*ph) return run_ph(ph_matrix, ph_max_hdim, ph_out);
    if (*dist) return run_dist(dist_a, dist_b, dist_hdim, dist_metric);
    if (*train) return run_train(train_features, train_split, train_cfg, train_out);
    if (*eval) return run_eval(eval_features, eval_model, eval_threshold, eval_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFatal;
  }
  return kExitFatal;
}

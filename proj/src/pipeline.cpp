#include "ties/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <set>

#include "ties/error.hpp"
#include "ties/parallel.hpp"

namespace ties {

namespace fs = std::filesystem;

RunConfig RunConfig::from_table(const ConfigTable& t) {
  static const std::set<std::string> known = {
      "corpus.path",    "corpus.format",   "lexicon.path",    "tokenizer.lowercase", "tokenizer.stopwords",
      "window.size",    "window.kind",     "psi.metric",      "output.features",     "output.report",
      "output.phi_dir", "run.workers",     "run.dimension_workers", "run.seed"};
  for (const auto& [key, value] : t.values()) {
    if (!known.contains(key)) throw Error("unknown config key '" + key + "'");
  }

  RunConfig c;
  if (auto v = t.get_string("corpus.path")) c.corpus = *v;
  if (auto v = t.get_string("corpus.format")) c.corpus_format = parse_corpus_format(*v);
  if (auto v = t.get_string("lexicon.path")) c.lexicon = *v;
  if (auto v = t.get_bool("tokenizer.lowercase")) c.lowercase = *v;
  if (auto v = t.get_string("tokenizer.stopwords")) c.stopwords = fs::path(*v);
  std::size_t size = c.window.size();
  WindowKind kind = c.window.kind();
  if (auto v = t.get_int("window.size")) {
    if (*v <= 0) throw Error("window.size must be positive");
    size = static_cast<std::size_t>(*v);
  }
  if (auto v = t.get_string("window.kind")) kind = parse_window_kind(*v);
  c.window = WindowSpec(size, kind);
  if (auto v = t.get_string("psi.metric")) c.psi.metric = parse_diagram_metric(*v);
  if (auto v = t.get_string("output.features")) c.features_out = *v;
  if (auto v = t.get_string("output.report")) c.report_out = fs::path(*v);
  if (auto v = t.get_string("output.phi_dir")) c.phi_dir = fs::path(*v);
  auto positive = [](std::int64_t v, const char* key) {
    if (v < 1) throw Error(std::string(key) + " must be >= 1");
    return static_cast<std::size_t>(v);
  };
  if (auto v = t.get_int("run.workers")) c.workers = positive(*v, "run.workers");
  if (auto v = t.get_int("run.dimension_workers")) c.dimension_workers = positive(*v, "run.dimension_workers");
  if (auto v = t.get_int("run.seed")) c.seed = static_cast<std::uint64_t>(*v);
  return c;
}

void RunConfig::validate() const {
  std::error_code ec;
  if (corpus.empty()) throw Error("no corpus path configured");
  if (!fs::exists(corpus, ec)) throw IoError("corpus not found: " + corpus.string());
  if (lexicon.empty()) throw Error("no lexicon path configured");
  if (!fs::is_regular_file(lexicon, ec)) throw IoError("lexicon not found: " + lexicon.string());
  if (stopwords && !fs::is_regular_file(*stopwords, ec)) throw IoError("stopword file not found: " + stopwords->string());
  if (features_out.empty()) throw Error("no feature output path configured");
  if (workers < 1 || dimension_workers < 1) throw Error("worker counts must be >= 1");
}

nlohmann::json ExtractReport::to_json() const {
  nlohmann::json j;
  j["documents"] = documents;
  j["processed"] = processed;
  auto& sk = j["skipped"] = nlohmann::json::array();
  for (const auto& s : skipped) sk.push_back({{"id", s.id}, {"reason", s.reason}});
  auto& ce = j["corpus_errors"] = nlohmann::json::array();
  for (const auto& e : corpus_errors) ce.push_back({{"line", e.line}, {"source", e.source}, {"message", e.message}});
  j["warnings"] = warnings;
  j["timing"] = stage_seconds;
  return j;
}

namespace {

class StageTimer {
 public:
  explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink) {}
  void lap(const std::string& stage) {
    auto now = std::chrono::steady_clock::now();
    sink_[stage] += std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

 private:
  std::map<std::string, double>& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

DocumentResult extract_document(const LabeledDocument& doc, const ExtractContext& ctx) {
  DocumentResult out;
  StageTimer timer(out.stage_seconds);

  TokenStream tokens = tokenize(doc.text, ctx.tokenizer, doc.id);
  timer.lap("tokenize");
  DocMatrix x = embed_document(tokens, ctx.lexicon);
  timer.lap("embed");
  SmoothedMatrix smoothed = smooth(x, ctx.window);
  timer.lap("smooth");
  if (smoothed.rows() < 10 * ctx.window.size()) {
    out.warnings.push_back("document '" + doc.id + "': only " + std::to_string(smoothed.rows()) +
                           " smoothed rows for window " + std::to_string(ctx.window.size()) +
                           "; features will be noisy");
  }
  DistanceResult dist = distance_matrix(smoothed);
  for (std::size_t d : dist.degenerate_dimensions) {
    out.warnings.push_back("document '" + doc.id + "': embedding dimension " + std::to_string(d + 1) + " is all zero");
  }
  timer.lap("distance");

  out.record.id = doc.id;
  out.record.labels = doc.labels;
  out.record.features = ties_features(dist.matrix, ctx.psi, ctx.dimension_workers);
  timer.lap("persistence");
  out.record.features.doc_id = doc.id;
  auto& md = out.record.features.metadata;
  md.window_size = ctx.window.size();
  md.window_kind = ctx.window.kind();
  md.tokens = x.rows();
  md.smoothed_length = smoothed.rows();
  md.oov_count = x.oov_count;
  out.phi = std::move(dist.matrix);
  return out;
}

ExtractReport run_extract(const RunConfig& config) {
  config.validate();
  ExtractReport report;

  ExtractContext ctx;
  ctx.lexicon = load_lexicon(config.lexicon, &report.warnings);
  if (ctx.lexicon.dimension() < 3) {
    throw Error("lexicon dimension " + std::to_string(ctx.lexicon.dimension()) + " is too small (need >= 3)");
  }
  ctx.tokenizer.lowercase = config.lowercase;
  if (config.stopwords) ctx.tokenizer.stopwords = load_stopwords(*config.stopwords);
  ctx.window = config.window;
  ctx.psi = config.psi;
  ctx.dimension_workers = config.dimension_workers;

  Corpus corpus = load_corpus(config.corpus, config.corpus_format);
  report.documents = corpus.documents.size();
  report.corpus_errors = corpus.errors;

  std::set<std::string> seen;
  for (const auto& d : corpus.documents) {
    if (!seen.insert(d.id).second) report.warnings.push_back("duplicate document id '" + d.id + "'");
  }

  struct Slot {
    std::optional<DocumentResult> result;
    std::string error;
  };
  std::vector<Slot> slots(corpus.documents.size());
  parallel_for(slots.size(), config.workers, [&](std::size_t i) {
    try {
      slots[i].result = extract_document(corpus.documents[i], ctx);
    } catch (const DegenerateDocument& e) {
      slots[i].error = std::string("all tokens out of vocabulary: ") + e.what();
    } catch (const DocumentTooShort& e) {
      slots[i].error = std::string("too short: ") + e.what();
    } catch (const std::exception& e) {
      slots[i].error = e.what();
    }
  });

  if (config.phi_dir) fs::create_directories(*config.phi_dir);
  std::ofstream out(config.features_out, std::ios::binary);
  if (!out) throw IoError("cannot write features: " + config.features_out.string());
  const FeatureFormat format = feature_format_for(config.features_out);
  if (format == FeatureFormat::kCsv) write_feature_csv_header(out, ctx.lexicon.dimension());

  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& doc = corpus.documents[i];
    if (!slots[i].result) {
      report.skipped.push_back({doc.id, slots[i].error});
      continue;
    }
    auto& r = *slots[i].result;
    r.record.features.metadata.metric = config.psi.metric;
    if (format == FeatureFormat::kCsv) {
      write_feature_csv_row(out, r.record);
    } else {
      write_feature_jsonl_row(out, r.record);
    }
    if (config.phi_dir) {
      // Ids are free text; keep the dump inside phi_dir.
      std::string name = doc.id;
      for (char& c : name)
        if (c == '/' || c == '\\' || c == '\0') c = '_';
      if (name.empty() || name == "." || name == "..") name = "_" + name;
      std::ofstream phi_out(*config.phi_dir / (name + ".csv"), std::ios::binary);
      if (!phi_out) throw IoError("cannot write distance matrix for '" + doc.id + "'");
      write_matrix_csv(phi_out, r.phi.values());
    }
    report.warnings.insert(report.warnings.end(), r.warnings.begin(), r.warnings.end());
    for (const auto& [stage, secs] : r.stage_seconds) report.stage_seconds[stage] += secs;
    ++report.processed;
  }
  out.close();
  if (!out) throw IoError("failed writing features: " + config.features_out.string());

  if (config.report_out) {
    std::ofstream rep(*config.report_out, std::ios::binary);
    if (!rep) throw IoError("cannot write report: " + config.report_out->string());
    rep << report.to_json().dump(2) << '\n';
  }
  return report;
}

}  // namespace ties

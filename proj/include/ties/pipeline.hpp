#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ties/config.hpp"
#include "ties/csv.hpp"
#include "ties/embedding.hpp"
#include "ties/features.hpp"
#include "ties/signal.hpp"
#include "ties/textprep.hpp"

namespace ties {

struct RunConfig {
  std::filesystem::path corpus;
  CorpusFormat corpus_format = CorpusFormat::kJsonl;
  std::filesystem::path lexicon;
  bool lowercase = false;
  std::optional<std::filesystem::path> stopwords;
  WindowSpec window{3};
  PsiParams psi;
  std::filesystem::path features_out;
  std::optional<std::filesystem::path> report_out;
  /// When set, each document's distance matrix is written to <phi_dir>/<id>.csv.
  std::optional<std::filesystem::path> phi_dir;
  std::size_t workers = 1;
  /// Threads per document for the leave-one-out runs.
  std::size_t dimension_workers = 1;
  std::uint64_t seed = 0;

  /// Reads keys corpus.path, corpus.format, lexicon.path, tokenizer.lowercase,
  /// tokenizer.stopwords, window.size, window.kind, psi.metric,
  /// output.features, output.report, output.phi_dir, run.workers,
  /// run.dimension_workers and run.seed. Unknown keys are an error.
  static RunConfig from_table(const ConfigTable& table);

  /// Throws Error when a required path is missing or unreadable or a count is zero.
  void validate() const;
};

/// Environment variable that overrides the configured worker count.
inline constexpr const char* kWorkersEnv = "TIES_WORKERS";

struct SkippedDocument {
  std::string id;
  std::string reason;
};

struct ExtractReport {
  std::size_t documents = 0;
  std::size_t processed = 0;
  std::vector<SkippedDocument> skipped;
  std::vector<RecordError> corpus_errors;
  std::vector<std::string> warnings;
  /// Wall time per stage summed over documents, in seconds.
  std::map<std::string, double> stage_seconds;

  /// 0 on a clean run, 2 when any document or record was skipped.
  int exit_code() const { return skipped.empty() && corpus_errors.empty() ? 0 : 2; }

  /// Timings are under the "timing" key; everything else is deterministic.
  nlohmann::json to_json() const;
};

/// Everything the per-document pipeline needs, loaded once and shared read-only.
struct ExtractContext {
  EmbeddingLexicon lexicon;
  TokenizerOptions tokenizer;
  WindowSpec window{3};
  PsiParams psi;
  std::size_t dimension_workers = 1;
};

struct DocumentResult {
  FeatureRecord record;
  DistanceMatrix phi;
  std::vector<std::string> warnings;
  std::map<std::string, double> stage_seconds;
};

/// tokenize -> embed -> smooth -> distance matrix -> leave-one-out features.
/// Throws DegenerateDocument / DocumentTooShort for documents that must be skipped.
DocumentResult extract_document(const LabeledDocument& doc, const ExtractContext& ctx);

/// Runs the whole batch and writes the feature file (and report, when configured).
/// Rows appear in corpus order whatever the worker count. Throws on fatal
/// config, lexicon or I/O errors only.
ExtractReport run_extract(const RunConfig& config);

}  // namespace ties

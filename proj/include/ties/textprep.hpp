#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace ties {

struct LabeledDocument {
  std::string id;
  std::string text;
  std::set<std::string> labels;

  friend bool operator==(const LabeledDocument&, const LabeledDocument&) = default;
};

struct TokenStream {
  std::vector<std::string> tokens;
  std::string source_id;
};

enum class CorpusFormat { kJsonl, kDirectory };

CorpusFormat parse_corpus_format(std::string_view name);

/// A record that could not be turned into a document. Processing continues past it.
struct RecordError {
  std::size_t line = 0;  // 1-based for JSONL, 0 in directory mode
  std::string source;
  std::string message;
};

/// Single-consumer stream over a corpus on disk.
///
/// JSONL: one object per line, keys `id` (string), `text` (string) and the
/// optional `labels` (array of strings). Blank lines are skipped. Records
/// without an `id` get the line number as id.
/// Directory: every `*.txt` file is a document with id = file stem, visited
/// in lexicographic filename order.
class CorpusStream {
 public:
  CorpusStream(const std::filesystem::path& path, CorpusFormat format);

  /// Next well-formed document, or nullopt at end of corpus.
  std::optional<LabeledDocument> next();

  const std::vector<RecordError>& errors() const { return errors_; }

 private:
  std::optional<LabeledDocument> next_jsonl();
  std::optional<LabeledDocument> next_file();

  CorpusFormat format_;
  std::ifstream jsonl_;
  std::size_t line_no_ = 0;
  std::vector<std::filesystem::path> files_;
  std::size_t file_pos_ = 0;
  std::vector<RecordError> errors_;
};

struct Corpus {
  std::vector<LabeledDocument> documents;
  std::vector<RecordError> errors;
};

/// Reads the whole corpus. Throws IoError when the path cannot be opened.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

struct TokenizerOptions {
  bool lowercase = false;
  std::optional<std::unordered_set<std::string>> stopwords;
};

TokenStream tokenize(std::string_view text, const TokenizerOptions& opts, std::string source_id = {});

/// One word per line, UTF-8; lines starting with '#' and blank lines are ignored.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

/// Case-folds ASCII, Latin-1, Greek and Cyrillic letters; other code points pass through.
std::string fold_case(std::string_view s);

}  // namespace ties

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ties/matrix.hpp"
#include "ties/textprep.hpp"

namespace ties {

/// Immutable token -> vector table. Vectors are held at double precision.
class EmbeddingLexicon {
 public:
  EmbeddingLexicon() = default;
  explicit EmbeddingLexicon(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return tokens_.size(); }

  /// Adds an entry; returns false (and leaves the table unchanged) when the token already exists.
  bool add(std::string token, std::span<const double> vec);

  /// nullptr when the token is out of vocabulary.
  const double* find(std::string_view token) const;

  /// Tokens in insertion order.
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::span<const double> vector(std::size_t i) const { return {values_.data() + i * dimension_, dimension_}; }

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> tokens_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Reads the whitespace-separated text format used by GloVe, fastText and
/// Numberbatch: `token v1 ... vD` per line, with an optional leading
/// `count dimension` header. Duplicate tokens keep the first vector and
/// add a message to `warnings` (when given). Arity mismatches throw ParseError.
EmbeddingLexicon load_lexicon(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

/// Writes the lexicon in the same text format (with header), shortest round-trip decimals.
void dump_lexicon(const EmbeddingLexicon& lexicon, const std::filesystem::path& path);

/// Document as a T x D matrix, row t = embedding of the t-th in-vocabulary token.
struct DocMatrix {
  Matrix values;
  std::size_t oov_count = 0;

  std::size_t rows() const { return values.rows(); }
  std::size_t dim() const { return values.cols(); }
};

/// Out-of-vocabulary tokens are dropped. Throws DegenerateDocument if none survive.
DocMatrix embed_document(const TokenStream& tokens, const EmbeddingLexicon& lexicon);

}  // namespace ties

#include "ties/embedding.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "ties/error.hpp"
#include "ties/format.hpp"

namespace ties {

bool EmbeddingLexicon::add(std::string token, std::span<const double> vec) {
  if (vec.size() != dimension_) throw ContractViolation("vector length does not match lexicon dimension");
  auto [it, inserted] = index_.try_emplace(token, tokens_.size());
  if (!inserted) return false;
  tokens_.push_back(std::move(token));
  values_.insert(values_.end(), vec.begin(), vec.end());
  return true;
}

const double* EmbeddingLexicon::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? nullptr : values_.data() + it->second * dimension_;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_integer(std::string_view s) {
  unsigned long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

EmbeddingLexicon load_lexicon(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon: " + path.string());

  EmbeddingLexicon lex;
  bool have_dim = false;
  std::vector<double> vec;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2 && is_integer(fields[0]) && is_integer(fields[1])) continue;
    if (fields.size() < 2) throw ParseError("lexicon line has no vector", line_no);

    std::size_t dim = fields.size() - 1;
    if (!have_dim) {
      lex = EmbeddingLexicon(dim);
      have_dim = true;
    } else if (dim != lex.dimension()) {
      throw ParseError("expected " + std::to_string(lex.dimension()) + " values, found " + std::to_string(dim), line_no);
    }
    vec.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      auto f = fields[k + 1];
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), vec[k]);
      if (ec != std::errc{} || p != f.data() + f.size() || !std::isfinite(vec[k])) {
        throw ParseError("bad number '" + std::string(f) + "'", line_no);
      }
    }
    if (!lex.add(std::string(fields[0]), vec) && warnings) {
      warnings->push_back("duplicate token '" + std::string(fields[0]) + "' at line " + std::to_string(line_no) +
                          " ignored");
    }
  }
  if (!have_dim) throw ParseError("lexicon has no entries: " + path.string(), 0);
  return lex;
}

void dump_lexicon(const EmbeddingLexicon& lexicon, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write lexicon: " + path.string());
  out << lexicon.size() << ' ' << lexicon.dimension() << '\n';
  for (std::size_t i = 0; i < lexicon.size(); ++i) {
    out << lexicon.tokens()[i];
    for (double v : lexicon.vector(i)) out << ' ' << format_double(v);
    out << '\n';
  }
}

DocMatrix embed_document(const TokenStream& tokens, const EmbeddingLexicon& lexicon) {
  std::vector<const double*> rows;
  rows.reserve(tokens.tokens.size());
  for (const auto& t : tokens.tokens) {
    if (const double* v = lexicon.find(t)) rows.push_back(v);
  }
  if (rows.empty()) throw DegenerateDocument(tokens.source_id);

  DocMatrix doc;
  doc.oov_count = tokens.tokens.size() - rows.size();
  doc.values = Matrix(rows.size(), lexicon.dimension());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    std::copy(rows[t], rows[t] + lexicon.dimension(), doc.values.row(t).begin());
  }
  return doc;
}

}  // namespace ties

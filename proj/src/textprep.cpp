#include "ties/textprep.hpp"

#include <algorithm>
#include <json.hpp>

#include "ties/error.hpp"

namespace ties {

namespace fs = std::filesystem;

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "directory" || name == "dir") return CorpusFormat::kDirectory;
  throw Error("unknown corpus format '" + std::string(name) + "' (expected jsonl or directory)");
}

CorpusStream::CorpusStream(const fs::path& path, CorpusFormat format) : format_(format) {
  std::error_code ec;
  if (format == CorpusFormat::kJsonl) {
    if (fs::is_directory(path, ec)) throw IoError("corpus path is a directory: " + path.string());
    jsonl_.open(path);
    if (!jsonl_) throw IoError("cannot open corpus: " + path.string());
    return;
  }
  if (!fs::is_directory(path, ec)) throw IoError("corpus directory not found: " + path.string());
  for (const auto& entry : fs::directory_iterator(path, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files_.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list corpus directory: " + path.string());
  std::sort(files_.begin(), files_.end());
}

std::optional<LabeledDocument> CorpusStream::next() {
  return format_ == CorpusFormat::kJsonl ? next_jsonl() : next_file();
}

std::optional<LabeledDocument> CorpusStream::next_jsonl() {
  std::string line;
  while (std::getline(jsonl_, line)) {
    ++line_no_;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    auto record_error = [&](std::string msg) {
      errors_.push_back({line_no_, {}, std::move(msg)});
    };
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      record_error(std::string("invalid JSON: ") + e.what());
      continue;
    }
    if (!obj.is_object()) {
      record_error("record is not a JSON object");
      continue;
    }
    auto text = obj.find("text");
    if (text == obj.end() || !text->is_string()) {
      record_error("missing string field \"text\"");
      continue;
    }
    LabeledDocument doc;
    doc.text = text->get<std::string>();
    if (auto id = obj.find("id"); id != obj.end() && id->is_string()) {
      doc.id = id->get<std::string>();
    } else if (id != obj.end() && id->is_number_integer()) {
      doc.id = std::to_string(id->get<long long>());
    } else {
      doc.id = std::to_string(line_no_);
    }
    if (auto labels = obj.find("labels"); labels != obj.end() && !labels->is_null()) {
      if (!labels->is_array()) {
        record_error("\"labels\" must be an array of strings");
        continue;
      }
      bool ok = true;
      for (const auto& l : *labels) {
        if (!l.is_string()) {
          ok = false;
          break;
        }
        doc.labels.insert(l.get<std::string>());
      }
      if (!ok) {
        record_error("\"labels\" must be an array of strings");
        continue;
      }
    }
    return doc;
  }
  return std::nullopt;
}

std::optional<LabeledDocument> CorpusStream::next_file() {
  while (file_pos_ < files_.size()) {
    const fs::path& p = files_[file_pos_++];
    std::ifstream in(p, std::ios::binary);
    if (!in) {
      errors_.push_back({0, p.string(), "cannot read file"});
      continue;
    }
    LabeledDocument doc;
    doc.id = p.stem().string();
    doc.text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return doc;
  }
  return std::nullopt;
}

Corpus load_corpus(const fs::path& path, CorpusFormat format) {
  CorpusStream stream(path, format);
  Corpus corpus;
  while (auto doc = stream.next()) corpus.documents.push_back(std::move(*doc));
  corpus.errors = stream.errors();
  return corpus;
}

namespace {

// Decodes one UTF-8 code point starting at s[i]; advances i. Invalid bytes decode as themselves.
char32_t decode(std::string_view s, std::size_t& i) {
  auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  if ((b0 & 0xE0) == 0xC0) {
    int c1 = cont(1);
    if (c1 >= 0) {
      i += 2;
      return (char32_t(b0 & 0x1F) << 6) | char32_t(c1);
    }
  } else if ((b0 & 0xF0) == 0xE0) {
    int c1 = cont(1), c2 = cont(2);
    if (c1 >= 0 && c2 >= 0) {
      i += 3;
      return (char32_t(b0 & 0x0F) << 12) | (char32_t(c1) << 6) | char32_t(c2);
    }
  } else if ((b0 & 0xF8) == 0xF0) {
    int c1 = cont(1), c2 = cont(2), c3 = cont(3);
    if (c1 >= 0 && c2 >= 0 && c3 >= 0) {
      i += 4;
      return (char32_t(b0 & 0x07) << 18) | (char32_t(c1) << 12) | (char32_t(c2) << 6) | char32_t(c3);
    }
  }
  ++i;
  return b0;
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_space(char32_t c) {
  switch (c) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_punct(char32_t c) {
  if (c < 0x80) return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
                       (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  switch (c) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
      return true;
    default:
      // General Punctuation block (dashes, quotes, ellipsis) and CJK punctuation.
      return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) || (c >= 0x3001 && c <= 0x3003);
  }
}

char32_t fold(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if ((c >= 0xC0 && c <= 0xDE && c != 0xD7)) return c + 32;
  if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 32;  // Greek
  if (c >= 0x410 && c <= 0x42F) return c + 32;                 // Cyrillic
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  if (c >= 0x100 && c <= 0x17F && c != 0x130 && c != 0x131 && c != 0x138 && c != 0x149 && c != 0x17F) {
    // Latin Extended-A alternates upper/lower, with the parity flipping at U+0139..U+0148 and U+0179..U+017E.
    bool odd_upper = (c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E);
    if (odd_upper ? (c % 2 == 1) : (c % 2 == 0)) return c + 1;
  }
  return c;
}

}  // namespace

std::string fold_case(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) encode(fold(decode(s, i)), out);
  return out;
}

TokenStream tokenize(std::string_view text, const TokenizerOptions& opts, std::string source_id) {
  TokenStream stream;
  stream.source_id = std::move(source_id);

  std::vector<char32_t> chunk;
  auto flush = [&] {
    std::size_t lo = 0, hi = chunk.size();
    while (lo < hi && is_punct(chunk[lo])) ++lo;
    while (hi > lo && is_punct(chunk[hi - 1])) --hi;
    if (lo < hi) {
      std::string token;
      for (std::size_t k = lo; k < hi; ++k) encode(opts.lowercase ? fold(chunk[k]) : chunk[k], token);
      if (!opts.stopwords || !opts.stopwords->contains(token)) stream.tokens.push_back(std::move(token));
    }
    chunk.clear();
  };

  for (std::size_t i = 0; i < text.size();) {
    char32_t c = decode(text, i);
    if (is_space(c)) {
      flush();
    } else {
      chunk.push_back(c);
    }
  }
  flush();
  return stream;
}

std::unordered_set<std::string> load_stopwords(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword file: " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t");
    words.insert(line.substr(b, e - b + 1));
  }
  return words;
}

}  // namespace ties

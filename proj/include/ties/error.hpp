#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ties {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when not line-specific.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A precondition on numeric input was broken (asymmetric matrix, length mismatch, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// The document has no in-vocabulary tokens.
class DegenerateDocument : public Error {
 public:
  explicit DegenerateDocument(std::string id)
      : Error("document '" + id + "' has no in-vocabulary tokens"), id_(std::move(id)) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class DocumentTooShort : public Error {
 public:
  DocumentTooShort(std::size_t rows, std::size_t window)
      : Error("document has " + std::to_string(rows) + " rows, window needs " + std::to_string(window)),
        rows_(rows), window_(window) {}
  std::size_t rows() const { return rows_; }
  std::size_t window() const { return window_; }

 private:
  std::size_t rows_;
  std::size_t window_;
};

class TooFewDimensions : public Error {
 public:
  using Error::Error;
};

}  // namespace ties

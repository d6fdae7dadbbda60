#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ties/embedding.hpp"
#include "ties/matrix.hpp"

namespace ties {

enum class WindowKind { kArithmetic, kExponential };

/// Odd-sized centred window. Arithmetic windows use unit weights; exponential
/// windows weight offset s by 2^-|s|.
class WindowSpec {
 public:
  WindowSpec(std::size_t size, WindowKind kind = WindowKind::kArithmetic);

  std::size_t size() const { return size_; }
  std::size_t half_width() const { return (size_ - 1) / 2; }
  WindowKind kind() const { return kind_; }

  /// Weights for offsets -c..c.
  std::vector<double> weights() const;

  /// e.g. "3", "7-exponential"
  std::string label() const;

  friend bool operator==(const WindowSpec&, const WindowSpec&) = default;

 private:
  std::size_t size_;
  WindowKind kind_;
};

WindowKind parse_window_kind(std::string_view name);
std::string_view to_string(WindowKind kind);

/// (T - w + 1) x D matrix of full-window aggregates.
struct SmoothedMatrix {
  Matrix values;

  std::size_t rows() const { return values.rows(); }
  std::size_t dim() const { return values.cols(); }
};

/// Valid-mode windowed sum down each column. Throws DocumentTooShort when X has fewer rows than the window.
SmoothedMatrix smooth(const Matrix& x, const WindowSpec& window);
inline SmoothedMatrix smooth(const DocMatrix& x, const WindowSpec& window) { return smooth(x.values, window); }

}  // namespace ties

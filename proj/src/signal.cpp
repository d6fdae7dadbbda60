#include "ties/signal.hpp"

#include <cmath>

#include "ties/error.hpp"

namespace ties {

WindowSpec::WindowSpec(std::size_t size, WindowKind kind) : size_(size), kind_(kind) {
  if (size == 0 || size % 2 == 0) throw Error("window size must be an odd positive integer, got " + std::to_string(size));
}

std::vector<double> WindowSpec::weights() const {
  std::vector<double> w(size_, 1.0);
  if (kind_ == WindowKind::kExponential) {
    const auto c = static_cast<long>(half_width());
    for (long s = -c; s <= c; ++s) w[static_cast<std::size_t>(s + c)] = std::ldexp(1.0, -static_cast<int>(std::labs(s)));
  }
  return w;
}

std::string WindowSpec::label() const {
  auto s = std::to_string(size_);
  return kind_ == WindowKind::kExponential ? s + "-exponential" : s;
}

WindowKind parse_window_kind(std::string_view name) {
  if (name == "arithmetic") return WindowKind::kArithmetic;
  if (name == "exponential") return WindowKind::kExponential;
  throw Error("unknown window kind '" + std::string(name) + "' (expected arithmetic or exponential)");
}

std::string_view to_string(WindowKind kind) {
  return kind == WindowKind::kArithmetic ? "arithmetic" : "exponential";
}

SmoothedMatrix smooth(const Matrix& x, const WindowSpec& window) {
  const std::size_t w = window.size();
  if (x.rows() < w) throw DocumentTooShort(x.rows(), w);

  const auto weights = window.weights();
  const std::size_t out_rows = x.rows() - w + 1;
  SmoothedMatrix out{Matrix(out_rows, x.cols())};
  for (std::size_t t = 0; t < out_rows; ++t) {
    auto dst = out.values.row(t);
    for (std::size_t k = 0; k < w; ++k) {
      auto src = x.row(t + k);
      const double wk = weights[k];
      for (std::size_t d = 0; d < dst.size(); ++d) dst[d] += wk * src[d];
    }
  }
  return out;
}

}  // namespace ties

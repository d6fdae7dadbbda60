#pragma once

#include <span>
#include <string>
#include <vector>

#include "ties/matrix.hpp"
#include "ties/signal.hpp"

namespace ties {

/// Symmetric dissimilarity between embedding dimensions. `labels()` holds the
/// 1-based embedding-dimension index of each row; ordering is meaningful.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  /// Labels default to 1..n.
  explicit DistanceMatrix(Matrix values);
  DistanceMatrix(Matrix values, std::vector<std::size_t> labels);

  std::size_t size() const { return values_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  const Matrix& values() const { return values_; }
  const std::vector<std::size_t>& labels() const { return labels_; }

  /// Throws ContractViolation unless square, symmetric, zero-diagonal and
  /// nonnegative to within `tol`, with finite entries.
  void validate(double tol = 1e-9) const;

 private:
  Matrix values_;
  std::vector<std::size_t> labels_;
};

/// (|xi| |xj| - xi.xj) / n for length-n vectors, clamped at 0.
double phi(std::span<const double> xi, std::span<const double> xj);

struct DistanceResult {
  DistanceMatrix matrix;
  /// 0-based columns that are identically zero.
  std::vector<std::size_t> degenerate_dimensions;
};

DistanceResult distance_matrix(const SmoothedMatrix& x);

}  // namespace ties

#include "ties/geometry.hpp"

#include <cmath>
#include <numeric>

#include "ties/error.hpp"

namespace ties {

DistanceMatrix::DistanceMatrix(Matrix values) : values_(std::move(values)), labels_(values_.rows()) {
  std::iota(labels_.begin(), labels_.end(), std::size_t{1});
}

DistanceMatrix::DistanceMatrix(Matrix values, std::vector<std::size_t> labels)
    : values_(std::move(values)), labels_(std::move(labels)) {
  if (labels_.size() != values_.rows()) throw ContractViolation("label count does not match matrix size");
}

void DistanceMatrix::validate(double tol) const {
  const std::size_t n = values_.rows();
  if (values_.cols() != n) throw ContractViolation("distance matrix is not square");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(values_(i, i)) > tol) throw ContractViolation("distance matrix has a nonzero diagonal entry");
    for (std::size_t j = 0; j < n; ++j) {
      double v = values_(i, j);
      if (!std::isfinite(v)) throw ContractViolation("distance matrix has a non-finite entry");
      if (v < -tol) throw ContractViolation("distance matrix has a negative entry");
      if (j > i && std::abs(v - values_(j, i)) > tol) throw ContractViolation("distance matrix is not symmetric");
    }
  }
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) s += a[t] * b[t];
  return s;
}

// sqrt(a*a) == a exactly in IEEE arithmetic, so phi(x, x) is exactly zero.
double phi_from(double sq_i, double sq_j, double cross, std::size_t n) {
  double v = (std::sqrt(sq_i * sq_j) - cross) / static_cast<double>(n);
  return v > 0.0 ? v : 0.0;
}

}  // namespace

double phi(std::span<const double> xi, std::span<const double> xj) {
  if (xi.size() != xj.size()) throw ContractViolation("phi: length mismatch");
  if (xi.empty()) throw ContractViolation("phi: empty vectors");
  return phi_from(dot(xi, xi), dot(xj, xj), dot(xi, xj), xi.size());
}

DistanceResult distance_matrix(const SmoothedMatrix& x) {
  const std::size_t dims = x.dim();
  const std::size_t n = x.rows();
  if (dims < 2) throw TooFewDimensions("distance matrix needs at least 2 embedding dimensions");
  if (n < 1) throw ContractViolation("distance matrix needs at least one row");

  std::vector<std::vector<double>> cols(dims);
  for (std::size_t d = 0; d < dims; ++d) cols[d] = x.values.column(d);

  std::vector<double> sq(dims);
  DistanceResult result;
  for (std::size_t d = 0; d < dims; ++d) {
    sq[d] = dot(cols[d], cols[d]);
    if (sq[d] == 0.0) result.degenerate_dimensions.push_back(d);
  }

  Matrix m(dims, dims);
  for (std::size_t i = 0; i < dims; ++i) {
    for (std::size_t j = i + 1; j < dims; ++j) {
      double v = phi_from(sq[i], sq[j], dot(cols[i], cols[j]), n);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  result.matrix = DistanceMatrix(std::move(m));
  return result;
}

}  // namespace ties

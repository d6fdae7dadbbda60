#pragma once

#include <vector>

#include "ties/matrix.hpp"

namespace ties {

struct Assignment {
  std::vector<std::size_t> row_to_col;
  double cost = 0.0;
};

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian method
/// with potentials, O(n^3)). Costs must be finite.
Assignment solve_assignment(const Matrix& cost);

}  // namespace ties

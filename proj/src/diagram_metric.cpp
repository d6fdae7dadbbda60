#include "ties/diagram_metric.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "ties/assignment.hpp"
#include "ties/error.hpp"

namespace ties {

Assignment solve_assignment(const Matrix& cost) {
  const std::size_t n = cost.rows();
  if (cost.cols() != n) throw ContractViolation("assignment cost matrix must be square");
  Assignment result;
  result.row_to_col.assign(n, 0);
  if (n == 0) return result;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based potentials; index 0 is a virtual column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_slack(n + 1);
  std::vector<std::size_t> col_owner(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    col_owner[0] = row;
    std::size_t col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t r = col_owner[col0];
      double delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        double slack = cost(r - 1, c - 1) - u[r] - v[c];
        if (slack < min_slack[c]) {
          min_slack[c] = slack;
          way[c] = col0;
        }
        if (min_slack[c] < delta) {
          delta = min_slack[c];
          col1 = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[col_owner[c]] += delta;
          v[c] -= delta;
        } else {
          min_slack[c] -= delta;
        }
      }
      col0 = col1;
    } while (col_owner[col0] != 0);
    do {
      std::size_t col1 = way[col0];
      col_owner[col0] = col_owner[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  for (std::size_t c = 1; c <= n; ++c) result.row_to_col[col_owner[c] - 1] = c - 1;
  // Sum the chosen entries directly rather than trusting the potentials' round-off.
  for (std::size_t r = 0; r < n; ++r) result.cost += cost(r, result.row_to_col[r]);
  return result;
}

DiagramMetric parse_diagram_metric(std::string_view name) {
  if (name == "w1") return DiagramMetric::kW1;
  if (name == "w2") return DiagramMetric::kW2;
  if (name == "bottleneck") return DiagramMetric::kBottleneck;
  throw Error("unknown diagram metric '" + std::string(name) + "' (expected w1, w2 or bottleneck)");
}

std::string_view to_string(DiagramMetric metric) {
  switch (metric) {
    case DiagramMetric::kW1: return "w1";
    case DiagramMetric::kW2: return "w2";
    case DiagramMetric::kBottleneck: return "bottleneck";
  }
  return "?";
}

double linf(const PersistencePoint& a, const PersistencePoint& b) {
  return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

double diagonal_cost(const PersistencePoint& p) { return (p.death - p.birth) / 2.0; }

namespace {

void require_finite(std::span<const PersistencePoint> pts) {
  for (const auto& p : pts) {
    if (!std::isfinite(p.birth) || !std::isfinite(p.death)) {
      throw ContractViolation("diagram distance is defined on finite bars only");
    }
  }
}

double power(double x, int q) { return q == 1 ? x : std::pow(x, q); }

double wasserstein_full(std::span<const PersistencePoint> a, std::span<const PersistencePoint> b, int q);

}  // namespace

double wasserstein(std::span<const PersistencePoint> a, std::span<const PersistencePoint> b, int q) {
  if (q < 1) throw ContractViolation("Wasserstein order must be >= 1");
  require_finite(a);
  require_finite(b);
  if (q == 1) {
    // W1 is an earth mover's distance over a metric (L-inf, with the diagonal
    // as one collapsed point), so points present in both diagrams cancel.
    // Leave-one-out diagrams share most of their points.
    std::vector<PersistencePoint> sa(a.begin(), a.end()), sb(b.begin(), b.end()), ra, rb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(ra));
    std::set_difference(sb.begin(), sb.end(), sa.begin(), sa.end(), std::back_inserter(rb));
    if (ra.size() < a.size()) return wasserstein_full(ra, rb, 1);
  }
  return wasserstein_full(a, b, q);
}

namespace {

double wasserstein_full(std::span<const PersistencePoint> a, std::span<const PersistencePoint> b, int q) {
  const std::size_t m = a.size(), n = b.size();
  if (m + n == 0) return 0.0;

  // Rows: points of a, then diagonal slots for b. Columns: points of b, then
  // diagonal slots for a. Diagonal slots are interchangeable, so a point pays
  // its projection cost against any of them.
  Matrix cost(m + n, m + n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost(i, j) = power(linf(a[i], b[j]), q);
    const double diag = power(diagonal_cost(a[i]), q);
    for (std::size_t j = n; j < m + n; ++j) cost(i, j) = diag;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double diag = power(diagonal_cost(b[j]), q);
    for (std::size_t i = m; i < m + n; ++i) cost(i, j) = diag;
  }
  const double total = solve_assignment(cost).cost;
  return q == 1 ? total : std::pow(total, 1.0 / q);
}

}  // namespace

namespace {

// Kuhn's augmenting paths on the augmented bipartite graph restricted to edges of cost <= bound.
bool perfect_matching_within(std::span<const PersistencePoint> a, std::span<const PersistencePoint> b, double bound) {
  const std::size_t m = a.size(), n = b.size(), k = m + n;
  auto allowed = [&](std::size_t r, std::size_t c) {
    if (r < m && c < n) return linf(a[r], b[c]) <= bound;
    if (r < m) return diagonal_cost(a[r]) <= bound;
    if (c < n) return diagonal_cost(b[c]) <= bound;
    return true;
  };
  std::vector<std::size_t> match_col(k, k);
  std::vector<char> seen(k);
  auto augment = [&](auto&& self, std::size_t r) -> bool {
    for (std::size_t c = 0; c < k; ++c) {
      if (seen[c] || !allowed(r, c)) continue;
      seen[c] = 1;
      if (match_col[c] == k || self(self, match_col[c])) {
        match_col[c] = r;
        return true;
      }
    }
    return false;
  };
  for (std::size_t r = 0; r < k; ++r) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!augment(augment, r)) return false;
  }
  return true;
}

}  // namespace

double bottleneck(std::span<const PersistencePoint> a, std::span<const PersistencePoint> b) {
  require_finite(a);
  require_finite(b);
  std::vector<double> candidates{0.0};
  for (const auto& p : a) {
    candidates.push_back(diagonal_cost(p));
    for (const auto& q : b) candidates.push_back(linf(p, q));
  }
  for (const auto& q : b) candidates.push_back(diagonal_cost(q));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // The largest candidate always admits a perfect matching (everything to the diagonal).
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (perfect_matching_within(a, b, candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

double wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b, int hdim, int q) {
  auto fa = a.finite(hdim), fb = b.finite(hdim);
  return wasserstein(fa, fb, q);
}

double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b, int hdim) {
  auto fa = a.finite(hdim), fb = b.finite(hdim);
  return bottleneck(fa, fb);
}

double diagram_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, int hdim, DiagramMetric metric) {
  switch (metric) {
    case DiagramMetric::kW1: return wasserstein(a, b, hdim, 1);
    case DiagramMetric::kW2: return wasserstein(a, b, hdim, 2);
    case DiagramMetric::kBottleneck: return bottleneck(a, b, hdim);
  }
  throw ContractViolation("unknown diagram metric");
}

}  // namespace ties

#include "ties/persistence.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_map>

#include "ties/error.hpp"

namespace ties {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Edge {
  double value;
  std::uint32_t a, b;  // a < b

  bool operator<(const Edge& o) const {
    if (value != o.value) return value < o.value;
    if (a != o.a) return a < o.a;
    return b < o.b;
  }
};

struct Triangle {
  double value;
  std::uint32_t a, b, c;  // a < b < c

  bool operator<(const Triangle& o) const {
    if (value != o.value) return value < o.value;
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
  }
  bool operator==(const Triangle& o) const { return a == o.a && b == o.b && c == o.c; }

  std::uint64_t key() const { return (std::uint64_t(a) << 42) | (std::uint64_t(b) << 21) | std::uint64_t(c); }
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0u); }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::uint32_t x, std::uint32_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (rank_[x] < rank_[y]) std::swap(x, y);
    parent_[y] = x;
    if (rank_[x] == rank_[y]) ++rank_[x];
    return true;
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> rank_;
};

// Sorted symmetric difference: column addition over Z/2.
void add_column(std::vector<Triangle>& work, const std::vector<Triangle>& other, std::vector<Triangle>& scratch) {
  scratch.clear();
  std::size_t i = 0, j = 0;
  while (i < work.size() && j < other.size()) {
    if (work[i] < other[j]) {
      scratch.push_back(work[i++]);
    } else if (other[j] < work[i]) {
      scratch.push_back(other[j++]);
    } else {
      ++i;
      ++j;
    }
  }
  scratch.insert(scratch.end(), work.begin() + static_cast<std::ptrdiff_t>(i), work.end());
  scratch.insert(scratch.end(), other.begin() + static_cast<std::ptrdiff_t>(j), other.end());
  work.swap(scratch);
}

void push_pair(PersistenceDiagram& dg, double birth, double death, int hdim) {
  if (death > birth) dg.points.push_back({birth, death, hdim});
}

}  // namespace

std::vector<PersistencePoint> PersistenceDiagram::finite(int hdim) const {
  std::vector<PersistencePoint> out;
  for (const auto& p : points) {
    if (p.hdim == hdim && !p.essential()) out.push_back(p);
  }
  return out;
}

std::size_t PersistenceDiagram::count(int hdim) const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [&](const auto& p) { return p.hdim == hdim; }));
}

double enclosing_radius(const DistanceMatrix& phi) {
  const std::size_t n = phi.size();
  if (n <= 1) return 0.0;
  double best = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    double row_max = 0.0;
    for (std::size_t j = 0; j < n; ++j) row_max = std::max(row_max, phi(i, j));
    best = std::min(best, row_max);
  }
  return best;
}

PersistenceDiagram rips_persistence(const DistanceMatrix& phi, int max_hdim) {
  if (max_hdim < 0 || max_hdim > 1) throw ContractViolation("rips_persistence supports homology dimensions 0 and 1");
  phi.validate();
  const auto n = static_cast<std::uint32_t>(phi.size());
  if (n == 0) throw ContractViolation("rips_persistence needs at least one point");

  PersistenceDiagram dg;
  dg.n_points = n;

  std::vector<Edge> edges;
  edges.reserve(std::size_t(n) * (n - 1) / 2);
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) edges.push_back({phi(a, b), a, b});
  }
  std::sort(edges.begin(), edges.end());

  // H0: an edge is negative iff it joins two components when it enters.
  std::vector<char> negative(edges.size(), 0);
  UnionFind uf(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (uf.unite(edges[e].a, edges[e].b)) {
      negative[e] = 1;
      push_pair(dg, 0.0, edges[e].value, 0);
    }
  }
  dg.points.push_back({0.0, kInf, 0});

  if (max_hdim >= 1 && n >= 3) {
    const double threshold = enclosing_radius(phi);
    std::size_t n_edges = 0;
    while (n_edges < edges.size() && edges[n_edges].value <= threshold) ++n_edges;

    auto cofacet = [&](const Edge& e, std::uint32_t k) {
      const double value = std::max({e.value, phi(e.a, k), phi(e.b, k)});
      if (k < e.a) return Triangle{value, k, e.a, e.b};
      if (k < e.b) return Triangle{value, e.a, k, e.b};
      return Triangle{value, e.a, e.b, k};
    };
    auto coboundary = [&](const Edge& e, std::vector<Triangle>& out) {
      out.clear();
      for (std::uint32_t k = 0; k < n; ++k) {
        if (k == e.a || k == e.b) continue;
        Triangle t = cofacet(e, k);
        if (t.value <= threshold) out.push_back(t);
      }
      std::sort(out.begin(), out.end());
    };

    // Reduced coboundary columns, keyed by their pivot (the earliest cofacet).
    // A column that needed no reduction is stored as its edge alone and rebuilt on use.
    struct Stored {
      std::size_t edge;
      std::vector<Triangle> column;
    };
    std::vector<Stored> stored;
    std::unordered_map<std::uint64_t, std::size_t> by_pivot;
    std::vector<Triangle> work, scratch, rebuilt;
    for (std::size_t e = n_edges; e-- > 0;) {
      if (negative[e]) continue;  // cleared: paired in H0
      const Edge& edge = edges[e];

      bool have_min = false;
      Triangle first{};
      for (std::uint32_t k = 0; k < n; ++k) {
        if (k == edge.a || k == edge.b) continue;
        Triangle t = cofacet(edge, k);
        if (t.value <= threshold && (!have_min || t < first)) {
          first = t;
          have_min = true;
        }
      }
      if (have_min && !by_pivot.contains(first.key())) {
        push_pair(dg, edge.value, first.value, 1);
        by_pivot.emplace(first.key(), stored.size());
        stored.push_back({e, {}});
        continue;
      }

      coboundary(edge, work);
      while (!work.empty()) {
        auto it = by_pivot.find(work.front().key());
        if (it == by_pivot.end()) break;
        const Stored& other = stored[it->second];
        if (other.column.empty()) {
          coboundary(edges[other.edge], rebuilt);
          add_column(work, rebuilt, scratch);
        } else {
          add_column(work, other.column, scratch);
        }
      }
      if (work.empty()) {
        dg.points.push_back({edge.value, kInf, 1});
      } else {
        push_pair(dg, edge.value, work.front().value, 1);
        by_pivot.emplace(work.front().key(), stored.size());
        stored.push_back({e, std::move(work)});
        work = {};
      }
    }
  }

  std::sort(dg.points.begin(), dg.points.end());
  return dg;
}

DistanceMatrix remove_dimension(const DistanceMatrix& phi, std::size_t d) {
  const std::size_t n = phi.size();
  if (n < 3) throw TooFewDimensions("removing a dimension needs at least 3 dimensions, have " + std::to_string(n));
  if (d >= n) throw ContractViolation("dimension index out of range");
  Matrix m(n - 1, n - 1);
  std::vector<std::size_t> labels;
  labels.reserve(n - 1);
  for (std::size_t i = 0, r = 0; i < n; ++i) {
    if (i == d) continue;
    labels.push_back(phi.labels()[i]);
    for (std::size_t j = 0, c = 0; j < n; ++j) {
      if (j == d) continue;
      m(r, c++) = phi(i, j);
    }
    ++r;
  }
  return DistanceMatrix(std::move(m), std::move(labels));
}

std::vector<double> mst_deaths(const DistanceMatrix& phi) {
  const std::size_t n = phi.size();
  std::vector<double> out;
  if (n <= 1) return out;
  std::vector<double> best(n, kInf);
  std::vector<char> in_tree(n, 0);
  in_tree[0] = 1;
  for (std::size_t j = 1; j < n; ++j) best[j] = phi(0, j);
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (!in_tree[j] && (next == n || best[j] < best[next])) next = j;
    }
    out.push_back(best[next]);
    in_tree[next] = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (!in_tree[j]) best[j] = std::min(best[j], phi(next, j));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ties

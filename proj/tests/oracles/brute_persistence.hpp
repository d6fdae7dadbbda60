#pragma once

// Textbook persistence: build every simplex up to dimension 2, sort by
// (value, dimension, vertex tuple), reduce the full boundary matrix over Z/2
// with no clearing and no threshold. Shares no code with the engine.

#include <algorithm>
#include <limits>
#include <map>
#include <vector>

#include "ties/geometry.hpp"
#include "ties/persistence.hpp"

namespace ties::oracle {

inline PersistenceDiagram brute_force_persistence(const DistanceMatrix& phi) {
  struct Simplex {
    double value;
    int dim;
    std::vector<int> v;
  };
  const int n = static_cast<int>(phi.size());
  std::vector<Simplex> simplices;
  for (int a = 0; a < n; ++a) simplices.push_back({0.0, 0, {a}});
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) simplices.push_back({phi(a, b), 1, {a, b}});
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        simplices.push_back({std::max({phi(a, b), phi(a, c), phi(b, c)}), 2, {a, b, c}});

  std::sort(simplices.begin(), simplices.end(), [](const Simplex& x, const Simplex& y) {
    if (x.value != y.value) return x.value < y.value;
    if (x.dim != y.dim) return x.dim < y.dim;
    return x.v < y.v;
  });
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < static_cast<int>(simplices.size()); ++i) index[simplices[i].v] = i;

  const int total = static_cast<int>(simplices.size());
  std::vector<std::vector<int>> columns(total);
  for (int j = 0; j < total; ++j) {
    const auto& s = simplices[j];
    if (s.dim == 0) continue;
    for (std::size_t drop = 0; drop < s.v.size(); ++drop) {
      std::vector<int> face;
      for (std::size_t k = 0; k < s.v.size(); ++k)
        if (k != drop) face.push_back(s.v[k]);
      columns[j].push_back(index.at(face));
    }
    std::sort(columns[j].begin(), columns[j].end());
  }

  std::vector<int> owner_of_low(total, -1);
  std::vector<char> paired(total, 0);
  PersistenceDiagram dg;
  dg.n_points = phi.size();
  for (int j = 0; j < total; ++j) {
    auto& col = columns[j];
    while (!col.empty() && owner_of_low[col.back()] != -1) {
      const auto& other = columns[owner_of_low[col.back()]];
      std::vector<int> sum;
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(), std::back_inserter(sum));
      col = std::move(sum);
    }
    if (!col.empty()) {
      const int low = col.back();
      owner_of_low[low] = j;
      paired[low] = paired[j] = 1;
      const auto& birth = simplices[low];
      if (simplices[j].value > birth.value) dg.points.push_back({birth.value, simplices[j].value, birth.dim});
    }
  }
  for (int i = 0; i < total; ++i) {
    if (!paired[i] && simplices[i].dim <= 1 && columns[i].empty()) {
      dg.points.push_back({simplices[i].value, std::numeric_limits<double>::infinity(), simplices[i].dim});
    }
  }
  std::sort(dg.points.begin(), dg.points.end());
  return dg;
}

}  // namespace ties::oracle

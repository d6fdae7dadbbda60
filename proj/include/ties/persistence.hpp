#pragma once

#include <compare>
#include <limits>
#include <vector>

#include "ties/geometry.hpp"

namespace ties {

struct PersistencePoint {
  double birth = 0.0;
  double death = std::numeric_limits<double>::infinity();
  int hdim = 0;

  bool essential() const { return death == std::numeric_limits<double>::infinity(); }

  friend bool operator==(const PersistencePoint&, const PersistencePoint&) = default;
  friend std::partial_ordering operator<=>(const PersistencePoint& a, const PersistencePoint& b) {
    if (a.hdim != b.hdim) return a.hdim <=> b.hdim;
    if (a.birth != b.birth) return a.birth <=> b.birth;
    return a.death <=> b.death;
  }
};

/// Points sorted by (hdim, birth, death). Zero-persistence pairs are never stored.
struct PersistenceDiagram {
  std::vector<PersistencePoint> points;
  std::size_t n_points = 0;

  /// Finite points of one homology dimension.
  std::vector<PersistencePoint> finite(int hdim) const;
  std::size_t count(int hdim) const;
};

/// Vietoris-Rips persistence in homology dimensions 0..max_hdim (max 1), Z/2 coefficients.
///
/// Simplices are totally ordered by (filtration value, dimension, lexicographic
/// vertex tuple). H0 comes from a union-find sweep over all edges. H1 is computed
/// by reducing edge coboundaries in reverse filtration order up to the
/// enclosing radius, skipping the edges already paired in H0.
PersistenceDiagram rips_persistence(const DistanceMatrix& phi, int max_hdim = 1);

/// min_i max_j phi(i, j); 0 for n <= 1.
double enclosing_radius(const DistanceMatrix& phi);

/// Principal submatrix with row/column `d` removed (0-based). Labels follow the rows.
/// Throws TooFewDimensions when fewer than 3 rows are present.
DistanceMatrix remove_dimension(const DistanceMatrix& phi, std::size_t d);

/// The n-1 edge weights of a minimum spanning tree (Prim's algorithm on the dense
/// matrix), sorted ascending. Independent of the persistence engine.
std::vector<double> mst_deaths(const DistanceMatrix& phi);

}  // namespace ties

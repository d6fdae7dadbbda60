#include "ties/features.hpp"

#include "ties/error.hpp"
#include "ties/parallel.hpp"
#include "ties/persistence.hpp"

namespace ties {

std::vector<double> TiesFeatureVector::concatenated() const {
  std::vector<double> out(v0);
  out.insert(out.end(), v1.begin(), v1.end());
  return out;
}

TiesFeatureVector ties_features(const DistanceMatrix& phi, const PsiParams& psi, std::size_t workers) {
  const std::size_t dims = phi.size();
  if (dims < 3) throw TooFewDimensions("TIES features need at least 3 embedding dimensions, have " + std::to_string(dims));

  const PersistenceDiagram full = rips_persistence(phi, 1);
  TiesFeatureVector out;
  out.v0.assign(dims, 0.0);
  out.v1.assign(dims, 0.0);
  out.metadata.metric = psi.metric;
  out.metadata.dim = dims;

  parallel_for(dims, workers, [&](std::size_t d) {
    const PersistenceDiagram reduced = rips_persistence(remove_dimension(phi, d), 1);
    out.v0[d] = diagram_distance(full, reduced, 0, psi.metric);
    out.v1[d] = diagram_distance(full, reduced, 1, psi.metric);
  });
  return out;
}

}  // namespace ties

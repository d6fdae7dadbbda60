#pragma once

#include <string>
#include <vector>

#include "ties/diagram_metric.hpp"
#include "ties/geometry.hpp"
#include "ties/signal.hpp"

namespace ties {

struct PsiParams {
  DiagramMetric metric = DiagramMetric::kW1;
};

struct FeatureMetadata {
  std::size_t window_size = 0;
  WindowKind window_kind = WindowKind::kArithmetic;
  DiagramMetric metric = DiagramMetric::kW1;
  std::size_t dim = 0;
  std::size_t tokens = 0;           // T
  std::size_t smoothed_length = 0;  // T - w + 1
  std::size_t oov_count = 0;
};

/// Per-dimension sensitivity of the H0 (v0) and H1 (v1) diagrams.
struct TiesFeatureVector {
  std::string doc_id;
  std::vector<double> v0;
  std::vector<double> v1;
  FeatureMetadata metadata;

  /// v0 followed by v1.
  std::vector<double> concatenated() const;
};

/// v0[d] = Psi(PD0(phi), PD0(phi without d)) and likewise v1 for H1, over
/// finite bars only. The D leave-one-out runs are spread over `workers`
/// threads; output does not depend on the worker count.
TiesFeatureVector ties_features(const DistanceMatrix& phi, const PsiParams& psi, std::size_t workers = 1);

}  // namespace ties

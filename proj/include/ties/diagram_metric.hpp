#pragma once

#include <span>
#include <string>
#include <string_view>

#include "ties/persistence.hpp"

namespace ties {

enum class DiagramMetric { kW1, kW2, kBottleneck };

DiagramMetric parse_diagram_metric(std::string_view name);
std::string_view to_string(DiagramMetric metric);

/// L-infinity distance between two diagram points.
double linf(const PersistencePoint& a, const PersistencePoint& b);

/// L-infinity distance from (b, d) to the diagonal: (d - b) / 2.
double diagonal_cost(const PersistencePoint& p);

/// Exact q-Wasserstein distance between two sets of finite bars. Unmatched
/// points pay their diagonal cost; per-pair costs are L-infinity. Throws
/// ContractViolation on infinite bars.
double wasserstein(std::span<const PersistencePoint> a, std::span<const PersistencePoint> b, int q);

/// Exact bottleneck distance between two sets of finite bars.
double bottleneck(std::span<const PersistencePoint> a, std::span<const PersistencePoint> b);

/// Distance between the finite `hdim` bars of two diagrams.
double wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b, int hdim, int q);
double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b, int hdim);
double diagram_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, int hdim, DiagramMetric metric);

}  // namespace ties

#pragma once

#include "curvflow/common.hpp"
#include "curvflow/graph.hpp"

namespace curvflow {

enum class MetricMode { limit, epsilon, hop };

// Asymmetric all-pairs distance matrix. Triangle inequality holds (1e-9 slack);
// symmetry is not required.
struct QuasiMetric {
    Matrix d;
    MetricMode mode;
    double eps = 0.0;  // meaningful for epsilon mode only
};

Matrix reciprocal_lengths(const DirectedWeightedGraph& g, double eps);
QuasiMetric shortest_paths(const Matrix& lengths);
QuasiMetric limit_distance(const DirectedWeightedGraph& g);
QuasiMetric epsilon_distance(const DirectedWeightedGraph& g, double eps);
QuasiMetric hop_distance(const DirectedWeightedGraph& g);

}  // namespace curvflow

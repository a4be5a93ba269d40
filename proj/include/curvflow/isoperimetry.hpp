#pragma once

#include <string>
#include <vector>

#include "curvflow/common.hpp"
#include "curvflow/graph.hpp"
#include "curvflow/spectral.hpp"

namespace curvflow {

struct IsoperimetryResult {
    int x;
    double R;
    std::vector<int> region;         // E_R(x) = {y : d(x,y) >= R}
    double I;                        // Dirichlet isoperimetric constant over the region
    std::vector<int> argmin_subset;  // subset achieving I
    double bound;                    // (K R + Lambda) / D
    bool bound_active;               // K R + Lambda > 0
    double K;
    double Lambda;
    double D;

    std::string to_json() const;
};

double boundary_measure(const PerronKernel& k, const std::vector<int>& omega);
IsoperimetryResult dirichlet_constant(const DirectedWeightedGraph& g, int x, double R);

}  // namespace curvflow

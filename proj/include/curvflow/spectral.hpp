#pragma once

#include "curvflow/common.hpp"
#include "curvflow/graph.hpp"

namespace curvflow {

// Perron measure m, random-walk matrix W and the symmetrized kernel
// mu(x,y) = (W(x,y) + m(y)/m(x) * W(y,x)) / 2 with zero diagonal.
struct PerronKernel {
    Vector m;
    Matrix W;
    Matrix mu;
    double residual = 0.0;
};

struct PerronResult {
    Vector m;
    double residual;
};

PerronResult perron_measure(const Matrix& W);
PerronKernel mean_transition_kernel(const DirectedWeightedGraph& g);
Matrix idle_kernel(const PerronKernel& k, double alpha);

}  // namespace curvflow

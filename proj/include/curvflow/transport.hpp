#pragma once

#include "curvflow/common.hpp"
#include "curvflow/metric.hpp"

namespace curvflow {

struct PlanEntry {
    int src;
    int dst;
    double mass;
};

struct TransportResult {
    double cost = 0.0;
    std::vector<PlanEntry> plan;
    Vector dual_potentials;  // 1-Lipschitz f with cost = sum f * (nu - mu)
    double duality_gap = 0.0;
};

// Exact W1 between probability vectors under an asymmetric quasi-metric.
// Row marginal = mu (mass at a under mu is shipped to b under nu at cost d(a,b)).
TransportResult wasserstein1(const Vector& mu, const Vector& nu, const QuasiMetric& d);

// Independent oracle: the Lipschitz-potential LP
//   max sum f (nu - mu)  s.t.  f(y) - f(x) <= d(x,y),  f(0) = 0
// solved by the dense simplex, sharing no code with the flow solver.
double kr_dual_value(const Vector& mu, const Vector& nu, const QuasiMetric& d);

}  // namespace curvflow

#pragma once

#include <map>
#include <optional>
#include <utility>

#include "curvflow/common.hpp"
#include "curvflow/graph.hpp"
#include "curvflow/metric.hpp"
#include "curvflow/spectral.hpp"

namespace curvflow {

enum class CurvatureKind { curc, curc_eps, idle_curc, ollivier, forman, lb1, lb2 };

std::string curvature_kind_name(CurvatureKind kind);

struct PairValue {
    int x;
    int y;
    double kappa;
};

struct Summary {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    std::map<int, double> quantiles;  // keys 5, 25, 50, 75, 95
};

struct CurvatureReport {
    CurvatureKind kind;
    double eps = 0.0;  // curc_eps only
    std::vector<PairValue> values;
    Summary summary;

    std::string to_json() const;
    std::string to_csv() const;
};

// Empty pair list = all ordered pairs x != y (for lb2: all adjacent pairs).
using PairList = std::vector<std::pair<int, int>>;

CurvatureReport curc(const DirectedWeightedGraph& g, const PairList& pairs = {});
CurvatureReport curc_eps(const DirectedWeightedGraph& g, double eps, const PairList& pairs = {});
CurvatureReport ollivier(const DirectedWeightedGraph& g, const PairList& pairs = {});
double forman(const DirectedWeightedGraph& g, int x, int y);
CurvatureReport forman_report(const DirectedWeightedGraph& g, const PairList& pairs = {});
CurvatureReport lb1(const DirectedWeightedGraph& g, const PairList& pairs = {});
CurvatureReport lb2(const DirectedWeightedGraph& g, const PairList& pairs = {});
CurvatureReport idle_curc(const DirectedWeightedGraph& g, const PairList& pairs = {});

double asymptotic_mean_curvature(const DirectedWeightedGraph& g, int x);

// Single-pair CURC against a precomputed kernel/metric (used by the
// pipeline modules to share one kernel per graph).
double curc_pair(const PerronKernel& k, const QuasiMetric& d, int x, int y);

}  // namespace curvflow

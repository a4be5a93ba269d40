#pragma once

#include <map>
#include <string>
#include <vector>

#include "curvflow/common.hpp"
#include "curvflow/graph.hpp"

namespace curvflow {

struct EpochSeries {
    std::string graph_name;
    double threshold = 0.0;
    std::vector<std::pair<int, Matrix>> epochs;  // sorted by epoch index
};

struct TrendRow {
    int epoch;
    double min_kappa;
    double mean_kappa;
    std::map<int, double> quantiles;  // keys 5, 25, 50, 75, 95
    std::vector<int> histogram;       // 20 bins over [-3, 1], clamped
};

struct TrendReport {
    std::vector<TrendRow> rows;
    double decurve_score = 0.0;  // median kappa at first epoch minus last

    std::string to_json() const;
    std::string to_csv() const;
};

EpochSeries load_epoch_series(const std::string& manifest_path);
TrendReport trend(const EpochSeries& series);
Matrix curvature_map(const EpochSeries& series, int epoch);

}  // namespace curvflow

#include "curvflow/metric.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace curvflow {

namespace {

void floyd_warshall(Matrix& d) {
    int n = static_cast<int>(d.rows());
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            double dik = d(i, k);
            if (!std::isfinite(dik)) continue;
            for (int j = 0; j < n; ++j) {
                double via = dik + d(k, j);
                if (via < d(i, j)) d(i, j) = via;
            }
        }
}

}  // namespace

Matrix reciprocal_lengths(const DirectedWeightedGraph& g, double eps) {
    if (!(eps > 0.0)) throw Error("metric: eps must be positive");
    int n = g.n();
    Matrix len = Matrix::Constant(n, n, 1.0 / eps);
    for (int i = 0; i < n; ++i) len(i, i) = 0.0;
    for (const Edge& e : g.edges())
        if (e.weight >= eps) len(e.src, e.dst) = 1.0 / e.weight;
    return len;
}

QuasiMetric shortest_paths(const Matrix& lengths) {
    Matrix d = lengths;
    floyd_warshall(d);
    return {d, MetricMode::epsilon};
}

QuasiMetric limit_distance(const DirectedWeightedGraph& g) {
    assert_strongly_connected(g);
    int n = g.n();
    double inf = std::numeric_limits<double>::infinity();
    Matrix d = Matrix::Constant(n, n, inf);
    for (int i = 0; i < n; ++i) d(i, i) = 0.0;
    for (const Edge& e : g.edges()) d(e.src, e.dst) = 1.0 / e.weight;
    floyd_warshall(d);
    return {d, MetricMode::limit};
}

QuasiMetric epsilon_distance(const DirectedWeightedGraph& g, double eps) {
    QuasiMetric q = shortest_paths(reciprocal_lengths(g, eps));
    q.eps = eps;
    return q;
}

QuasiMetric hop_distance(const DirectedWeightedGraph& g) {
    assert_strongly_connected(g);
    int n = g.n();
    Matrix d = Matrix::Zero(n, n);
    for (int s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1);
        std::deque<int> q{s};
        dist[s] = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int u : g.out_neighbors(v))
                if (dist[u] < 0) {
                    dist[u] = dist[v] + 1;
                    q.push_back(u);
                }
        }
        for (int t = 0; t < n; ++t) d(s, t) = dist[t];
    }
    return {d, MetricMode::hop};
}

}  // namespace curvflow

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvflow/common.hpp"

namespace curvflow {

struct Edge {
    int src;
    int dst;
    double weight;
};

struct GraphMeta {
    int self_loops_dropped = 0;
    int below_threshold_dropped = 0;
};

// Strongly-connected-capable directed graph with positive weights.
// Edges are kept sorted by (src, dst) so iteration order is deterministic.
class DirectedWeightedGraph {
public:
    DirectedWeightedGraph(int n, std::vector<Edge> edges, std::string name = "");

    int n() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::string& name() const { return name_; }
    const GraphMeta& meta() const { return meta_; }
    GraphMeta& meta() { return meta_; }

    // 0 if the edge is absent.
    double weight(int src, int dst) const;
    bool has_edge(int src, int dst) const { return weight(src, dst) > 0.0; }
    const std::vector<int>& out_neighbors(int v) const { return out_[v]; }
    const std::vector<int>& in_neighbors(int v) const { return in_[v]; }

    Matrix dense() const;
    DirectedWeightedGraph scaled(double lambda) const;

    // True iff every edge has a reverse edge (weights may differ).
    bool symmetric_support() const;
    // True iff symmetric support and every weight is exactly 1.
    bool unweighted_undirected() const;

private:
    int n_;
    std::vector<Edge> edges_;
    std::string name_;
    GraphMeta meta_;
    Matrix w_;  // dense weight lookup
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
};

enum class GraphFormat { json, edgelist };

DirectedWeightedGraph load_graph(const std::string& path, GraphFormat format);
// Picks json for paths ending in ".json", edgelist otherwise.
DirectedWeightedGraph load_graph_auto(const std::string& path);
std::string graph_to_json(const DirectedWeightedGraph& g);
void save_graph_json(const DirectedWeightedGraph& g, const std::string& path);

DirectedWeightedGraph from_dense(const Matrix& m, double threshold, const std::string& name = "");

void assert_strongly_connected(const DirectedWeightedGraph& g);
std::vector<std::vector<int>> strongly_connected_components(const DirectedWeightedGraph& g);

Matrix random_walk_matrix(const DirectedWeightedGraph& g);

// Dense matrix I/O: CSV (n rows of comma-separated reals) and JSON {"n", "rows"}.
Matrix load_dense_matrix(const std::string& path);
std::string matrix_to_csv(const Matrix& m);
std::string matrix_to_json(const Matrix& m);

}  // namespace curvflow

#pragma once

#include <random>
#include <vector>

#include "curvflow/graph.hpp"

namespace testsupport {

using curvflow::DirectedWeightedGraph;
using curvflow::Edge;

inline DirectedWeightedGraph make_graph(int n, std::vector<Edge> edges) {
    return DirectedWeightedGraph(n, std::move(edges));
}

inline DirectedWeightedGraph sym_two_cycle() {
    return make_graph(2, {{0, 1, 1.0}, {1, 0, 1.0}});
}

inline DirectedWeightedGraph asym_two_cycle() {
    return make_graph(2, {{0, 1, 2.0}, {1, 0, 1.0}});
}

inline DirectedWeightedGraph complete_graph(int n, double w = 1.0) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) edges.push_back({i, j, w});
    return make_graph(n, std::move(edges));
}

inline DirectedWeightedGraph cycle_graph(int n) {  // undirected unit C_n
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        edges.push_back({i, j, 1.0});
        edges.push_back({j, i, 1.0});
    }
    return make_graph(n, std::move(edges));
}

inline DirectedWeightedGraph directed_cycle(int n, double w = 1.0) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, w});
    return make_graph(n, std::move(edges));
}

inline DirectedWeightedGraph path_graph(int n) {  // undirected unit path
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) {
        edges.push_back({i, i + 1, 1.0});
        edges.push_back({i + 1, i, 1.0});
    }
    return make_graph(n, std::move(edges));
}

inline DirectedWeightedGraph two_triangles() {  // disjoint union 2 x C3
    std::vector<Edge> edges;
    for (int base : {0, 3})
        for (int i = 0; i < 3; ++i) {
            int a = base + i, b = base + (i + 1) % 3;
            edges.push_back({a, b, 1.0});
            edges.push_back({b, a, 1.0});
        }
    return make_graph(6, std::move(edges));
}

// Directed Hamiltonian cycle (guarantees strong connectivity) plus random
// extra arcs, weights in [0.1, 2].
inline DirectedWeightedGraph random_strong_digraph(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> wdist(0.1, 2.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        int a = perm[i], b = perm[(i + 1) % n];
        has[a][b] = 1;
        edges.push_back({a, b, wdist(rng)});
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b && !has[a][b] && u(rng) < 0.3) edges.push_back({a, b, wdist(rng)});
    return make_graph(n, std::move(edges));
}

// Random spanning tree plus extra undirected edges, unit weights.
inline DirectedWeightedGraph random_connected_unweighted(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
    std::vector<Edge> edges;
    auto add = [&](int a, int b) {
        if (has[a][b]) return;
        has[a][b] = has[b][a] = 1;
        edges.push_back({a, b, 1.0});
        edges.push_back({b, a, 1.0});
    };
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        add(perm[i], perm[pick(rng)]);
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (u(rng) < 0.25) add(a, b);
    return make_graph(n, std::move(edges));
}

// Symmetric support, independent random weights per direction.
inline DirectedWeightedGraph random_symmetric_support(std::mt19937& rng, int n) {
    DirectedWeightedGraph topo = random_connected_unweighted(rng, n);
    std::uniform_real_distribution<double> wdist(0.2, 2.0);
    std::vector<Edge> edges;
    for (const Edge& e : topo.edges()) edges.push_back({e.src, e.dst, wdist(rng)});
    return make_graph(n, std::move(edges));
}

inline curvflow::Vector random_measure(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    curvflow::Vector m(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        m(i) = u(rng) < 0.3 ? 0.0 : u(rng);
        total += m(i);
    }
    if (total == 0.0) {
        m(0) = 1.0;
        total = 1.0;
    }
    return m / total;
}

}  // namespace testsupport

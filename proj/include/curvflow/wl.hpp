#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "curvflow/common.hpp"
#include "curvflow/graph.hpp"

namespace curvflow {

enum class FeatureKind { rrwp, spd, raw_adjacency, sym_norm, row_norm, concat };

// Per-ordered-pair feature vectors f(v,u) of length K, flattened row-major.
struct AdjacencyFeatures {
    FeatureKind kind;
    int n = 0;
    int K = 0;
    int param = 0;  // rrwp K / spd cap
    std::vector<double> data;

    double at(int v, int u, int k) const {
        return data[(static_cast<size_t>(v) * n + u) * K + k];
    }
    double& at(int v, int u, int k) {
        return data[(static_cast<size_t>(v) * n + u) * K + k];
    }
};

AdjacencyFeatures rrwp(const DirectedWeightedGraph& g, int K);
AdjacencyFeatures spd(const DirectedWeightedGraph& g, int cap);
AdjacencyFeatures raw_adjacency(const DirectedWeightedGraph& g);
AdjacencyFeatures sym_norm_feature(const DirectedWeightedGraph& g);   // D̃^{-1/2} Ã D̃^{-1/2}
AdjacencyFeatures row_norm_feature(const DirectedWeightedGraph& g);   // D̃^{-1} Ã
AdjacencyFeatures concat_features(const AdjacencyFeatures& a, const AdjacencyFeatures& b);

struct ColorMap {
    std::vector<uint64_t> colors;
    int round = 0;
};

using RefineHistory = std::vector<ColorMap>;

// Detects (astronomically unlikely) 64-bit hash collisions by interning the
// canonical bytes behind every color id. Share one interner across graphs
// whose colors are compared.
class ColorInterner {
public:
    uint64_t intern(const std::string& bytes);

private:
    std::map<uint64_t, std::string> table_;
};

RefineHistory static_refine(const DirectedWeightedGraph& g, const AdjacencyFeatures& feats,
                            int max_rounds = 0, ColorInterner* interner = nullptr);
RefineHistory dynamic_refine(const DirectedWeightedGraph& g,
                             const std::vector<AdjacencyFeatures>& feat_cycle, int max_rounds = 0,
                             ColorInterner* interner = nullptr);

// Class ids in first-occurrence order; equal vectors <=> equal partitions.
std::vector<int> partition_ids(const ColorMap& cm);
std::vector<uint64_t> sorted_colors(const ColorMap& cm);

struct RefineConfig {
    std::vector<AdjacencyFeatures> g1_feats;  // feature cycle for graph 1
    std::vector<AdjacencyFeatures> g2_feats;  // same kinds computed on graph 2
    int max_rounds = 0;
};

struct DistinguishResult {
    bool distinguishable = false;
    int witness_round = -1;  // first round with differing color multisets
};

DistinguishResult distinguishes(const DirectedWeightedGraph& g1, const DirectedWeightedGraph& g2,
                                const RefineConfig& cfg);

}  // namespace curvflow

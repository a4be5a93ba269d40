#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvflow/common.hpp"
#include "curvflow/graph.hpp"
#include "curvflow/wl.hpp"

namespace curvflow {

enum class ConnectivityKind { fixed_feature, softmax_linear, gated_sigmoid };
enum class Scope { local, nonlocal_hops, global };

// Per-head connectivity score parameters: score(v,u) = w_v.h_v + w_u.h_u + w_f.f_vu + bias.
// fixed_feature ignores w_v/w_u and uses w_f.f_vu directly as omega.
struct HeadParams {
    Vector w_v;
    Vector w_u;
    Vector w_f;
    double bias = 0.0;
};

struct LayerConfig {
    FeatureKind adjacency = FeatureKind::raw_adjacency;
    int adjacency_param = 0;  // rrwp K / spd cap
    ConnectivityKind connectivity = ConnectivityKind::fixed_feature;
    std::vector<HeadParams> heads;  // size >= 1
    Scope scope = Scope::local;
    int hop_budget = 1;                             // nonlocal only
    std::optional<AdjacencyFeatures> edge_feats;    // optional E, concatenated to f
    Matrix msg_A;                                   // message M(h_u) = msg_A h_u + msg_b
    Vector msg_b;
    Matrix upd_Ah;  // update h' = upd_Ah h + upd_Am m + upd_b
    Matrix upd_Am;
    Vector upd_b;
};

struct NodeState {
    Matrix h;  // n x c
};

Matrix propagation_matrix(const DirectedWeightedGraph& g, const LayerConfig& cfg,
                          const NodeState& h, int head);
NodeState layer_forward(const DirectedWeightedGraph& g, const LayerConfig& cfg,
                        const NodeState& h);

enum class Preset { gcn, sage_gcn, gin, gated };

Preset preset_from_name(const std::string& name);
// theta are GIN's update coefficients; gate_w1/gate_w2 feed the gated preset.
LayerConfig make_preset(Preset p, int channels, double theta0 = 0.0, double theta1 = 1.0,
                        const Vector& gate_w1 = Vector(), const Vector& gate_w2 = Vector());

bool cast_check(Preset p, const DirectedWeightedGraph& g, const NodeState& h,
                double tol = 1e-10);

LayerConfig layer_config_from_json(const std::string& text);

}  // namespace curvflow

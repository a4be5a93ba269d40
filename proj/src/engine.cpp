#include "curvflow/engine.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include <json.hpp>

namespace curvflow {

namespace {

using json = nlohmann::json;

AdjacencyFeatures build_features(const DirectedWeightedGraph& g, FeatureKind kind, int param) {
    switch (kind) {
        case FeatureKind::rrwp: return rrwp(g, param);
        case FeatureKind::spd: return spd(g, param);
        case FeatureKind::raw_adjacency: return raw_adjacency(g);
        case FeatureKind::sym_norm: return sym_norm_feature(g);
        case FeatureKind::row_norm: return row_norm_feature(g);
        case FeatureKind::concat: break;
    }
    throw Error("propagation_engine: unsupported adjacency kind");
}

// Scope mask: local = edge support plus the diagonal (the self-loop slot the
// castings use); nonlocal = directed hop distance <= budget; global = all.
std::vector<char> scope_mask(const DirectedWeightedGraph& g, Scope scope, int budget) {
    int n = g.n();
    std::vector<char> mask(static_cast<size_t>(n) * n, 0);
    auto set = [&](int v, int u) { mask[static_cast<size_t>(v) * n + u] = 1; };
    if (scope == Scope::global) {
        std::fill(mask.begin(), mask.end(), 1);
        return mask;
    }
    if (scope == Scope::local) {
        for (int v = 0; v < n; ++v) set(v, v);
        for (const Edge& e : g.edges()) set(e.src, e.dst);
        return mask;
    }
    for (int s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1);
        std::deque<int> q{s};
        dist[s] = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            if (dist[v] >= budget) continue;
            for (int u : g.out_neighbors(v))
                if (dist[u] < 0) {
                    dist[u] = dist[v] + 1;
                    q.push_back(u);
                }
        }
        for (int t = 0; t < n; ++t)
            if (dist[t] >= 0) set(s, t);
    }
    return mask;
}

Vector pair_feature(const LayerConfig& cfg, const AdjacencyFeatures& f, int v, int u) {
    int de = cfg.edge_feats ? cfg.edge_feats->K : 0;
    Vector out(f.K + de);
    for (int k = 0; k < f.K; ++k) out(k) = f.at(v, u, k);
    for (int k = 0; k < de; ++k) out(f.K + k) = cfg.edge_feats->at(v, u, k);
    return out;
}

}  // namespace

Matrix propagation_matrix(const DirectedWeightedGraph& g, const LayerConfig& cfg,
                          const NodeState& h, int head) {
    if (cfg.heads.empty()) throw Error("propagation_engine: config needs at least one head");
    if (head < 0 || head >= static_cast<int>(cfg.heads.size()))
        throw Error("propagation_engine: head index out of range");
    int n = g.n();
    if (h.h.rows() != n) throw Error("propagation_engine: node state has wrong row count");
    const HeadParams& hp = cfg.heads[head];
    AdjacencyFeatures feats = build_features(g, cfg.adjacency, cfg.adjacency_param);
    if (cfg.edge_feats && cfg.edge_feats->n != n)
        throw Error("propagation_engine: edge feature dimension mismatch");
    std::vector<char> mask = scope_mask(g, cfg.scope, cfg.hop_budget);
    auto allowed = [&](int v, int u) { return mask[static_cast<size_t>(v) * n + u] != 0; };

    int fdim = feats.K + (cfg.edge_feats ? cfg.edge_feats->K : 0);
    if (hp.w_f.size() != fdim)
        throw Error("propagation_engine: w_f size does not match feature dimension");

    Matrix omega = Matrix::Zero(n, n);
    if (cfg.connectivity == ConnectivityKind::fixed_feature) {
        for (int v = 0; v < n; ++v)
            for (int u = 0; u < n; ++u)
                if (allowed(v, u)) omega(v, u) = hp.w_f.dot(pair_feature(cfg, feats, v, u));
        return omega;
    }

    if (hp.w_v.size() != h.h.cols() || hp.w_u.size() != h.h.cols())
        throw Error("propagation_engine: w_v/w_u size does not match channel count");
    Matrix score = Matrix::Zero(n, n);
    for (int v = 0; v < n; ++v)
        for (int u = 0; u < n; ++u) {
            if (!allowed(v, u)) continue;
            score(v, u) = hp.w_v.dot(h.h.row(v)) + hp.w_u.dot(h.h.row(u)) +
                          hp.w_f.dot(pair_feature(cfg, feats, v, u)) + hp.bias;
        }

    if (cfg.connectivity == ConnectivityKind::softmax_linear) {
        for (int v = 0; v < n; ++v) {
            double mx = -std::numeric_limits<double>::infinity();
            for (int u = 0; u < n; ++u)
                if (allowed(v, u)) mx = std::max(mx, score(v, u));
            double denom = 0.0;
            for (int u = 0; u < n; ++u)
                if (allowed(v, u)) denom += std::exp(score(v, u) - mx);
            if (denom == 0.0) throw Error("propagation_engine: empty softmax row");
            for (int u = 0; u < n; ++u)
                if (allowed(v, u)) omega(v, u) = std::exp(score(v, u) - mx) / denom;
        }
        return omega;
    }

    // gated_sigmoid: sigmoid gates on the scoped support, row-normalized
    for (int v = 0; v < n; ++v) {
        double denom = 0.0;
        for (int u = 0; u < n; ++u)
            if (allowed(v, u)) denom += 1.0 / (1.0 + std::exp(-score(v, u)));
        if (denom == 0.0) throw Error("propagation_engine: empty gated row");
        for (int u = 0; u < n; ++u)
            if (allowed(v, u)) omega(v, u) = (1.0 / (1.0 + std::exp(-score(v, u)))) / denom;
    }
    return omega;
}

NodeState layer_forward(const DirectedWeightedGraph& g, const LayerConfig& cfg,
                        const NodeState& h) {
    int n = g.n();
    if (cfg.msg_A.cols() != h.h.cols())
        throw Error("propagation_engine: message map dimension mismatch");
    Matrix hm = h.h * cfg.msg_A.transpose();
    hm.rowwise() += cfg.msg_b.transpose();
    Matrix m = Matrix::Zero(n, hm.cols());
    for (int head = 0; head < static_cast<int>(cfg.heads.size()); ++head)
        m += propagation_matrix(g, cfg, h, head) * hm;
    if (cfg.upd_Ah.cols() != h.h.cols() || cfg.upd_Am.cols() != m.cols())
        throw Error("propagation_engine: update map dimension mismatch");
    Matrix out = h.h * cfg.upd_Ah.transpose() + m * cfg.upd_Am.transpose();
    out.rowwise() += cfg.upd_b.transpose();
    return {out};
}

Preset preset_from_name(const std::string& name) {
    if (name == "gcn") return Preset::gcn;
    if (name == "sage_gcn") return Preset::sage_gcn;
    if (name == "gin") return Preset::gin;
    if (name == "gated") return Preset::gated;
    throw Error("propagation_engine: unknown preset \"" + name + "\"");
}

LayerConfig make_preset(Preset p, int channels, double theta0, double theta1,
                        const Vector& gate_w1, const Vector& gate_w2) {
    LayerConfig cfg;
    cfg.scope = Scope::local;
    cfg.heads.resize(1);
    cfg.heads[0].w_f = Vector::Ones(1);
    cfg.msg_A = Matrix::Identity(channels, channels);
    cfg.msg_b = Vector::Zero(channels);
    cfg.upd_Ah = Matrix::Zero(channels, channels);
    cfg.upd_Am = Matrix::Identity(channels, channels);
    cfg.upd_b = Vector::Zero(channels);
    switch (p) {
        case Preset::gcn:
            cfg.adjacency = FeatureKind::sym_norm;
            break;
        case Preset::sage_gcn:
            cfg.adjacency = FeatureKind::row_norm;
            break;
        case Preset::gin:
            cfg.adjacency = FeatureKind::raw_adjacency;
            cfg.upd_Ah = (1.0 - theta0) * Matrix::Identity(channels, channels);
            cfg.upd_Am = theta1 * Matrix::Identity(channels, channels);
            break;
        case Preset::gated:
            cfg.adjacency = FeatureKind::raw_adjacency;
            cfg.connectivity = ConnectivityKind::gated_sigmoid;
            cfg.heads[0].w_f = Vector::Zero(1);
            cfg.heads[0].w_v = gate_w1.size() ? gate_w1 : Vector::Zero(channels);
            cfg.heads[0].w_u = gate_w2.size() ? gate_w2 : Vector::Zero(channels);
            break;
    }
    return cfg;
}

bool cast_check(Preset p, const DirectedWeightedGraph& g, const NodeState& h, double tol) {
    int n = g.n();
    int c = static_cast<int>(h.h.cols());
    LayerConfig cfg = make_preset(p, c);
    Matrix a = Matrix::Zero(n, n);
    for (const Edge& e : g.edges()) a(e.src, e.dst) = 1.0;
    Matrix at = a + Matrix::Identity(n, n);

    // Direct formulas, written independently of the engine path.
    Matrix expected;
    switch (p) {
        case Preset::gcn: {
            Vector dinv = at.rowwise().sum().cwiseSqrt().cwiseInverse();
            expected = dinv.asDiagonal() * at * dinv.asDiagonal() * h.h;
            break;
        }
        case Preset::sage_gcn: {
            Vector dinv = at.rowwise().sum().cwiseInverse();
            expected = dinv.asDiagonal() * at * h.h;
            break;
        }
        case Preset::gin:
            expected = h.h + a * h.h;  // theta0 = 0, theta1 = 1
            break;
        case Preset::gated: {
            // zero gate weights: sigmoid(0) = 0.5 on the support, uniform rows
            expected = Matrix::Zero(n, c);
            Matrix gates = 0.5 * at;
            for (int v = 0; v < n; ++v) {
                double denom = gates.row(v).sum();
                expected.row(v) = (gates.row(v) / denom) * h.h;
            }
            break;
        }
    }
    NodeState out = layer_forward(g, cfg, h);
    return (out.h - expected).cwiseAbs().maxCoeff() <= tol;
}

LayerConfig layer_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("propagation_engine: bad config JSON: ") + e.what());
    }
    LayerConfig cfg;
    std::string adj = j.value("adjacency", "raw");
    if (adj == "raw") {
        cfg.adjacency = FeatureKind::raw_adjacency;
    } else if (adj == "sym_norm") {
        cfg.adjacency = FeatureKind::sym_norm;
    } else if (adj == "row_norm") {
        cfg.adjacency = FeatureKind::row_norm;
    } else if (adj.rfind("rrwp:", 0) == 0) {
        cfg.adjacency = FeatureKind::rrwp;
        cfg.adjacency_param = std::stoi(adj.substr(5));
    } else if (adj.rfind("spd:", 0) == 0) {
        cfg.adjacency = FeatureKind::spd;
        cfg.adjacency_param = std::stoi(adj.substr(4));
    } else {
        throw Error("propagation_engine: unknown adjacency \"" + adj + "\"");
    }
    std::string conn = j.value("connectivity", "fixed");
    if (conn == "fixed")
        cfg.connectivity = ConnectivityKind::fixed_feature;
    else if (conn == "softmax")
        cfg.connectivity = ConnectivityKind::softmax_linear;
    else if (conn == "gated")
        cfg.connectivity = ConnectivityKind::gated_sigmoid;
    else
        throw Error("propagation_engine: unknown connectivity \"" + conn + "\"");
    std::string scope = j.value("scope", "local");
    if (scope == "local") {
        cfg.scope = Scope::local;
    } else if (scope == "global") {
        cfg.scope = Scope::global;
    } else if (scope.rfind("nonlocal:", 0) == 0) {
        cfg.scope = Scope::nonlocal_hops;
        cfg.hop_budget = std::stoi(scope.substr(9));
    } else {
        throw Error("propagation_engine: unknown scope \"" + scope + "\"");
    }

    auto to_vector = (+[](const json& a) {
        Vector v(a.size());
        for (size_t i = 0; i < a.size(); ++i) v(i) = a[i].get<double>();
        return v;
    });
    auto to_matrix = (+[](const json& a) {
        if (a.empty()) return Matrix();
        Matrix m(a.size(), a[0].size());
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t k = 0; k < a[i].size(); ++k) m(i, k) = a[i][k].get<double>();
        return m;
    });

    for (const auto& head : j.at("heads")) {
        HeadParams hp;
        if (head.contains("w_v")) hp.w_v = to_vector(head["w_v"]);
        if (head.contains("w_u")) hp.w_u = to_vector(head["w_u"]);
        hp.w_f = to_vector(head.at("w_f"));
        hp.bias = head.value("bias", 0.0);
        cfg.heads.push_back(std::move(hp));
    }
    if (cfg.heads.empty()) throw Error("propagation_engine: config needs at least one head");
    cfg.msg_A = to_matrix(j.at("message").at("A"));
    cfg.msg_b = to_vector(j.at("message").at("b"));
    cfg.upd_Ah = to_matrix(j.at("update").at("Ah"));
    cfg.upd_Am = to_matrix(j.at("update").at("Am"));
    cfg.upd_b = to_vector(j.at("update").at("b"));
    return cfg;
}

}  // namespace curvflow

#include "curvflow/wl.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>

namespace curvflow {

namespace {

constexpr uint64_t kFnvOffset = 1469598103934665603ull;
constexpr uint64_t kFnvPrime = 1099511628211ull;
constexpr uint64_t kInitialColor = kFnvOffset;

uint64_t fnv1a(const std::string& bytes) {
    uint64_t h = kFnvOffset;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

// Features are quantized to 12 decimal digits before hashing so color ids
// are reproducible across runs and platforms.
void append_quantized(std::string& out, double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[32];
    snprintf(buf, sizeof(buf), "%.12e", v);
    out += buf;
}

void append_color(std::string& out, uint64_t c) {
    for (int i = 7; i >= 0; --i) out += static_cast<char>((c >> (8 * i)) & 0xff);
}

Matrix binary_adjacency(const DirectedWeightedGraph& g) {
    int n = g.n();
    Matrix a = Matrix::Zero(n, n);
    for (const Edge& e : g.edges()) a(e.src, e.dst) = 1.0;
    return a;
}

AdjacencyFeatures from_matrix(FeatureKind kind, const Matrix& m) {
    AdjacencyFeatures f;
    f.kind = kind;
    f.n = static_cast<int>(m.rows());
    f.K = 1;
    f.data.resize(static_cast<size_t>(f.n) * f.n);
    for (int v = 0; v < f.n; ++v)
        for (int u = 0; u < f.n; ++u) f.at(v, u, 0) = m(v, u);
    return f;
}

ColorMap refine_once(const ColorMap& prev, const AdjacencyFeatures& feats,
                     ColorInterner& interner) {
    int n = static_cast<int>(prev.colors.size());
    ColorMap next;
    next.round = prev.round + 1;
    next.colors.resize(n);
    for (int v = 0; v < n; ++v) {
        std::vector<std::string> elems(n);
        for (int u = 0; u < n; ++u) {
            std::string e;
            append_color(e, prev.colors[u]);
            for (int k = 0; k < feats.K; ++k) {
                e += ',';
                append_quantized(e, feats.at(v, u, k));
            }
            elems[u] = std::move(e);
        }
        std::sort(elems.begin(), elems.end());
        std::string bytes;
        for (const std::string& e : elems) {
            bytes += e;
            bytes += ';';
        }
        next.colors[v] = interner.intern(bytes);
    }
    return next;
}

bool same_partition(const ColorMap& a, const ColorMap& b) {
    return partition_ids(a) == partition_ids(b);
}

}  // namespace

uint64_t ColorInterner::intern(const std::string& bytes) {
    uint64_t h = fnv1a(bytes);
    auto [it, inserted] = table_.emplace(h, bytes);
    if (!inserted && it->second != bytes)
        throw Error("wl_expressiveness: 64-bit color hash collision");
    return h;
}

AdjacencyFeatures rrwp(const DirectedWeightedGraph& g, int K) {
    if (K < 1) throw Error("wl_expressiveness: rrwp needs K >= 1");
    int n = g.n();
    Matrix a = binary_adjacency(g);
    Matrix m = a;
    for (int i = 0; i < n; ++i) {
        double deg = m.row(i).sum();
        if (deg > 0.0) m.row(i) /= deg;  // zero out-degree rows stay zero
    }
    AdjacencyFeatures f;
    f.kind = FeatureKind::rrwp;
    f.n = n;
    f.K = K;
    f.param = K;
    f.data.resize(static_cast<size_t>(n) * n * K);
    Matrix power = Matrix::Identity(n, n);
    for (int k = 0; k < K; ++k) {
        for (int v = 0; v < n; ++v)
            for (int u = 0; u < n; ++u) f.at(v, u, k) = power(v, u);
        power = power * m;
    }
    return f;
}

AdjacencyFeatures spd(const DirectedWeightedGraph& g, int cap) {
    if (cap < 1) throw Error("wl_expressiveness: spd needs cap >= 1");
    int n = g.n();
    AdjacencyFeatures f;
    f.kind = FeatureKind::spd;
    f.n = n;
    f.K = 1;
    f.param = cap;
    f.data.resize(static_cast<size_t>(n) * n);
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
        for (int t = 0; t < n; ++t)
            f.at(s, t, 0) = dist[t] < 0 ? cap : std::min(dist[t], cap);
    }
    return f;
}

AdjacencyFeatures raw_adjacency(const DirectedWeightedGraph& g) {
    return from_matrix(FeatureKind::raw_adjacency, binary_adjacency(g));
}

AdjacencyFeatures sym_norm_feature(const DirectedWeightedGraph& g) {
    int n = g.n();
    Matrix a = binary_adjacency(g) + Matrix::Identity(n, n);
    Vector dinv(n);
    for (int i = 0; i < n; ++i) dinv(i) = 1.0 / std::sqrt(a.row(i).sum());
    Matrix m = dinv.asDiagonal() * a * dinv.asDiagonal();
    return from_matrix(FeatureKind::sym_norm, m);
}

AdjacencyFeatures row_norm_feature(const DirectedWeightedGraph& g) {
    int n = g.n();
    Matrix a = binary_adjacency(g) + Matrix::Identity(n, n);
    for (int i = 0; i < n; ++i) a.row(i) /= a.row(i).sum();
    return from_matrix(FeatureKind::row_norm, a);
}

AdjacencyFeatures concat_features(const AdjacencyFeatures& a, const AdjacencyFeatures& b) {
    if (a.n != b.n) throw Error("wl_expressiveness: concat dimension mismatch");
    AdjacencyFeatures f;
    f.kind = FeatureKind::concat;
    f.n = a.n;
    f.K = a.K + b.K;
    f.data.resize(static_cast<size_t>(f.n) * f.n * f.K);
    for (int v = 0; v < f.n; ++v)
        for (int u = 0; u < f.n; ++u) {
            for (int k = 0; k < a.K; ++k) f.at(v, u, k) = a.at(v, u, k);
            for (int k = 0; k < b.K; ++k) f.at(v, u, a.K + k) = b.at(v, u, k);
        }
    return f;
}

RefineHistory dynamic_refine(const DirectedWeightedGraph& g,
                             const std::vector<AdjacencyFeatures>& feat_cycle, int max_rounds,
                             ColorInterner* interner) {
    if (feat_cycle.empty()) throw Error("wl_expressiveness: empty feature cycle");
    for (const auto& f : feat_cycle)
        if (f.n != g.n()) throw Error("wl_expressiveness: feature dimension mismatch");
    int p = static_cast<int>(feat_cycle.size());
    if (max_rounds <= 0) max_rounds = g.n() * p + p;
    ColorInterner local;
    ColorInterner& in = interner ? *interner : local;

    RefineHistory hist;
    hist.push_back({std::vector<uint64_t>(g.n(), kInitialColor), 0});
    int stable_streak = 0;
    for (int t = 0; t < max_rounds; ++t) {
        ColorMap next = refine_once(hist.back(), feat_cycle[t % p], in);
        bool unchanged = same_partition(hist.back(), next);
        hist.push_back(std::move(next));
        stable_streak = unchanged ? stable_streak + 1 : 0;
        if (stable_streak >= p) break;  // fixed across a full feature cycle
    }
    return hist;
}

RefineHistory static_refine(const DirectedWeightedGraph& g, const AdjacencyFeatures& feats,
                            int max_rounds, ColorInterner* interner) {
    return dynamic_refine(g, {feats}, max_rounds, interner);
}

std::vector<int> partition_ids(const ColorMap& cm) {
    std::vector<int> ids(cm.colors.size());
    std::map<uint64_t, int> seen;
    int next = 0;
    for (size_t v = 0; v < cm.colors.size(); ++v) {
        auto [it, inserted] = seen.emplace(cm.colors[v], next);
        if (inserted) ++next;
        ids[v] = it->second;
    }
    return ids;
}

std::vector<uint64_t> sorted_colors(const ColorMap& cm) {
    std::vector<uint64_t> c = cm.colors;
    std::sort(c.begin(), c.end());
    return c;
}

DistinguishResult distinguishes(const DirectedWeightedGraph& g1, const DirectedWeightedGraph& g2,
                                const RefineConfig& cfg) {
    if (cfg.g1_feats.size() != cfg.g2_feats.size())
        throw Error("wl_expressiveness: feature cycles must have matching kinds");
    ColorInterner shared;
    RefineHistory h1 = dynamic_refine(g1, cfg.g1_feats, cfg.max_rounds, &shared);
    RefineHistory h2 = dynamic_refine(g2, cfg.g2_feats, cfg.max_rounds, &shared);
    size_t rounds = std::max(h1.size(), h2.size());
    for (size_t t = 0; t < rounds; ++t) {
        const ColorMap& a = h1[std::min(t, h1.size() - 1)];
        const ColorMap& b = h2[std::min(t, h2.size() - 1)];
        if (sorted_colors(a) != sorted_colors(b))
            return {true, static_cast<int>(t)};
    }
    return {false, -1};
}

}  // namespace curvflow

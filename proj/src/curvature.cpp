#include "curvflow/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "curvflow/lp.hpp"
#include "curvflow/parallel.hpp"
#include "curvflow/transport.hpp"

namespace curvflow {

namespace {

using json = nlohmann::json;

PairList all_pairs(int n) {
    PairList out;
    out.reserve(static_cast<size_t>(n) * (n - 1));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (x != y) out.push_back({x, y});
    return out;
}

PairList adjacent_pairs(const DirectedWeightedGraph& g) {
    PairList out;
    for (const Edge& e : g.edges()) out.push_back({e.src, e.dst});
    return out;
}

void check_pairs(const PairList& pairs, int n) {
    for (auto [x, y] : pairs) {
        if (x < 0 || x >= n || y < 0 || y >= n)
            throw Error("curvature: pair vertex out of range");
        if (x == y) throw Error("curvature: pairs must have x != y");
    }
}

Summary summarize(std::vector<double> vals) {
    Summary s;
    if (vals.empty()) return s;
    std::sort(vals.begin(), vals.end());
    s.min = vals.front();
    s.max = vals.back();
    double sum = 0.0;
    for (double v : vals) sum += v;
    s.mean = sum / static_cast<double>(vals.size());
    for (int q : {5, 25, 50, 75, 95}) {
        double pos = q / 100.0 * static_cast<double>(vals.size() - 1);
        size_t lo = static_cast<size_t>(pos);
        size_t hi = std::min(lo + 1, vals.size() - 1);
        double frac = pos - static_cast<double>(lo);
        s.quantiles[q] = vals[lo] * (1.0 - frac) + vals[hi] * frac;
    }
    return s;
}

CurvatureReport make_report(CurvatureKind kind, const PairList& pairs,
                            const std::vector<double>& vals, double eps = 0.0) {
    CurvatureReport r;
    r.kind = kind;
    r.eps = eps;
    r.values.reserve(pairs.size());
    for (size_t i = 0; i < pairs.size(); ++i)
        r.values.push_back({pairs[i].first, pairs[i].second, vals[i]});
    std::sort(r.values.begin(), r.values.end(), [](const PairValue& a, const PairValue& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    r.summary = summarize(vals);
    return r;
}

CurvatureReport transport_curvature(CurvatureKind kind, const PerronKernel& k,
                                    const QuasiMetric& d, const PairList& pairs, double eps = 0.0) {
    std::vector<double> vals(pairs.size());
    parallel_for(static_cast<int>(pairs.size()), [&](int i) {
        auto [x, y] = pairs[i];
        vals[i] = 1.0 - wasserstein1(k.mu.row(x), k.mu.row(y), d).cost / d.d(x, y);
    });
    return make_report(kind, pairs, vals, eps);
}

// O(k^3) Hungarian assignment, maximizing total weight on a square matrix.
double max_weight_assignment(const Matrix& w) {
    int n = static_cast<int>(w.rows());
    if (n == 0) return 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    // minimize cost = -weight, 1-indexed potentials
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = -w(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    double total = 0.0;
    for (int j = 1; j <= n; ++j) total += w(p[j] - 1, j - 1);
    return total;
}

// z adjacent to x but not y (and z != y) that closes a 4-cycle x-z-w-y.
std::vector<int> square_set(const DirectedWeightedGraph& g, int x, int y) {
    std::vector<int> out;
    for (int z : g.out_neighbors(x)) {
        if (z == y || g.has_edge(y, z)) continue;
        bool witness = false;
        for (int w : g.out_neighbors(z)) {
            if (w == x || w == y) continue;
            if (g.has_edge(y, w) && !g.has_edge(x, w)) {
                witness = true;
                break;
            }
        }
        if (witness) out.push_back(z);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double lb2_pair(const DirectedWeightedGraph& g, const PerronKernel& k, int x, int y) {
    const Matrix& mu = k.mu;
    double third = 0.0, smax = 0.0;
    for (int z : g.out_neighbors(x)) {
        if (z == y || !g.has_edge(y, z)) continue;  // triangles only
        third += std::min(mu(x, z), mu(y, z));
        smax += std::max(mu(x, z), mu(y, z));
    }
    std::vector<int> sq_xy = square_set(g, x, y);
    std::vector<int> sq_yx = square_set(g, y, x);
    int kdim = static_cast<int>(std::max(sq_xy.size(), sq_yx.size()));
    double s_sq = 0.0;
    if (kdim > 0) {
        Matrix w = Matrix::Zero(kdim, kdim);
        for (size_t i = 0; i < sq_xy.size(); ++i)
            for (size_t j = 0; j < sq_yx.size(); ++j)
                if (g.has_edge(sq_xy[i], sq_yx[j]))
                    w(i, j) = std::min(mu(x, sq_xy[i]), mu(y, sq_yx[j]));
        s_sq = max_weight_assignment(w);
    }
    double base = 1.0 - mu(x, y) - mu(y, x) - s_sq;
    double t1 = std::max(0.0, base - smax);
    double t2 = std::max(0.0, base - third);
    return -t1 - t2 + third;
}

double idle_pair(const PerronKernel& k, const QuasiMetric& q, int x, int y) {
    const Matrix& d = q.d;
    const Matrix& mu = k.mu;
    int n = static_cast<int>(d.rows());
    double dxy = d(x, y);

    // Free variables f(v), v not in {x,y}; f(x)=0, f(y)=d(x,y).
    // Substitute g(v) = f(v) + d(v,x) >= 0.
    std::vector<int> free;
    for (int v = 0; v < n; ++v)
        if (v != x && v != y) free.push_back(v);
    int nv = static_cast<int>(free.size());
    std::vector<int> col(n, -1);
    for (int i = 0; i < nv; ++i) col[free[i]] = i;

    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> rhs;
    auto add_row = [&](Eigen::RowVectorXd r, double b) {
        rows.push_back(std::move(r));
        rhs.push_back(b);
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            bool afree = col[a] >= 0, bfree = col[b] >= 0;
            if (afree && bfree) {
                Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(nv);
                r(col[b]) = 1.0;
                r(col[a]) = -1.0;
                add_row(r, d(a, b) + d(b, x) - d(a, x));
            } else if (afree && b == y) {
                Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(nv);
                r(col[a]) = -1.0;
                add_row(r, d(a, y) - dxy - d(a, x));
            } else if (afree && b == x) {
                // f(x) - f(a) <= d(a,x)  ==  g(a) >= 0, implicit
            } else if (a == x && bfree) {
                Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(nv);
                r(col[b]) = 1.0;
                add_row(r, d(x, b) + d(b, x));
            } else if (a == y && bfree) {
                Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(nv);
                r(col[b]) = 1.0;
                add_row(r, d(y, b) + dxy + d(b, x));
            }
            // (x,y) and (y,x) hold identically for the fixed values
        }

    double opt;
    if (nv == 0) {
        opt = 0.0;
    } else {
        Matrix A(static_cast<int>(rows.size()), nv);
        Vector b(static_cast<int>(rows.size()));
        for (size_t i = 0; i < rows.size(); ++i) {
            A.row(static_cast<int>(i)) = rows[i];
            b(static_cast<int>(i)) = rhs[i];
        }
        Vector c(nv);
        for (int i = 0; i < nv; ++i) c(i) = mu(y, free[i]) - mu(x, free[i]);
        LpResult lp = simplex_solve(c, A, b);
        if (lp.status != LpStatus::optimal)
            throw Error("curvature: idle LP did not reach an optimum");
        opt = lp.value;
    }
    double constant = -mu(x, y) * dxy;
    for (int i = 0; i < nv; ++i)
        constant -= (mu(y, free[i]) - mu(x, free[i])) * d(free[i], x);
    double best = opt + constant;  // max of sum_u (mu(y,u)-mu(x,u)) f(u)
    return 1.0 - best / dxy;
}

}  // namespace

std::string curvature_kind_name(CurvatureKind kind) {
    switch (kind) {
        case CurvatureKind::curc: return "curc";
        case CurvatureKind::curc_eps: return "curc_eps";
        case CurvatureKind::idle_curc: return "idle_curc";
        case CurvatureKind::ollivier: return "ollivier";
        case CurvatureKind::forman: return "forman";
        case CurvatureKind::lb1: return "lb1";
        case CurvatureKind::lb2: return "lb2";
    }
    return "?";
}

std::string CurvatureReport::to_json() const {
    json j;
    j["kind"] = curvature_kind_name(kind);
    if (kind == CurvatureKind::curc_eps) j["eps"] = round_sig12(eps);
    json pairs = json::array();
    for (const PairValue& v : values)
        pairs.push_back({{"x", v.x}, {"y", v.y}, {"kappa", round_sig12(v.kappa)}});
    j["pairs"] = std::move(pairs);
    json q;
    for (auto [k, v] : summary.quantiles) q["q" + std::to_string(k)] = round_sig12(v);
    j["summary"] = {{"min", round_sig12(summary.min)},
                    {"max", round_sig12(summary.max)},
                    {"mean", round_sig12(summary.mean)},
                    {"quantiles", std::move(q)}};
    return j.dump();
}

std::string CurvatureReport::to_csv() const {
    std::string out = "x,y,kappa\n";
    for (const PairValue& v : values) {
        out += std::to_string(v.x) + "," + std::to_string(v.y) + "," + format_sig12(v.kappa);
        out += '\n';
    }
    return out;
}

double curc_pair(const PerronKernel& k, const QuasiMetric& d, int x, int y) {
    return 1.0 - wasserstein1(k.mu.row(x), k.mu.row(y), d).cost / d.d(x, y);
}

CurvatureReport curc(const DirectedWeightedGraph& g, const PairList& pairs) {
    PairList ps = pairs.empty() ? all_pairs(g.n()) : pairs;
    check_pairs(ps, g.n());
    PerronKernel k = mean_transition_kernel(g);
    QuasiMetric d = limit_distance(g);
    return transport_curvature(CurvatureKind::curc, k, d, ps);
}

CurvatureReport curc_eps(const DirectedWeightedGraph& g, double eps, const PairList& pairs) {
    PairList ps = pairs.empty() ? all_pairs(g.n()) : pairs;
    check_pairs(ps, g.n());
    PerronKernel k = mean_transition_kernel(g);
    QuasiMetric d = epsilon_distance(g, eps);
    return transport_curvature(CurvatureKind::curc_eps, k, d, ps, eps);
}

CurvatureReport ollivier(const DirectedWeightedGraph& g, const PairList& pairs) {
    if (!g.unweighted_undirected())
        throw Error("curvature: ollivier requires symmetric unit weights");
    PairList ps = pairs.empty() ? all_pairs(g.n()) : pairs;
    check_pairs(ps, g.n());
    QuasiMetric d = hop_distance(g);
    int n = g.n();
    Matrix mu = Matrix::Zero(n, n);
    for (int v = 0; v < n; ++v) {
        const auto& nbrs = g.out_neighbors(v);
        for (int u : nbrs) mu(v, u) = 1.0 / static_cast<double>(nbrs.size());
    }
    std::vector<double> vals(ps.size());
    parallel_for(static_cast<int>(ps.size()), [&](int i) {
        auto [x, y] = ps[i];
        vals[i] = 1.0 - wasserstein1(mu.row(x), mu.row(y), d).cost / d.d(x, y);
    });
    return make_report(CurvatureKind::ollivier, ps, vals);
}

double forman(const DirectedWeightedGraph& g, int x, int y) {
    if (!g.unweighted_undirected())
        throw Error("curvature: forman requires symmetric unit weights");
    if (!g.has_edge(x, y)) throw Error("curvature: forman needs an existing edge");
    int dx = static_cast<int>(g.out_neighbors(x).size());
    int dy = static_cast<int>(g.out_neighbors(y).size());
    int tri = 0;
    for (int z : g.out_neighbors(x))
        if (z != y && g.has_edge(y, z)) ++tri;
    return 4.0 - dx - dy + 3.0 * tri;
}

CurvatureReport forman_report(const DirectedWeightedGraph& g, const PairList& pairs) {
    PairList ps = pairs.empty() ? adjacent_pairs(g) : pairs;
    check_pairs(ps, g.n());
    std::vector<double> vals(ps.size());
    for (size_t i = 0; i < ps.size(); ++i) vals[i] = forman(g, ps[i].first, ps[i].second);
    return make_report(CurvatureKind::forman, ps, vals);
}

CurvatureReport lb1(const DirectedWeightedGraph& g, const PairList& pairs) {
    PairList ps = pairs.empty() ? all_pairs(g.n()) : pairs;
    check_pairs(ps, g.n());
    PerronKernel k = mean_transition_kernel(g);
    QuasiMetric q = limit_distance(g);
    const Matrix& d = q.d;
    const Matrix& mu = k.mu;
    int n = g.n();
    std::vector<double> vals(ps.size());
    for (size_t i = 0; i < ps.size(); ++i) {
        auto [x, y] = ps[i];
        double dxy = d(x, y);
        double big = std::max(dxy, d(y, x));
        double h = 0.0;
        for (int z = 0; z < n; ++z) h += mu(y, z) * d(y, z) + mu(x, z) * d(z, x);
        double mass = mu(x, y) + mu(y, x);
        vals[i] = -(2.0 * big / dxy) * std::max(0.0, 1.0 - mass) +
                  (dxy + big - h) / dxy - ((big - d(y, x)) / dxy) * mass;
    }
    return make_report(CurvatureKind::lb1, ps, vals);
}

CurvatureReport lb2(const DirectedWeightedGraph& g, const PairList& pairs) {
    if (!g.symmetric_support()) throw Error("curvature: lb2 requires symmetric support");
    PairList ps = pairs.empty() ? adjacent_pairs(g) : pairs;
    check_pairs(ps, g.n());
    for (auto [x, y] : ps)
        if (!g.has_edge(x, y)) throw Error("curvature: lb2 pairs must be adjacent");
    PerronKernel k = mean_transition_kernel(g);
    std::vector<double> vals(ps.size());
    for (size_t i = 0; i < ps.size(); ++i) vals[i] = lb2_pair(g, k, ps[i].first, ps[i].second);
    return make_report(CurvatureKind::lb2, ps, vals);
}

CurvatureReport idle_curc(const DirectedWeightedGraph& g, const PairList& pairs) {
    PairList ps = pairs.empty() ? all_pairs(g.n()) : pairs;
    check_pairs(ps, g.n());
    PerronKernel k = mean_transition_kernel(g);
    QuasiMetric d = limit_distance(g);
    std::vector<double> vals(ps.size());
    parallel_for(static_cast<int>(ps.size()), [&](int i) {
        vals[i] = idle_pair(k, d, ps[i].first, ps[i].second);
    });
    return make_report(CurvatureKind::idle_curc, ps, vals);
}

double asymptotic_mean_curvature(const DirectedWeightedGraph& g, int x) {
    if (x < 0 || x >= g.n()) throw Error("curvature: vertex out of range");
    PerronKernel k = mean_transition_kernel(g);
    QuasiMetric q = limit_distance(g);
    double h = 0.0;
    for (int y = 0; y < g.n(); ++y) h += k.mu(x, y) * q.d(x, y);
    return -h;
}

}  // namespace curvflow

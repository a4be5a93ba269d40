#include "curvflow/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "curvflow/lp.hpp"

namespace curvflow {

namespace {

constexpr double kMassPrune = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct FlowArc {
    int src;  // graph vertex with surplus
    int dst;  // graph vertex with deficit
    double mass;
};

// Cancel any cycles in the bipartite support so the plan is a forest
// (support size <= |supp mu| + |supp nu| - 1). At the optimum every
// support cycle has zero cost in one direction, so cost never increases.
void reduce_to_forest(std::vector<FlowArc>& arcs, const Matrix& d) {
    while (true) {
        // node ids: sources then sinks, edges = arc indices
        std::vector<int> srcs, dsts;
        for (const auto& a : arcs) {
            srcs.push_back(a.src);
            dsts.push_back(a.dst);
        }
        std::sort(srcs.begin(), srcs.end());
        srcs.erase(std::unique(srcs.begin(), srcs.end()), srcs.end());
        std::sort(dsts.begin(), dsts.end());
        dsts.erase(std::unique(dsts.begin(), dsts.end()), dsts.end());
        auto sid = [&](int v) {
            return static_cast<int>(std::lower_bound(srcs.begin(), srcs.end(), v) - srcs.begin());
        };
        auto did = [&](int v) {
            return static_cast<int>(srcs.size() +
                                    (std::lower_bound(dsts.begin(), dsts.end(), v) - dsts.begin()));
        };
        int nn = static_cast<int>(srcs.size() + dsts.size());
        std::vector<std::vector<std::pair<int, int>>> adj(nn);  // (neighbor, arc idx)
        for (size_t i = 0; i < arcs.size(); ++i) {
            int a = sid(arcs[i].src), b = did(arcs[i].dst);
            adj[a].push_back({b, static_cast<int>(i)});
            adj[b].push_back({a, static_cast<int>(i)});
        }
        // DFS for a cycle
        std::vector<int> par_edge(nn, -1), par(nn, -1), state(nn, 0);
        std::vector<int> cycle_edges;
        for (int s = 0; s < nn && cycle_edges.empty(); ++s) {
            if (state[s]) continue;
            std::vector<int> stack{s};
            state[s] = 1;
            while (!stack.empty() && cycle_edges.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (auto [u, ei] : adj[v]) {
                    if (ei == par_edge[v]) continue;
                    if (state[u]) {
                        // walk both endpoints up to their common ancestor
                        std::vector<int> pv, pu;
                        for (int w = v; w != -1; w = par[w]) pv.push_back(w);
                        std::vector<char> onpv(nn, 0);
                        for (int w : pv) onpv[w] = 1;
                        int meet = u;
                        while (!onpv[meet]) {
                            pu.push_back(meet);
                            meet = par[meet];
                        }
                        // cyclic order: v -> u, u up to meet, meet back down to v
                        cycle_edges.push_back(ei);
                        for (int w : pu) cycle_edges.push_back(par_edge[w]);
                        std::vector<int> down;
                        for (int w : pv) {
                            if (w == meet) break;
                            down.push_back(par_edge[w]);
                        }
                        cycle_edges.insert(cycle_edges.end(), down.rbegin(), down.rend());
                        break;
                    }
                    state[u] = 1;
                    par[u] = v;
                    par_edge[u] = ei;
                    stack.push_back(u);
                }
            }
        }
        if (cycle_edges.empty()) return;
        // Alternate +/- around the cycle; flip if the + direction costs more.
        double delta = 0.0;
        for (size_t k = 0; k < cycle_edges.size(); ++k)
            delta += (k % 2 == 0 ? 1.0 : -1.0) * d(arcs[cycle_edges[k]].src, arcs[cycle_edges[k]].dst);
        double sgn = delta > 0.0 ? -1.0 : 1.0;
        double theta = kInf;
        for (size_t k = 0; k < cycle_edges.size(); ++k) {
            double dir = sgn * (k % 2 == 0 ? 1.0 : -1.0);
            if (dir < 0.0) theta = std::min(theta, arcs[cycle_edges[k]].mass);
        }
        for (size_t k = 0; k < cycle_edges.size(); ++k) {
            double dir = sgn * (k % 2 == 0 ? 1.0 : -1.0);
            arcs[cycle_edges[k]].mass += dir * theta;
        }
        arcs.erase(std::remove_if(arcs.begin(), arcs.end(),
                                  [](const FlowArc& a) { return a.mass <= kMassPrune; }),
                   arcs.end());
    }
}

}  // namespace

TransportResult wasserstein1(const Vector& mu, const Vector& nu, const QuasiMetric& q) {
    // Work on a unit-diameter copy of the metric so precision (and the gap
    // tolerance) does not depend on the weight scale.
    double dscale = q.d.maxCoeff();
    if (dscale <= 0.0) dscale = 1.0;
    const Matrix d = q.d / dscale;
    int n = static_cast<int>(d.rows());
    if (mu.size() != n || nu.size() != n) throw Error("transport: measure size mismatch");
    if (std::abs(mu.sum() - 1.0) > 1e-9 || std::abs(nu.sum() - 1.0) > 1e-9)
        throw Error("transport: marginals must each sum to 1");
    for (int i = 0; i < n; ++i)
        if (mu(i) < -1e-12 || nu(i) < -1e-12)
            throw Error("transport: negative mass");

    TransportResult res;
    std::vector<double> supply, demand;
    std::vector<int> sv, tv;  // graph vertices with surplus / deficit
    for (int v = 0; v < n; ++v) {
        double a = mu(v), b = nu(v);
        double common = std::min(a, b);
        if (common > kMassPrune) res.plan.push_back({v, v, common});
        double surplus = a - b;
        if (surplus > kMassPrune) {
            sv.push_back(v);
            supply.push_back(surplus);
        } else if (surplus < -kMassPrune) {
            tv.push_back(v);
            demand.push_back(-surplus);
        }
    }
    int S = static_cast<int>(sv.size()), T = static_cast<int>(tv.size());
    res.dual_potentials = Vector::Zero(n);
    if (S == 0 || T == 0) return res;  // mu == nu up to pruning

    // Successive shortest augmenting paths with node potentials on the
    // bipartite residual graph (sources 0..S-1, sinks S..S+T-1).
    std::vector<double> rs = supply, rt = demand;
    Matrix flow = Matrix::Zero(S, T);
    std::vector<double> pot(S + T, 0.0);
    auto cost = [&](int s, int t) { return d(sv[s], tv[t]); };

    while (true) {
        bool any_supply = false, any_demand = false;
        for (int s = 0; s < S; ++s) any_supply = any_supply || rs[s] > kMassPrune;
        for (int t = 0; t < T; ++t) any_demand = any_demand || rt[t] > kMassPrune;
        if (!any_supply || !any_demand) break;  // residue is prune dust
        std::vector<double> dist(S + T, kInf);
        std::vector<int> prev(S + T, -1);
        std::vector<char> done(S + T, 0);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        for (int s = 0; s < S; ++s)
            if (rs[s] > kMassPrune) {
                dist[s] = 0.0;
                pq.push({0.0, s});
            }
        while (!pq.empty()) {
            auto [dv, v] = pq.top();
            pq.pop();
            if (done[v]) continue;
            done[v] = 1;
            if (v < S) {
                for (int t = 0; t < T; ++t) {
                    // clamp: reduced costs are nonnegative up to fp noise, and
                    // a tiny negative value could knot the prev pointers
                    double rc = std::max(0.0, cost(v, t) + pot[v] - pot[S + t]);
                    if (dv + rc < dist[S + t] - 1e-15) {
                        dist[S + t] = dv + rc;
                        prev[S + t] = v;
                        pq.push({dist[S + t], S + t});
                    }
                }
            } else {
                int t = v - S;
                for (int s = 0; s < S; ++s) {
                    if (flow(s, t) <= kMassPrune) continue;
                    double rc = std::max(0.0, -cost(s, t) + pot[v] - pot[s]);
                    if (dv + rc < dist[s] - 1e-15) {
                        dist[s] = dv + rc;
                        prev[s] = v;
                        pq.push({dist[s], s});
                    }
                }
            }
        }
        int best = -1;
        for (int t = 0; t < T; ++t)
            if (rt[t] > kMassPrune && dist[S + t] < kInf && (best < 0 || dist[S + t] < dist[best]))
                best = S + t;
        if (best < 0) throw Error("transport: internal augmentation failure");
        int root = best;
        while (prev[root] != -1) root = prev[root];
        double theta = std::min(rs[root], rt[best - S]);
        for (int v = best; prev[v] != -1; v = prev[v])
            if (v < S) theta = std::min(theta, flow(v, prev[v] - S));
        for (int v = best; prev[v] != -1; v = prev[v]) {
            if (v >= S)
                flow(prev[v], v - S) += theta;
            else
                flow(v, prev[v] - S) -= theta;
        }
        rs[root] -= theta;
        rt[best - S] -= theta;
        // Johnson-style update keeps every residual reduced cost nonnegative
        // even for nodes the search did not reach.
        double dcap = dist[best];
        for (int v = 0; v < S + T; ++v) pot[v] += std::min(dist[v], dcap);
    }

    std::vector<FlowArc> arcs;
    for (int s = 0; s < S; ++s)
        for (int t = 0; t < T; ++t)
            if (flow(s, t) > kMassPrune) arcs.push_back({sv[s], tv[t], flow(s, t)});
    reduce_to_forest(arcs, d);

    double cost_total = 0.0;
    for (const auto& a : arcs) {
        cost_total += a.mass * d(a.src, a.dst);
        res.plan.push_back({a.src, a.dst, a.mass});
    }
    std::sort(res.plan.begin(), res.plan.end(), [](const PlanEntry& a, const PlanEntry& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    // Kantorovich potential: inf-convolution of the source potentials is
    // automatically 1-Lipschitz and tight on flow arcs.
    Vector f(n);
    for (int v = 0; v < n; ++v) {
        double best = kInf;
        for (int s = 0; s < S; ++s) best = std::min(best, pot[s] + d(sv[s], v));
        f(v) = best;
    }
    double shift = f(0);
    for (int v = 0; v < n; ++v) f(v) -= shift;
    double unit_gap = std::abs(cost_total - f.dot(nu - mu));
    if (unit_gap > 1e-7) throw Error("transport: duality gap above tolerance");

    res.cost = cost_total * dscale;
    res.dual_potentials = f * dscale;
    res.duality_gap = unit_gap * dscale;
    return res;
}

double kr_dual_value(const Vector& mu, const Vector& nu, const QuasiMetric& q) {
    const Matrix& d = q.d;
    int n = static_cast<int>(d.rows());
    if (mu.size() != n || nu.size() != n) throw Error("transport: measure size mismatch");
    if (n == 1) return 0.0;

    // Anchor f(0) = 0 and substitute g(v) = f(v) + d(v,0) >= 0 so the
    // Lipschitz constraints become a nonnegative-rhs system.
    int nv = n - 1;
    std::vector<std::pair<int, int>> rows;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (x != y && y != 0) rows.push_back({x, y});
    Matrix A = Matrix::Zero(static_cast<int>(rows.size()), nv);
    Vector b(static_cast<int>(rows.size()));
    for (size_t r = 0; r < rows.size(); ++r) {
        auto [x, y] = rows[r];
        A(r, y - 1) = 1.0;
        if (x != 0) {
            A(r, x - 1) = -1.0;
            b(r) = d(x, y) + d(y, 0) - d(x, 0);
        } else {
            b(r) = d(0, y) + d(y, 0);
        }
    }
    Vector c(nv);
    double offset = 0.0;
    for (int v = 1; v < n; ++v) {
        c(v - 1) = nu(v) - mu(v);
        offset -= d(v, 0) * (nu(v) - mu(v));
    }
    LpResult lp = simplex_solve(c, A, b);
    if (lp.status != LpStatus::optimal) throw Error("transport: dual LP failed");
    return lp.value + offset;
}

}  // namespace curvflow

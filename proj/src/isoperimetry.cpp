#include "curvflow/isoperimetry.hpp"

#include <algorithm>
#include <limits>

#include <json.hpp>

#include "curvflow/curvature.hpp"
#include "curvflow/metric.hpp"
#include "curvflow/transport.hpp"

namespace curvflow {

using json = nlohmann::json;

double boundary_measure(const PerronKernel& k, const std::vector<int>& omega) {
    int n = static_cast<int>(k.mu.rows());
    if (omega.empty() || static_cast<int>(omega.size()) >= n)
        throw Error("isoperimetry: omega must be a nonempty proper subset");
    std::vector<char> in(n, 0);
    for (int v : omega) {
        if (v < 0 || v >= n) throw Error("isoperimetry: omega vertex out of range");
        in[v] = 1;
    }
    double out = 0.0;
    for (int y : omega)
        for (int z = 0; z < n; ++z)
            if (!in[z]) out += k.m(y) * k.mu(y, z);
    return out;
}

IsoperimetryResult dirichlet_constant(const DirectedWeightedGraph& g, int x, double R) {
    if (x < 0 || x >= g.n()) throw Error("isoperimetry: base vertex out of range");
    PerronKernel k = mean_transition_kernel(g);
    QuasiMetric q = limit_distance(g);
    int n = g.n();

    IsoperimetryResult res;
    res.x = x;
    res.R = R;
    for (int y = 0; y < n; ++y)
        if (q.d(x, y) >= R) res.region.push_back(y);
    if (res.region.empty()) throw Error("isoperimetry: region E_R(x) is empty");
    if (res.region.size() > 20)
        throw Error("isoperimetry: region too large for brute force (|E_R| > 20)");

    int rsize = static_cast<int>(res.region.size());
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_set;
    for (unsigned long mask = 1; mask < (1ul << rsize); ++mask) {
        std::vector<int> omega;
        double m_omega = 0.0;
        for (int i = 0; i < rsize; ++i)
            if (mask & (1ul << i)) {
                omega.push_back(res.region[i]);
                m_omega += k.m(res.region[i]);
            }
        if (static_cast<int>(omega.size()) >= n) continue;  // boundary needs a complement
        double ratio = boundary_measure(k, omega) / m_omega;
        bool better = ratio < best - 1e-12;
        bool tie = !better && ratio <= best + 1e-12 &&
                   std::lexicographical_compare(omega.begin(), omega.end(), best_set.begin(),
                                                best_set.end());
        if (better || tie) {
            best = std::min(best, ratio);
            best_set = omega;
        }
    }
    res.I = best;
    res.argmin_subset = best_set;

    res.K = std::numeric_limits<double>::infinity();
    for (int y = 0; y < n; ++y)
        if (y != x) res.K = std::min(res.K, curc_pair(k, q, x, y));
    double h = 0.0;
    for (int y = 0; y < n; ++y) h += k.mu(x, y) * q.d(x, y);
    res.Lambda = -h;
    res.D = q.d.row(x).maxCoeff();
    res.bound = (res.K * R + res.Lambda) / res.D;
    res.bound_active = res.K * R + res.Lambda > 0.0;
    return res;
}

std::string IsoperimetryResult::to_json() const {
    json j;
    j["x"] = x;
    j["R"] = round_sig12(R);
    j["region"] = region;
    j["I"] = round_sig12(I);
    j["argmin_subset"] = argmin_subset;
    j["bound"] = round_sig12(bound);
    j["bound_active"] = bound_active;
    j["K"] = round_sig12(K);
    j["Lambda"] = round_sig12(Lambda);
    j["D"] = round_sig12(D);
    return j.dump();
}

}  // namespace curvflow

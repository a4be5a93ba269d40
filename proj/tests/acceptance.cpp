// End-to-end acceptance gate: one line per criterion, nonzero exit on failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "curvflow/curvature.hpp"
#include "curvflow/engine.hpp"
#include "curvflow/flow_analysis.hpp"
#include "curvflow/isoperimetry.hpp"
#include "curvflow/metric.hpp"
#include "curvflow/spectral.hpp"
#include "curvflow/transport.hpp"
#include "curvflow/wl.hpp"
#include "support.hpp"

using namespace curvflow;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

void unity() {
    std::mt19937 rng(2001);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        auto g = random_connected_unweighted(rng, 4 + t % 7);
        auto a = curc(g);
        auto b = ollivier(g);
        for (size_t i = 0; i < a.values.size(); ++i)
            worst = std::max(worst, std::abs(a.values[i].kappa - b.values[i].kappa));
    }
    report(1, "unity of curc and ollivier on 50 unweighted undirected graphs", worst <= 1e-7,
           "max gap " + fmt(worst));
}

void scale_invariance() {
    std::mt19937 rng(2003);
    double worst = 0.0;
    for (int t = 0; t < 30; ++t) {
        auto g = random_strong_digraph(rng, 4 + t % 7);
        auto base = curc(g);
        for (double lambda : {1e-3, 0.7, 13.0, 1e3}) {
            auto scaled = curc(g.scaled(lambda));
            for (size_t i = 0; i < base.values.size(); ++i)
                worst = std::max(worst,
                                 std::abs(base.values[i].kappa - scaled.values[i].kappa));
        }
    }
    report(2, "scale invariance across lambda in {1e-3, 0.7, 13, 1e3} on 30 digraphs",
           worst <= 1e-7, "max gap " + fmt(worst));
}

void kr_duality() {
    std::mt19937 rng(2005);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        auto g = random_strong_digraph(rng, 3 + t % 8);
        QuasiMetric d = limit_distance(g);
        Vector mu = random_measure(rng, g.n());
        Vector nu = random_measure(rng, g.n());
        double primal = wasserstein1(mu, nu, d).cost;
        double dual = kr_dual_value(mu, nu, d);
        worst = std::max(worst, std::abs(primal - dual));
    }
    report(3, "primal/dual W1 agreement on 200 random instances", worst <= 1e-7,
           "max gap " + fmt(worst));
}

void lower_bounds() {
    std::mt19937 rng(2007);
    double worst_violation = 0.0;
    for (int t = 0; t < 50; ++t) {
        auto g = random_strong_digraph(rng, 3 + t % 6);
        auto b = lb1(g);
        auto e = curc(g);
        for (size_t i = 0; i < b.values.size(); ++i)
            worst_violation = std::max(worst_violation, b.values[i].kappa - e.values[i].kappa);
    }
    for (int t = 0; t < 50; ++t) {
        auto g = random_symmetric_support(rng, 4 + t % 5);
        auto b = lb2(g);
        auto k = mean_transition_kernel(g);
        QuasiMetric d = hop_distance(g);
        for (const PairValue& v : b.values)
            worst_violation = std::max(worst_violation, v.kappa - curc_pair(k, d, v.x, v.y));
    }
    double exact_err = 0.0;
    for (const PairValue& v : lb2(complete_graph(3)).values)
        exact_err = std::max(exact_err, std::abs(v.kappa - 0.5));
    for (const PairValue& v : lb2(cycle_graph(4)).values)
        exact_err = std::max(exact_err, std::abs(v.kappa));
    report(4, "lb1/lb2 soundness on 50+50 graphs, lb2 exact on K3 and C4",
           worst_violation <= 1e-7 && exact_err <= 1e-9,
           "max violation " + fmt(worst_violation) + ", exact err " + fmt(exact_err));
}

void idle_ordering() {
    std::mt19937 rng(2011);
    double worst = 0.0;
    for (int t = 0; t < 30; ++t) {
        auto g = random_strong_digraph(rng, 3 + t % 6);
        auto idle = idle_curc(g);
        auto exact = curc(g);
        for (size_t i = 0; i < idle.values.size(); ++i)
            worst = std::max(worst, exact.values[i].kappa - idle.values[i].kappa);
    }
    report(5, "idle curvature dominates curc on 30 digraphs", worst <= 1e-7,
           "max violation " + fmt(worst));
}

void isoperimetry_bound() {
    std::mt19937 rng(2013);
    double worst = 0.0;
    int active = 0;
    for (int t = 0; t < 100; ++t) {
        auto g = random_strong_digraph(rng, 4 + t % 7);
        QuasiMetric q = limit_distance(g);
        for (int x = 0; x < g.n(); ++x) {
            std::vector<double> ds;
            for (int y = 0; y < g.n(); ++y)
                if (y != x) ds.push_back(q.d(x, y));
            std::sort(ds.begin(), ds.end());
            for (double frac : {0.25, 0.5, 0.75, 1.0}) {
                double R = ds[static_cast<size_t>(frac * (ds.size() - 1))];
                auto r = dirichlet_constant(g, x, R);
                if (!r.bound_active) continue;
                ++active;
                worst = std::max(worst, r.bound - r.I);
            }
        }
    }
    report(6, "isoperimetric lower bound holds on 100 digraphs over the radius quantile set",
           worst <= 1e-9,
           std::to_string(active) + " active instances, max violation " + fmt(worst));
}

void expressiveness() {
    auto c6 = cycle_graph(6);
    auto tt = two_triangles();
    RefineConfig raw_cfg;
    raw_cfg.g1_feats = {raw_adjacency(c6)};
    raw_cfg.g2_feats = {raw_adjacency(tt)};
    bool raw_blind = !distinguishes(c6, tt, raw_cfg).distinguishable;
    RefineConfig rich_cfg;
    rich_cfg.g1_feats = {rrwp(c6, 4)};
    rich_cfg.g2_feats = {rrwp(tt, 4)};
    auto verdict = distinguishes(c6, tt, rich_cfg);
    bool rich_sees = verdict.distinguishable && verdict.witness_round == 1;

    bool prop2 = true;
    std::mt19937 rng(2017);
    for (int t = 0; t < 30 && prop2; ++t) {
        auto g = random_connected_unweighted(rng, 4 + t % 9);
        auto a = rrwp(g, 3);
        auto b = spd(g, 8);
        auto dyn = dynamic_refine(g, {a, b});
        auto stat = static_refine(g, concat_features(a, b));
        prop2 = partition_ids(dyn.back()) == partition_ids(stat.back());
    }
    report(7, "refinement expressiveness: C6 vs 2xC3 and dynamic/static equivalence",
           raw_blind && rich_sees && prop2);
}

void casting() {
    std::mt19937 rng(2019);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    bool ok = true;
    for (Preset p : {Preset::gcn, Preset::sage_gcn, Preset::gin, Preset::gated}) {
        for (int t = 0; t < 20; ++t) {
            auto g = random_connected_unweighted(rng, 4 + t % 7);
            Matrix h(g.n(), 3);
            for (int i = 0; i < g.n(); ++i)
                for (int c = 0; c < 3; ++c) h(i, c) = u(rng);
            ok = ok && cast_check(p, g, {h});
        }
    }
    report(8, "engine presets match direct-formula oracles on 20 graphs each", ok);
}

fs::path scratch() {
    fs::path p = fs::temp_directory_path() / "curvflow_acceptance";
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

std::string write_series(const std::string& tag, const std::vector<Matrix>& mats) {
    fs::path dir = scratch() / tag;
    fs::create_directories(dir);
    std::string entries;
    for (size_t i = 0; i < mats.size(); ++i) {
        std::string fname = "epoch_" + std::to_string(i) + ".csv";
        write_file(dir / fname, matrix_to_csv(mats[i]));
        if (!entries.empty()) entries += ",";
        entries += "{\"epoch\":" + std::to_string(i) + ",\"file\":\"" + fname + "\"}";
    }
    fs::path mpath = dir / "manifest.json";
    write_file(mpath, "{\"graph_name\":\"" + tag + "\",\"threshold\":1e-9,\"epochs\":[" +
                          entries + "]}");
    return mpath.string();
}

void pipeline() {
    std::vector<Matrix> decay;
    for (int t = 0; t < 5; ++t) {
        Matrix m = Matrix::Zero(6, 6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                if (i == j) continue;
                bool adj = (j == (i + 1) % 6) || (i == (j + 1) % 6);
                m(i, j) = adj ? 1.0 : std::pow(10.0, -t);
            }
        decay.push_back(m);
    }
    auto rd = trend(load_epoch_series(write_series("decay", decay)));
    bool decreasing = true;
    for (size_t i = 1; i < rd.rows.size(); ++i)
        decreasing = decreasing && rd.rows[i].quantiles.at(50) < rd.rows[i - 1].quantiles.at(50);
    bool decay_ok = decreasing && rd.decurve_score > 0.0;

    Matrix k4 = complete_graph(4).dense();
    auto rc = trend(load_epoch_series(write_series("const", {k4, k4, k4})));
    bool const_ok = rc.decurve_score == 0.0;
    report(9, "decaying series decurves and constant series scores zero",
           decay_ok && const_ok,
           "decay score " + fmt(rd.decurve_score) + ", const score " + fmt(rc.decurve_score));
}

std::string run_cli(const std::string& args, int& code) {
    fs::path out = scratch() / "cli_out.txt";
    std::string cmd = std::string(CURVFLOW_CLI_PATH) + " " + args + " >" + out.string() +
                      " 2>/dev/null";
    int status = std::system(cmd.c_str());
    code = status < 0 ? -1 : (status >> 8) & 0xff;
    std::ifstream f(out);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void determinism() {
    std::mt19937 rng(2027);
    fs::path dir = scratch();
    std::vector<std::string> graphs;
    for (int t = 0; t < 3; ++t) {
        auto g = random_strong_digraph(rng, 6 + t);
        fs::path p = dir / ("det_" + std::to_string(t) + ".json");
        write_file(p, graph_to_json(g));
        graphs.push_back(p.string());
    }
    fs::path sym = dir / "det_sym.json";
    write_file(sym, graph_to_json(random_connected_unweighted(rng, 7)));
    fs::path state = dir / "det_state.csv";
    {
        std::ostringstream ss;
        for (int i = 0; i < 7; ++i) ss << (i % 3) - 1.0 << "\n";
        write_file(state, ss.str());
    }
    std::string manifest =
        write_series("det_series", {complete_graph(4).dense(), cycle_graph(4).dense()});

    std::vector<std::string> commands;
    for (const std::string& g : graphs) {
        commands.push_back("curvature --kind curc " + g);
        commands.push_back("curvature --kind lb1 --csv " + g);
        commands.push_back("curvature --kind idle " + g);
        commands.push_back("perron --export mu " + g);
        commands.push_back("distance --mode limit --format csv " + g);
        commands.push_back("cheeger --x 0 --R 1 " + g);
    }
    commands.push_back("curvature --kind ollivier " + sym.string());
    commands.push_back("curvature --kind lb2 " + sym.string());
    commands.push_back("wl --feature rrwp:4 " + sym.string());
    commands.push_back("wl --cycle rrwp:3,spd:8 " + sym.string());
    commands.push_back("engine --preset gcn --state " + state.string() + " " + sym.string());
    commands.push_back("engine --preset gated --state " + state.string() + " " + sym.string());
    commands.push_back("analyze --manifest " + manifest);
    commands.push_back("analyze --csv --manifest " + manifest);

    bool ok = true;
    for (const std::string& cmd : commands) {
        int c1 = 0, c2 = 0;
        std::string a = run_cli(cmd, c1);
        std::string b = run_cli(cmd, c2);
        if (c1 != 0 || c2 != 0 || a.empty() || a != b) {
            ok = false;
            break;
        }
    }
    report(10, "every subcommand is byte-identical across consecutive runs", ok);
}

}  // namespace

int main() {
    unity();
    scale_invariance();
    kr_duality();
    lower_bounds();
    idle_ordering();
    isoperimetry_bound();
    expressiveness();
    casting();
    pipeline();
    determinism();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvflow/curvature.hpp"
#include "curvflow/engine.hpp"
#include "curvflow/flow_analysis.hpp"
#include "curvflow/graph.hpp"
#include "curvflow/isoperimetry.hpp"
#include "curvflow/metric.hpp"
#include "curvflow/spectral.hpp"
#include "curvflow/transport.hpp"
#include "curvflow/wl.hpp"

namespace {

using curvflow::Matrix;
using curvflow::Vector;
using json = nlohmann::json;

void emit(const std::string& text, const std::string& out_path) {
    std::string body = text;
    if (body.empty() || body.back() != '\n') body += '\n';
    if (out_path.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(out_path);
        if (!f) throw curvflow::Error("cli: cannot write " + out_path);
        f << body;
    }
}

curvflow::PairList parse_pairs(const std::string& text) {
    curvflow::PairList pairs;
    if (text.empty()) return pairs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        auto comma = item.find(',');
        if (comma == std::string::npos)
            throw curvflow::Error("cli: --pairs expects \"x,y;x,y;...\"");
        pairs.push_back({std::stoi(item.substr(0, comma)), std::stoi(item.substr(comma + 1))});
    }
    return pairs;
}

curvflow::AdjacencyFeatures parse_feature(const curvflow::DirectedWeightedGraph& g,
                                          const std::string& spec) {
    if (spec == "adj") return curvflow::raw_adjacency(g);
    if (spec == "sym_norm") return curvflow::sym_norm_feature(g);
    if (spec == "row_norm") return curvflow::row_norm_feature(g);
    if (spec.rfind("rrwp:", 0) == 0) return curvflow::rrwp(g, std::stoi(spec.substr(5)));
    if (spec.rfind("spd:", 0) == 0) return curvflow::spd(g, std::stoi(spec.substr(4)));
    throw curvflow::Error("cli: unknown feature \"" + spec + "\"");
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

json matrix_rows(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(curvflow::round_sig12(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

int run(int argc, char** argv) {
    CLI::App app{"curvflow: curvature and propagation analysis for directed weighted graphs"};
    app.require_subcommand(1);

    std::string graph_path, out_path;

    auto* curvature = app.add_subcommand("curvature", "Per-pair curvature report");
    std::string kind = "curc", pairs_text;
    double eps = 0.0;
    bool as_csv = false;
    curvature->add_option("--kind", kind, "curc|eps|idle|ollivier|forman|lb1|lb2")
        ->check(CLI::IsMember({"curc", "eps", "idle", "ollivier", "forman", "lb1", "lb2"}));
    curvature->add_option("--eps", eps, "mask parameter for --kind eps");
    curvature->add_option("--pairs", pairs_text, "ordered pairs \"x,y;x,y\" (default: all)");
    curvature->add_flag("--csv", as_csv, "emit CSV instead of JSON");
    curvature->add_option("--out", out_path, "output file (default: stdout)");
    curvature->add_option("graph", graph_path, "input graph (.json or edge list)")->required();

    auto* perron = app.add_subcommand("perron", "Perron measure and mean transition kernel");
    std::string export_what = "m", format = "json";
    perron->add_option("--export", export_what, "m|W|mu")->check(CLI::IsMember({"m", "W", "mu"}));
    perron->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    perron->add_option("--out", out_path, "output file (default: stdout)");
    perron->add_option("graph", graph_path, "input graph")->required();

    auto* distance = app.add_subcommand("distance", "All-pairs quasi-metric");
    std::string mode = "limit";
    distance->add_option("--mode", mode, "limit|eps|hop")
        ->check(CLI::IsMember({"limit", "eps", "hop"}));
    distance->add_option("--eps", eps, "mask parameter for --mode eps");
    distance->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    distance->add_option("--out", out_path, "output file (default: stdout)");
    distance->add_option("graph", graph_path, "input graph")->required();

    auto* cheeger = app.add_subcommand("cheeger", "Dirichlet isoperimetric constant");
    int base_x = 0;
    double radius = 1.0;
    cheeger->add_option("--x", base_x, "base vertex")->required();
    cheeger->add_option("--R", radius, "radius defining the region")->required();
    cheeger->add_option("--out", out_path, "output file (default: stdout)");
    cheeger->add_option("graph", graph_path, "input graph")->required();

    auto* wl = app.add_subcommand("wl", "Color refinement");
    std::string feature = "adj", cycle_text, pair_path;
    wl->add_option("--feature", feature, "rrwp:K|spd:C|adj|sym_norm|row_norm");
    wl->add_option("--cycle", cycle_text, "comma-separated feature cycle (dynamic refinement)");
    wl->add_option("--pair", pair_path, "second graph: emit a distinguishability verdict");
    wl->add_option("--out", out_path, "output file (default: stdout)");
    wl->add_option("graph", graph_path, "input graph")->required();

    auto* engine = app.add_subcommand("engine", "One GPNN propagation layer");
    std::string preset_name, config_path, state_path;
    engine->add_option("--preset", preset_name, "gcn|sage_gcn|gin|gated");
    engine->add_option("--config", config_path, "LayerConfig JSON file");
    engine->add_option("--state", state_path, "node state matrix (CSV or matrix JSON)");
    engine->add_option("--out", out_path, "output file (default: stdout)");
    engine->add_option("graph", graph_path, "input graph")->required();

    auto* analyze = app.add_subcommand("analyze", "Decurve-flow trend over epoch series");
    std::string manifest_path;
    analyze->add_option("--manifest", manifest_path, "epoch manifest JSON")->required();
    analyze->add_flag("--csv", as_csv, "emit CSV instead of JSON");
    analyze->add_option("--out", out_path, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (curvature->parsed()) {
        auto g = curvflow::load_graph_auto(graph_path);
        auto pairs = parse_pairs(pairs_text);
        curvflow::CurvatureReport report;
        if (kind == "curc") {
            report = curvflow::curc(g, pairs);
        } else if (kind == "eps") {
            report = curvflow::curc_eps(g, eps, pairs);
        } else if (kind == "idle") {
            report = curvflow::idle_curc(g, pairs);
        } else if (kind == "ollivier") {
            report = curvflow::ollivier(g, pairs);
        } else if (kind == "forman") {
            report = curvflow::forman_report(g, pairs);
        } else if (kind == "lb1") {
            report = curvflow::lb1(g, pairs);
        } else {
            report = curvflow::lb2(g, pairs);
        }
        emit(as_csv ? report.to_csv() : report.to_json(), out_path);
    } else if (perron->parsed()) {
        auto g = curvflow::load_graph_auto(graph_path);
        auto k = curvflow::mean_transition_kernel(g);
        if (format == "csv") {
            Matrix m;
            if (export_what == "m")
                m = k.m.transpose();
            else if (export_what == "W")
                m = k.W;
            else
                m = k.mu;
            emit(curvflow::matrix_to_csv(m), out_path);
        } else {
            json j;
            j["residual"] = curvflow::round_sig12(k.residual);
            json mv = json::array();
            for (Eigen::Index i = 0; i < k.m.size(); ++i)
                mv.push_back(curvflow::round_sig12(k.m(i)));
            j["m"] = std::move(mv);
            if (export_what == "W") j["W"] = matrix_rows(k.W);
            if (export_what == "mu") j["mu"] = matrix_rows(k.mu);
            emit(j.dump(), out_path);
        }
    } else if (distance->parsed()) {
        auto g = curvflow::load_graph_auto(graph_path);
        curvflow::QuasiMetric q;
        if (mode == "limit")
            q = curvflow::limit_distance(g);
        else if (mode == "eps")
            q = curvflow::epsilon_distance(g, eps);
        else
            q = curvflow::hop_distance(g);
        emit(format == "csv" ? curvflow::matrix_to_csv(q.d) : curvflow::matrix_to_json(q.d),
             out_path);
    } else if (cheeger->parsed()) {
        auto g = curvflow::load_graph_auto(graph_path);
        emit(curvflow::dirichlet_constant(g, base_x, radius).to_json(), out_path);
    } else if (wl->parsed()) {
        auto g = curvflow::load_graph_auto(graph_path);
        std::vector<std::string> specs =
            cycle_text.empty() ? std::vector<std::string>{feature} : split(cycle_text, ',');
        if (!pair_path.empty()) {
            auto g2 = curvflow::load_graph_auto(pair_path);
            curvflow::RefineConfig cfg;
            for (const auto& s : specs) {
                cfg.g1_feats.push_back(parse_feature(g, s));
                cfg.g2_feats.push_back(parse_feature(g2, s));
            }
            auto verdict = curvflow::distinguishes(g, g2, cfg);
            json j;
            j["distinguishable"] = verdict.distinguishable;
            j["witness_round"] = verdict.witness_round;
            emit(j.dump(), out_path);
        } else {
            std::vector<curvflow::AdjacencyFeatures> feats;
            for (const auto& s : specs) feats.push_back(parse_feature(g, s));
            auto hist = curvflow::dynamic_refine(g, feats);
            json rounds = json::array();
            for (const auto& cm : hist)
                rounds.push_back({{"round", cm.round},
                                  {"partition", curvflow::partition_ids(cm)}});
            json j;
            j["rounds"] = std::move(rounds);
            emit(j.dump(), out_path);
        }
    } else if (engine->parsed()) {
        auto g = curvflow::load_graph_auto(graph_path);
        curvflow::NodeState state;
        if (!state_path.empty())
            state.h = curvflow::load_dense_matrix(state_path);
        else
            state.h = Matrix::Ones(g.n(), 1);
        curvflow::LayerConfig cfg;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw curvflow::Error("cli: cannot open " + config_path);
            std::stringstream buf;
            buf << f.rdbuf();
            cfg = curvflow::layer_config_from_json(buf.str());
        } else if (!preset_name.empty()) {
            cfg = curvflow::make_preset(curvflow::preset_from_name(preset_name),
                                        static_cast<int>(state.h.cols()));
        } else {
            throw curvflow::Error("cli: engine needs --preset or --config");
        }
        json heads = json::array();
        for (int head = 0; head < static_cast<int>(cfg.heads.size()); ++head)
            heads.push_back(matrix_rows(curvflow::propagation_matrix(g, cfg, state, head)));
        curvflow::NodeState out = curvflow::layer_forward(g, cfg, state);
        json j;
        j["omega"] = std::move(heads);
        j["h_out"] = matrix_rows(out.h);
        emit(j.dump(), out_path);
    } else if (analyze->parsed()) {
        auto series = curvflow::load_epoch_series(manifest_path);
        auto report = curvflow::trend(series);
        emit(as_csv ? report.to_csv() : report.to_json(), out_path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const curvflow::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

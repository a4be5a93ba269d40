#include "curvflow/flow_analysis.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "curvflow/curvature.hpp"

namespace curvflow {

namespace {

using json = nlohmann::json;

DirectedWeightedGraph epoch_graph(const EpochSeries& s, size_t i) {
    try {
        DirectedWeightedGraph g = from_dense(s.epochs[i].second, s.threshold, s.graph_name);
        assert_strongly_connected(g);
        return g;
    } catch (const Error& e) {
        throw Error("flow_analysis: epoch " + std::to_string(s.epochs[i].first) + ": " +
                    e.what());
    }
}

}  // namespace

EpochSeries load_epoch_series(const std::string& manifest_path) {
    std::ifstream f(manifest_path);
    if (!f) throw ParseError("flow_analysis: cannot open " + manifest_path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ParseError("flow_analysis: cannot parse " + manifest_path + ": " + e.what());
    }
    EpochSeries s;
    s.graph_name = j.value("graph_name", std::string());
    s.threshold = j.value("threshold", 0.0);
    auto base = std::filesystem::path(manifest_path).parent_path();
    for (const auto& entry : j.at("epochs")) {
        int epoch = entry.at("epoch").get<int>();
        std::filesystem::path file = entry.at("file").get<std::string>();
        if (file.is_relative()) file = base / file;
        s.epochs.push_back({epoch, load_dense_matrix(file.string())});
    }
    if (s.epochs.empty()) throw Error("flow_analysis: manifest lists no epochs");
    std::sort(s.epochs.begin(), s.epochs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Eigen::Index n = s.epochs.front().second.rows();
    for (const auto& [epoch, m] : s.epochs) {
        if (m.rows() != n)
            throw Error("flow_analysis: epoch " + std::to_string(epoch) +
                        " matrix dimension differs from the rest of the series");
    }
    for (size_t i = 1; i < s.epochs.size(); ++i)
        if (s.epochs[i].first == s.epochs[i - 1].first)
            throw Error("flow_analysis: duplicate epoch index " +
                        std::to_string(s.epochs[i].first));
    for (size_t i = 0; i < s.epochs.size(); ++i) epoch_graph(s, i);  // validate early
    return s;
}

TrendReport trend(const EpochSeries& s) {
    if (s.epochs.empty()) throw Error("flow_analysis: empty series");
    TrendReport report;
    for (size_t i = 0; i < s.epochs.size(); ++i) {
        DirectedWeightedGraph g = epoch_graph(s, i);
        CurvatureReport cr;
        try {
            cr = curc(g);
        } catch (const Error& e) {
            throw Error("flow_analysis: epoch " + std::to_string(s.epochs[i].first) + ": " +
                        e.what());
        }
        TrendRow row;
        row.epoch = s.epochs[i].first;
        row.min_kappa = cr.summary.min;
        row.mean_kappa = cr.summary.mean;
        row.quantiles = cr.summary.quantiles;
        row.histogram.assign(20, 0);
        for (const PairValue& v : cr.values) {
            double clamped = std::clamp(v.kappa, -3.0, 1.0);
            int bin = static_cast<int>((clamped + 3.0) / 4.0 * 20.0);
            row.histogram[std::min(bin, 19)] += 1;
        }
        report.rows.push_back(std::move(row));
    }
    report.decurve_score =
        report.rows.front().quantiles.at(50) - report.rows.back().quantiles.at(50);
    return report;
}

Matrix curvature_map(const EpochSeries& s, int epoch) {
    for (size_t i = 0; i < s.epochs.size(); ++i) {
        if (s.epochs[i].first != epoch) continue;
        DirectedWeightedGraph g = epoch_graph(s, i);
        CurvatureReport cr = curc(g);
        Matrix map = Matrix::Zero(g.n(), g.n());
        for (const PairValue& v : cr.values) map(v.x, v.y) = v.kappa;
        return map;
    }
    throw Error("flow_analysis: epoch " + std::to_string(epoch) + " not in series");
}

std::string TrendReport::to_json() const {
    json j;
    json rows_json = json::array();
    for (const TrendRow& r : rows) {
        json q;
        for (auto [k, v] : r.quantiles) q["q" + std::to_string(k)] = round_sig12(v);
        rows_json.push_back({{"epoch", r.epoch},
                             {"min", round_sig12(r.min_kappa)},
                             {"mean", round_sig12(r.mean_kappa)},
                             {"quantiles", std::move(q)},
                             {"histogram", r.histogram}});
    }
    j["rows"] = std::move(rows_json);
    j["decurve_score"] = round_sig12(decurve_score);
    return j.dump();
}

std::string TrendReport::to_csv() const {
    std::string out = "epoch,min,mean,q5,q25,q50,q75,q95";
    for (int b = 0; b < 20; ++b) out += ",bin" + std::to_string(b);
    out += '\n';
    for (const TrendRow& r : rows) {
        out += std::to_string(r.epoch) + "," + format_sig12(r.min_kappa) + "," +
               format_sig12(r.mean_kappa);
        for (int q : {5, 25, 50, 75, 95}) out += "," + format_sig12(r.quantiles.at(q));
        for (int b : r.histogram) out += "," + std::to_string(b);
        out += '\n';
    }
    return out;
}

}  // namespace curvflow

#include "curvflow/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace curvflow {

using json = nlohmann::json;

DirectedWeightedGraph::DirectedWeightedGraph(int n, std::vector<Edge> edges, std::string name)
    : n_(n), edges_(std::move(edges)), name_(std::move(name)) {
    if (n_ < 1) throw Error("graph_core: vertex count must be >= 1");

    std::vector<Edge> kept;
    kept.reserve(edges_.size());
    for (const Edge& e : edges_) {
        if (e.src < 0 || e.src >= n_ || e.dst < 0 || e.dst >= n_)
            throw Error("graph_core: vertex index out of range: (" + std::to_string(e.src) +
                        "," + std::to_string(e.dst) + ")");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw Error("graph_core: nonpositive weight on edge (" + std::to_string(e.src) +
                        "," + std::to_string(e.dst) + ")");
        if (e.src == e.dst) {
            ++meta_.self_loops_dropped;
            continue;
        }
        kept.push_back(e);
    }
    edges_ = std::move(kept);
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    for (size_t i = 1; i < edges_.size(); ++i)
        if (edges_[i].src == edges_[i - 1].src && edges_[i].dst == edges_[i - 1].dst)
            throw Error("graph_core: duplicate edge (" + std::to_string(edges_[i].src) + "," +
                        std::to_string(edges_[i].dst) + ")");

    w_ = Matrix::Zero(n_, n_);
    out_.assign(n_, {});
    in_.assign(n_, {});
    for (const Edge& e : edges_) {
        w_(e.src, e.dst) = e.weight;
        out_[e.src].push_back(e.dst);
        in_[e.dst].push_back(e.src);
    }
    for (auto& v : in_) std::sort(v.begin(), v.end());
}

double DirectedWeightedGraph::weight(int src, int dst) const { return w_(src, dst); }

Matrix DirectedWeightedGraph::dense() const { return w_; }

DirectedWeightedGraph DirectedWeightedGraph::scaled(double lambda) const {
    if (!(lambda > 0.0)) throw Error("graph_core: scale factor must be positive");
    std::vector<Edge> es = edges_;
    for (Edge& e : es) e.weight *= lambda;
    return DirectedWeightedGraph(n_, std::move(es), name_);
}

bool DirectedWeightedGraph::symmetric_support() const {
    for (const Edge& e : edges_)
        if (w_(e.dst, e.src) == 0.0) return false;
    return true;
}

bool DirectedWeightedGraph::unweighted_undirected() const {
    if (!symmetric_support()) return false;
    for (const Edge& e : edges_)
        if (e.weight != 1.0) return false;
    return true;
}

static DirectedWeightedGraph parse_graph_json(const std::string& text, const std::string& where) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError("graph_core: cannot parse " + where + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw ParseError("graph_core: " + where + " missing \"n\" or \"edges\"");
    int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& row : j.at("edges")) {
        if (!row.is_array() || row.size() != 3)
            throw ParseError("graph_core: " + where + ": edge rows must be [src,dst,weight]");
        edges.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
    }
    std::string name = j.value("name", std::string());
    return DirectedWeightedGraph(n, std::move(edges), name);
}

static DirectedWeightedGraph parse_edgelist(std::istream& in, const std::string& where) {
    std::vector<Edge> edges;
    int max_idx = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        int s, d;
        double w;
        if (!(ss >> s)) continue;  // blank or comment-only line
        if (!(ss >> d >> w))
            throw ParseError("graph_core: " + where + " line " + std::to_string(lineno) +
                             ": expected \"src dst weight\"");
        edges.push_back({s, d, w});
        max_idx = std::max({max_idx, s, d});
    }
    if (edges.empty()) throw ParseError("graph_core: " + where + " has no edges");
    return DirectedWeightedGraph(max_idx + 1, std::move(edges));
}

DirectedWeightedGraph load_graph(const std::string& path, GraphFormat format) {
    std::ifstream f(path);
    if (!f) throw ParseError("graph_core: cannot open " + path);
    if (format == GraphFormat::json) {
        std::stringstream buf;
        buf << f.rdbuf();
        return parse_graph_json(buf.str(), path);
    }
    return parse_edgelist(f, path);
}

DirectedWeightedGraph load_graph_auto(const std::string& path) {
    bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    return load_graph(path, is_json ? GraphFormat::json : GraphFormat::edgelist);
}

std::string graph_to_json(const DirectedWeightedGraph& g) {
    json j;
    j["n"] = g.n();
    json edges = json::array();
    for (const Edge& e : g.edges()) edges.push_back(json::array({e.src, e.dst, e.weight}));
    j["edges"] = std::move(edges);
    if (!g.name().empty()) j["name"] = g.name();
    return j.dump();
}

void save_graph_json(const DirectedWeightedGraph& g, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("graph_core: cannot write " + path);
    f << graph_to_json(g) << "\n";
}

DirectedWeightedGraph from_dense(const Matrix& m, double threshold, const std::string& name) {
    if (m.rows() != m.cols()) throw Error("graph_core: from_dense requires a square matrix");
    if (threshold < 0.0) throw Error("graph_core: threshold must be nonnegative");
    int n = static_cast<int>(m.rows());
    std::vector<Edge> edges;
    int dropped = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double v = m(i, j);
            if (!std::isfinite(v)) throw Error("graph_core: non-finite matrix entry");
            if (v >= threshold && v > 0.0)
                edges.push_back({i, j, v});
            else if (v > 0.0)
                ++dropped;
        }
    if (edges.empty()) throw Error("graph_core: from_dense produced a graph with no edges");
    DirectedWeightedGraph g(n, std::move(edges), name);
    g.meta().below_threshold_dropped = dropped;
    return g;
}

std::vector<std::vector<int>> strongly_connected_components(const DirectedWeightedGraph& g) {
    // Kosaraju: forward finish order, then reverse-graph sweeps.
    int n = g.n();
    std::vector<int> order;
    order.reserve(n);
    std::vector<char> seen(n, 0);
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<std::pair<int, size_t>> stack{{s, 0}};
        seen[s] = 1;
        while (!stack.empty()) {
            auto& [v, i] = stack.back();
            const auto& nbrs = g.out_neighbors(v);
            if (i < nbrs.size()) {
                int u = nbrs[i++];
                if (!seen[u]) {
                    seen[u] = 1;
                    stack.push_back({u, 0});
                }
            } else {
                order.push_back(v);
                stack.pop_back();
            }
        }
    }
    std::vector<std::vector<int>> comps;
    std::vector<char> assigned(n, 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (assigned[*it]) continue;
        std::vector<int> comp;
        std::vector<int> stack{*it};
        assigned[*it] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (int u : g.in_neighbors(v))
                if (!assigned[u]) {
                    assigned[u] = 1;
                    stack.push_back(u);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    std::sort(comps.begin(), comps.end());
    return comps;
}

void assert_strongly_connected(const DirectedWeightedGraph& g) {
    auto comps = strongly_connected_components(g);
    if (comps.size() > 1)
        throw NotStronglyConnected("graph_core: graph is not strongly connected (" +
                                       std::to_string(comps.size()) + " components)",
                                   comps);
}

Matrix random_walk_matrix(const DirectedWeightedGraph& g) {
    Matrix w = g.dense();
    for (int i = 0; i < g.n(); ++i) {
        double deg = w.row(i).sum();
        if (deg <= 0.0)
            throw Error("graph_core: vertex " + std::to_string(i) + " has zero out-degree");
        w.row(i) /= deg;
    }
    return w;
}

Matrix load_dense_matrix(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("graph_core: cannot open " + path);
    bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    if (is_json) {
        json j;
        try {
            f >> j;
        } catch (const json::exception& e) {
            throw ParseError("graph_core: cannot parse " + path + ": " + e.what());
        }
        int n = j.at("n").get<int>();
        const auto& rows = j.at("rows");
        if (static_cast<int>(rows.size()) != n)
            throw ParseError("graph_core: " + path + ": row count does not match n");
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[i].size()) != n)
                throw ParseError("graph_core: " + path + ": row " + std::to_string(i) +
                                 " has wrong length");
            for (int k = 0; k < n; ++k) m(i, k) = rows[i][k].get<double>();
        }
        return m;
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    size_t n = rows.size();
    if (n == 0) throw ParseError("graph_core: " + path + " is empty");
    size_t cols = rows[0].size();
    Matrix m(n, cols);
    for (size_t i = 0; i < n; ++i) {
        if (rows[i].size() != cols)
            throw ParseError("graph_core: " + path + ": ragged rows in CSV matrix");
        for (size_t k = 0; k < cols; ++k) m(i, k) = rows[i][k];
    }
    return m;
}

std::string matrix_to_csv(const Matrix& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_sig12(m(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(std::stod(format_sig12(m(i, j))));
        rows.push_back(std::move(row));
    }
    json j;
    j["n"] = m.rows();
    j["rows"] = std::move(rows);
    return j.dump();
}

}  // namespace curvflow

#include "sparsicolor/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sparsicolor {

Graph::Graph(int n, std::vector<std::pair<NodeId, NodeId>> edges) : n_(n), adj_(n) {
    for (auto& [u, v] : edges) {
        if (u == v) throw std::invalid_argument("self-loop");
        if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("node id out of range");
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& nb : adj_) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        delta_ = std::max(delta_, static_cast<int>(nb.size()));
        m_ += static_cast<int64_t>(nb.size());
    }
    m_ /= 2;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    if (u < 0 || u >= n_) return false;
    const auto& nb = adj_[u];
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<NodeId, NodeId>> Graph::edge_list() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(static_cast<size_t>(m_));
    for (NodeId u = 0; u < n_; ++u)
        for (NodeId v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

bool Graph::check_invariants(std::string* why) const {
    int dmax = 0;
    for (NodeId u = 0; u < n_; ++u) {
        const auto& nb = adj_[u];
        dmax = std::max(dmax, static_cast<int>(nb.size()));
        for (size_t i = 0; i < nb.size(); ++i) {
            if (nb[i] == u) {
                if (why) *why = "self-loop at " + std::to_string(u);
                return false;
            }
            if (i > 0 && nb[i] == nb[i - 1]) {
                if (why) *why = "duplicate edge at " + std::to_string(u);
                return false;
            }
            if (!has_edge(nb[i], u)) {
                if (why) *why = "asymmetric edge " + std::to_string(u) + "-" + std::to_string(nb[i]);
                return false;
            }
        }
    }
    if (dmax != delta_) {
        if (why) *why = "delta mismatch";
        return false;
    }
    return true;
}

GraphStats graph_stats(const Graph& g) {
    GraphStats s;
    s.n = g.n();
    s.m = g.m();
    s.delta = g.delta();
    for (NodeId v = 0; v < g.n(); ++v) s.degree_histogram[g.degree(v)]++;
    return s;
}

Graph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1;
    std::vector<std::pair<NodeId, NodeId>> edges;
    NodeId max_id = -1;
    while (std::getline(in, line)) {
        size_t pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#') {
            size_t np = line.find("n=");
            if (np != std::string::npos) n = std::stoi(line.substr(np + 2));
            continue;
        }
        std::istringstream ls(line);
        NodeId u, v;
        if (!(ls >> u >> v)) throw std::runtime_error("bad edge line: " + line);
        edges.emplace_back(u, v);
        max_id = std::max({max_id, u, v});
    }
    if (n < 0) n = max_id + 1;
    return Graph(n, std::move(edges));
}

std::string format_edge_list(const Graph& g) {
    std::ostringstream out;
    out << "# n=" << g.n() << "\n";
    for (auto& [u, v] : g.edge_list()) out << u << " " << v << "\n";
    return out.str();
}

Graph read_edge_list(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_edge_list(ss.str());
}

void write_edge_list(const Graph& g, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << format_edge_list(g);
}

} // namespace sparsicolor

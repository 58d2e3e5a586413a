#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sparsicolor {

using NodeId = int32_t;

// Immutable simple undirected graph. Adjacency lists are sorted; delta is
// the maximum degree. Safe to share across threads once built.
class Graph {
public:
    Graph() = default;
    Graph(int n, std::vector<std::pair<NodeId, NodeId>> edges);

    int n() const { return n_; }
    int64_t m() const { return m_; }
    int delta() const { return delta_; }

    const std::vector<NodeId>& neighbors(NodeId v) const { return adj_[v]; }
    int degree(NodeId v) const { return static_cast<int>(adj_[v].size()); }
    bool has_edge(NodeId u, NodeId v) const;

    // Edges as (u, v) with u < v, in lexicographic order.
    std::vector<std::pair<NodeId, NodeId>> edge_list() const;

    // Full-scan integrity check: simplicity and adjacency symmetry.
    bool check_invariants(std::string* why = nullptr) const;

private:
    int n_ = 0;
    int64_t m_ = 0;
    int delta_ = 0;
    std::vector<std::vector<NodeId>> adj_;
};

struct GraphStats {
    int n = 0;
    int64_t m = 0;
    int delta = 0;
    std::map<int, int> degree_histogram;
};

GraphStats graph_stats(const Graph& g);

// Edge-list text format: lines "u v" (0-indexed, u<v), '#' comments,
// optional first line "# n=<n>". Reader infers n from max ID if absent.
Graph read_edge_list(const std::string& path);
void write_edge_list(const Graph& g, const std::string& path);
Graph parse_edge_list(const std::string& text);
std::string format_edge_list(const Graph& g);

} // namespace sparsicolor

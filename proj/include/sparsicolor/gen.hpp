#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sparsicolor/graph.hpp"

namespace sparsicolor {

enum class Family { Clique, Gnp, PlantedCliques };

struct GenSpec {
    Family family = Family::Gnp;
    int n = 0;
    double p = 0.0;            // gnp edge probability
    int clique_count = 0;      // planted
    int clique_size = 0;       // planted
    double epsilon_holes = 0.0;// planted: each clique edge dropped w.p. epsilon_holes/2
    double cross_fraction = 0.0;   // planted: per-node cap on inter-clique degree, as fraction of clique_size
    double cross_mean = 2.0;       // planted: mean inter-clique edges per clique node
    double bg_degree_fraction = 0.25; // planted: background mean degree, as fraction of clique_size
    uint64_t seed = 1;
};

// Ground-truth partition of a planted instance: clique index per node,
// -1 for background nodes.
struct PlantedPartition {
    std::vector<int> clique_of;
    std::vector<std::vector<NodeId>> cliques;
};

Graph gen_clique(int n, uint64_t seed);
Graph gen_gnp(int n, double p, uint64_t seed);
std::pair<Graph, PlantedPartition> gen_planted(const GenSpec& spec);

Graph generate(const GenSpec& spec, PlantedPartition* partition = nullptr);

// Planted spec sized so the generated graph has max degree close to
// delta_target, with n nodes total (background fills the remainder).
GenSpec planted_for_delta(int delta_target, int n, double epsilon_holes, uint64_t seed);

} // namespace sparsicolor

#pragma once

#include <vector>

#include "sparsicolor/acd.hpp"
#include "sparsicolor/engine.hpp"

namespace sparsicolor {

// Decomposition restricted to the nodes left uncolored by preconditioning,
// with the external-degree budget they were preconditioned to.
struct StrongDecomposition {
    Decomposition decomp;              // surviving cliques (uncolored members)
    std::vector<int> ext_uncolored;    // per node: uncolored neighbors in other surviving cliques
    double e_max = 0.0;
    int stranded = 0;                  // uncolored nodes outside surviving cliques
    std::vector<char> node_extrovert;  // classification, per node
    std::vector<char> clique_extrovert;// per ORIGINAL clique index
};

// Claim-C.1 classification: sample incident edges with prob eta*beta/delta,
// introvert iff fewer than 0.75*beta sampled edges lead outside the clique.
std::vector<char> classify_external(Engine& eng, const Decomposition& acd, uint64_t seed);

// One randomized color-trial round over `active_mask` nodes with the given
// activation probability; colors come fresh from L1. Ties to adjacent
// triers break toward the lower ID. Returns number newly colored.
int generate_slack(Engine& eng, const std::vector<char>& eligible, double activation_p,
                   uint64_t salt);

// Doubling multi-trial: iteration j draws min(2^j, cap) palette colors from
// L1 and keeps the first not contested by a lower-ID adjacent trier. Nodes
// still uncolored after the iteration budget are returned.
struct MultiTrialResult {
    int colored = 0;
    std::vector<NodeId> leftover;
    std::vector<int> uncolored_per_iter; // treated-set trajectory
};
MultiTrialResult multi_trial(Engine& eng, const std::vector<NodeId>& nodes, int s_min,
                             uint64_t salt);

// Algorithm-B.2 preconditioning: classify nodes and cliques, generate
// slack, color sparse nodes and the cross-class members, then finish
// extroverted cliques. Everything colored here is frozen.
StrongDecomposition precondition(Engine& eng, const Decomposition& acd, uint64_t seed);

} // namespace sparsicolor

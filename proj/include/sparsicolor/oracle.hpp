#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sparsicolor/coloring.hpp"
#include "sparsicolor/graph.hpp"
#include "sparsicolor/palette.hpp"

namespace sparsicolor {
namespace oracle {

// ---- Coloring verification --------------------------------------------

enum class VerdictKind { Valid, Conflict, ListViolation, Incomplete };

struct Verdict {
    VerdictKind kind = VerdictKind::Valid;
    NodeId u = -1, v = -1;            // conflict witness edge
    std::vector<NodeId> nodes;        // list-violation / incomplete witnesses
    std::string str() const;
};

// Deterministic scan order: edge conflicts first, then list violations,
// then incompleteness. Pure function of its inputs.
Verdict verify_coloring(const Graph& g, const ColorLists& lists, const PartialColoring& col);
// Variant without list constraints (conflicts/incomplete only).
Verdict verify_proper(const Graph& g, const PartialColoring& col);

// ---- Exact bipartite matching ------------------------------------------

// Left nodes 0..nl-1, right nodes 0..nr-1, adjacency edges (v, c): c in S_v.
struct BipartiteInstance {
    int n_left = 0;
    int n_right = 0;
    std::vector<std::vector<int>> adj; // per left node, sorted right ids
};

struct MatchResult {
    bool feasible = false;                 // every left node matched
    int size = 0;
    std::vector<int> match_left;           // right id per left node, -1 if free
    std::vector<int> match_right;          // left id per right node, -1 if free
    std::vector<int> hall_witness;         // deficient left set when infeasible
};

// Exact maximum bipartite matching (Hopcroft-Karp phases). The Hall witness
// comes from the final alternating-reachability cut.
MatchResult list_coloring_feasible(const BipartiteInstance& inst);

// Maximum matching size by exhaustive enumeration; test oracle for tiny
// instances (about 6+6 nodes).
int max_matching_bruteforce(const BipartiteInstance& inst);

// Enumerate all perfect matchings (left side saturated); cb receives
// match_left. Only sensible for tiny instances.
void enumerate_perfect_matchings(const BipartiteInstance& inst,
                                 const std::function<void(const std::vector<int>&)>& cb);

// ---- Level-set matching invariant ---------------------------------------

struct LevelCheckResult {
    bool ok = false;
    std::string error;           // "not-a-perfect-matching" or mismatch detail
    std::vector<int64_t> s_d;    // alternating sums per level
    std::vector<int64_t> m_d;    // matching edges between V_d and V_{d+1}
};

// Verifies that for each BFS level d from root_left (a left node), the
// matching edges between V_d and V_{d+1} equal the alternating sum
// S_d = sum_{i<=d} (-1)^i |V_{d-i}|. Requires the matching to be perfect
// on the root's component.
LevelCheckResult level_matching_check(const BipartiteInstance& inst,
                                      const std::vector<int>& match_left, int root_left);

// ---- Brute-force lemma suite --------------------------------------------

struct LemmaSuiteReport {
    int configs = 0;
    int promising_checked = 0;
    int promising_failures = 0;
    int unpromising_checked = 0;
    int unpromising_failures = 0;
    int heavy_checked = 0;
    int heavy_failures = 0;
    std::string first_failure;
    bool ok() const {
        return promising_failures == 0 && unpromising_failures == 0 && heavy_failures == 0;
    }
};

// Random small almost-clique configurations (<= max_nodes per clique):
// checks the promising-palette inequality, the unpromising-count bound
// given a matching of size >= 2*alpha*avg-anti-degree, and the heavy-color
// count bound. Exhaustive per configuration.
LemmaSuiteReport brute_force_lemma_suite(int configs, int max_nodes, int alpha, uint64_t seed);

} // namespace oracle
} // namespace sparsicolor

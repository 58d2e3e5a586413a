#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparsicolor/coloring.hpp"
#include "sparsicolor/graph.hpp"
#include "sparsicolor/palette.hpp"
#include "sparsicolor/params.hpp"
#include "sparsicolor/rng.hpp"

namespace sparsicolor {

// Protocol bug surfaced as hard failure (illegal edge, properness break).
struct SimError : std::runtime_error {
    explicit SimError(const std::string& w) : std::runtime_error(w) {}
};

// Recorded failure, not a crash: the pipeline catches it per phase.
struct RoundCapExceeded : std::runtime_error {
    RoundCapExceeded() : std::runtime_error("round cap exceeded") {}
};

// Canonical fixed-width serialization: node IDs ceil(log2 n) bits, colors
// ceil(log2(delta+1)) bits, tags 8 bits. A message's payload is packed into
// one word; `bits` is its exact serialized length.
struct Message {
    uint64_t payload = 0;
    int32_t bits = 0;
    NodeId from = -1;
};

inline int64_t account(const Message& m) { return m.bits; }

// Packs fields most-significant-first; widths come from Derived.
class MsgBuilder {
public:
    explicit MsgBuilder(const Derived& d) : d_(d) {}
    MsgBuilder& tag(uint8_t t) { return push(t, 8); }
    MsgBuilder& id(NodeId v) { return push(static_cast<uint64_t>(v), d_.id_bits()); }
    MsgBuilder& color(Color c) { return push(static_cast<uint64_t>(c), d_.color_bits()); }
    MsgBuilder& count(int64_t k) {
        return push(static_cast<uint64_t>(k), Derived::bit_width_of(d_.n + 1));
    }
    MsgBuilder& bit(bool b) { return push(b ? 1 : 0, 1); }
    Message build() const { return m_; }

private:
    MsgBuilder& push(uint64_t v, int bits) {
        m_.payload = (m_.payload << bits) | (v & ((bits >= 64 ? 0 : (1ULL << bits)) - 1));
        m_.bits += bits;
        return *this;
    }
    const Derived& d_;
    Message m_;
};

enum class PhaseStatus { Ok, RoundCapExceeded, ListExhausted, DisseminationIncomplete, Failed };
std::string to_string(PhaseStatus s);

struct PhaseMetrics {
    std::string phase;
    int64_t rounds = 0;
    int64_t max_bits_edge = 0;
    int64_t max_distinct_neighbors = 0;
    int64_t bits_total = 0;
    int64_t uncolored_after = 0;
    PhaseStatus status = PhaseStatus::Ok;
    int retries = 0;
    int64_t list_exhausted_events = 0;
};

struct RunMetrics {
    std::vector<PhaseMetrics> phases;
    std::vector<int64_t> uncolored_trajectory;
    int64_t total_rounds = 0;
    int64_t cumulative_bits = 0;
    int64_t max_bits_edge = 0;
    int64_t max_distinct_neighbors = 0;
    int64_t illegal_edge_events = 0; // hard failures throw; stays 0 on success
    int64_t properness_checks = 0;

    const PhaseMetrics* phase(const std::string& name) const {
        for (auto& p : phases)
            if (p.phase == name) return &p;
        return nullptr;
    }
};

// Synchronous round-driven message-passing simulator. Messages sent in
// round r are readable in round r+1, never earlier; sends are restricted
// to the legal edge set (sparsified edges plus sampled aux edges). Colors
// staged with propose_color are applied at the next barrier, where
// properness over the ORIGINAL graph is asserted on all touched nodes.
//
// Clique-local aggregates (convergecast/broadcast over a BFS tree of the
// sparsified clique) are metered through charge(): they spend rounds and
// per-edge bits against the same ledger as real sends, chunked so the
// per-round bandwidth budget is respected.
class Engine {
public:
    Engine(const Graph& g_full, const Graph& g_sparse,
           std::vector<std::vector<NodeId>> aux_edges, const Derived& d,
           ColorLists& lists, PartialColoring& col, uint64_t seed);

    // --- protocol surface -------------------------------------------------
    Rng rng(NodeId v, uint64_t salt = 0) const;
    void send(NodeId from, NodeId to, const Message& m);
    const std::vector<Message>& inbox(NodeId v) const { return inbox_[v]; }
    void advance_round();

    void charge(int64_t rounds, int64_t bits_per_edge, int64_t distinct = 0);
    void charge_payload(int64_t base_rounds, int64_t payload_bits_per_edge);

    // Parallel lanes: almost-cliques execute the same phase concurrently on
    // disjoint node sets, so their rounds overlap. Lanes run sequentially
    // here; the scope merges their round usage as a maximum.
    void parallel_begin();
    void lane_begin();
    void lane_end();
    void parallel_end();

    void propose_color(NodeId v, Color c);
    void uncolor(NodeId v);
    void commit(); // apply staged colors + delta properness check (no round)

    // --- state ------------------------------------------------------------
    const Graph& full() const { return g_full_; }
    const Graph& sparse() const { return g_sparse_; }
    const std::vector<NodeId>& legal_neighbors(NodeId v) const { return legal_[v]; }
    bool legal_edge(NodeId u, NodeId v) const;
    PartialColoring& coloring() { return col_; }
    const PartialColoring& coloring() const { return col_; }
    ColorLists& lists() { return lists_; }
    const Derived& params() const { return d_; }
    uint64_t seed() const { return seed_; }
    int64_t round() const { return round_; }

    void note_list_exhausted() { ++cur_.list_exhausted_events; }
    void note_retry() { ++cur_.retries; }

    // --- phase bookkeeping --------------------------------------------------
    void begin_phase(const std::string& name);
    PhaseMetrics end_phase(PhaseStatus status);
    uint64_t phase_tag() const { return phase_tag_; }
    RunMetrics& metrics() { return metrics_; }

private:
    void flush_round_stats();
    void check_properness(const std::vector<NodeId>& touched);
    int neighbor_index(NodeId from, NodeId to) const;

    const Graph& g_full_;
    const Graph& g_sparse_;
    std::vector<std::vector<NodeId>> aux_;
    std::vector<std::vector<NodeId>> legal_;
    const Derived& d_;
    ColorLists& lists_;
    PartialColoring& col_;
    uint64_t seed_;

    int64_t round_ = 0;
    std::vector<std::vector<Message>> inbox_, outbox_;
    std::vector<std::vector<int64_t>> out_bits_;  // per node, per legal-neighbor slot
    std::vector<std::vector<int>> touched_slots_; // slots written this round
    std::vector<std::pair<NodeId, Color>> staged_;

    RunMetrics metrics_;
    PhaseMetrics cur_;
    uint64_t phase_tag_ = 0;

    bool in_parallel_ = false, in_lane_ = false;
    int64_t lane_mark_round_ = 0, lane_mark_cur_ = 0, parallel_max_ = 0;
    int64_t max_legal_degree_ = 0;
};

} // namespace sparsicolor

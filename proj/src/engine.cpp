#include "sparsicolor/engine.hpp"

#include <algorithm>

namespace sparsicolor {

std::string to_string(PhaseStatus s) {
    switch (s) {
        case PhaseStatus::Ok: return "ok";
        case PhaseStatus::RoundCapExceeded: return "round-cap-exceeded";
        case PhaseStatus::ListExhausted: return "list-exhausted";
        case PhaseStatus::DisseminationIncomplete: return "dissemination-incomplete";
        case PhaseStatus::Failed: return "failed";
    }
    return "?";
}

namespace {
uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}
} // namespace

Engine::Engine(const Graph& g_full, const Graph& g_sparse,
               std::vector<std::vector<NodeId>> aux_edges, const Derived& d,
               ColorLists& lists, PartialColoring& col, uint64_t seed)
    : g_full_(g_full), g_sparse_(g_sparse), aux_(std::move(aux_edges)), d_(d),
      lists_(lists), col_(col), seed_(seed) {
    const int n = g_full.n();
    if (aux_.empty()) aux_.assign(n, {});
    legal_.resize(n);
    out_bits_.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        legal_[v] = g_sparse.neighbors(v);
        legal_[v].insert(legal_[v].end(), aux_[v].begin(), aux_[v].end());
        std::sort(legal_[v].begin(), legal_[v].end());
        legal_[v].erase(std::unique(legal_[v].begin(), legal_[v].end()), legal_[v].end());
        out_bits_[v].assign(legal_[v].size(), 0);
    }
    inbox_.resize(n);
    outbox_.resize(n);
    touched_slots_.resize(n);
    for (NodeId v = 0; v < n; ++v)
        max_legal_degree_ =
            std::max(max_legal_degree_, static_cast<int64_t>(legal_[v].size()));
}

Rng Engine::rng(NodeId v, uint64_t salt) const {
    return Rng::stream(seed_, static_cast<uint64_t>(v),
                       mix_key(phase_tag_, salt), static_cast<uint64_t>(round_));
}

int Engine::neighbor_index(NodeId from, NodeId to) const {
    const auto& nb = legal_[from];
    auto it = std::lower_bound(nb.begin(), nb.end(), to);
    if (it == nb.end() || *it != to) return -1;
    return static_cast<int>(it - nb.begin());
}

bool Engine::legal_edge(NodeId u, NodeId v) const { return neighbor_index(u, v) >= 0; }

void Engine::send(NodeId from, NodeId to, const Message& m) {
    int slot = neighbor_index(from, to);
    if (slot < 0) {
        ++metrics_.illegal_edge_events;
        throw SimError("illegal edge send " + std::to_string(from) + "->" + std::to_string(to));
    }
    if (out_bits_[from][slot] == 0) touched_slots_[from].push_back(slot);
    out_bits_[from][slot] += m.bits;
    cur_.bits_total += m.bits;
    Message copy = m;
    copy.from = from;
    outbox_[to].push_back(copy);
}

void Engine::flush_round_stats() {
    for (NodeId v = 0; v < static_cast<NodeId>(touched_slots_.size()); ++v) {
        auto& slots = touched_slots_[v];
        if (slots.empty()) continue;
        cur_.max_distinct_neighbors =
            std::max(cur_.max_distinct_neighbors, static_cast<int64_t>(slots.size()));
        for (int s : slots) {
            cur_.max_bits_edge = std::max(cur_.max_bits_edge, out_bits_[v][s]);
            out_bits_[v][s] = 0;
        }
        slots.clear();
    }
}

void Engine::advance_round() {
    flush_round_stats();
    inbox_.swap(outbox_);
    for (auto& o : outbox_) o.clear();
    ++round_;
    ++cur_.rounds;
    commit();
    if (round_ > d_.round_cap) throw RoundCapExceeded();
}

void Engine::charge(int64_t rounds, int64_t bits_per_edge, int64_t distinct) {
    if (rounds <= 0) return;
    // Aggregates ride the legal edges; a node contacts at most all of them.
    if (distinct == 0) distinct = max_legal_degree_;
    if (bits_per_edge > d_.bits_per_edge_budget) {
        // Chunk wide payloads into extra rounds so the budget holds.
        int64_t chunks = (bits_per_edge + d_.bits_per_edge_budget - 1) / d_.bits_per_edge_budget;
        rounds *= chunks;
        bits_per_edge = d_.bits_per_edge_budget;
    }
    cur_.max_bits_edge = std::max(cur_.max_bits_edge, bits_per_edge);
    cur_.max_distinct_neighbors = std::max(cur_.max_distinct_neighbors, distinct);
    cur_.bits_total += bits_per_edge * rounds; // busiest-edge ledger
    round_ += rounds;
    cur_.rounds += rounds;
    commit();
    if (round_ > d_.round_cap) throw RoundCapExceeded();
}

void Engine::charge_payload(int64_t base_rounds, int64_t payload_bits_per_edge) {
    int64_t per_round = std::min<int64_t>(payload_bits_per_edge, d_.bits_per_edge_budget);
    per_round = std::max<int64_t>(per_round, 1);
    int64_t rounds = std::max<int64_t>(
        base_rounds, (payload_bits_per_edge + per_round - 1) / per_round);
    charge(rounds, per_round);
}

void Engine::parallel_begin() {
    if (in_parallel_) throw SimError("nested parallel scope");
    in_parallel_ = true;
    parallel_max_ = 0;
}

void Engine::lane_begin() {
    if (!in_parallel_ || in_lane_) throw SimError("lane outside parallel scope");
    in_lane_ = true;
    lane_mark_round_ = round_;
    lane_mark_cur_ = cur_.rounds;
}

void Engine::lane_end() {
    if (!in_lane_) throw SimError("lane_end without lane_begin");
    in_lane_ = false;
    parallel_max_ = std::max(parallel_max_, round_ - lane_mark_round_);
    round_ = lane_mark_round_;
    cur_.rounds = lane_mark_cur_;
}

void Engine::parallel_end() {
    if (!in_parallel_ || in_lane_) throw SimError("parallel_end inside lane");
    in_parallel_ = false;
    round_ += parallel_max_;
    cur_.rounds += parallel_max_;
    if (round_ > d_.round_cap) throw RoundCapExceeded();
}

void Engine::propose_color(NodeId v, Color c) { staged_.emplace_back(v, c); }

void Engine::uncolor(NodeId v) { staged_.emplace_back(v, 0); }

void Engine::commit() {
    if (staged_.empty()) return;
    std::vector<NodeId> touched;
    touched.reserve(staged_.size());
    for (auto& [v, c] : staged_) {
        col_.set(v, c);
        if (c != 0) touched.push_back(v);
    }
    staged_.clear();
    check_properness(touched);
}

void Engine::check_properness(const std::vector<NodeId>& touched) {
    for (NodeId v : touched) {
        Color c = col_.color(v);
        for (NodeId u : g_full_.neighbors(v)) {
            if (col_.color(u) == c) {
                throw SimError("properness violated on edge " + std::to_string(v) + "-" +
                               std::to_string(u) + " color " + std::to_string(c));
            }
        }
    }
    ++metrics_.properness_checks;
}

void Engine::begin_phase(const std::string& name) {
    cur_ = PhaseMetrics{};
    cur_.phase = name;
    phase_tag_ = fnv1a(name);
    in_parallel_ = in_lane_ = false; // clears state left by an aborted phase
}

PhaseMetrics Engine::end_phase(PhaseStatus status) {
    flush_round_stats();
    cur_.status = status;
    cur_.uncolored_after = col_.uncolored_count();
    metrics_.phases.push_back(cur_);
    metrics_.uncolored_trajectory.push_back(cur_.uncolored_after);
    metrics_.total_rounds += cur_.rounds;
    metrics_.cumulative_bits += cur_.bits_total;
    metrics_.max_bits_edge = std::max(metrics_.max_bits_edge, cur_.max_bits_edge);
    metrics_.max_distinct_neighbors =
        std::max(metrics_.max_distinct_neighbors, cur_.max_distinct_neighbors);
    PhaseMetrics out = cur_;
    cur_ = PhaseMetrics{};
    return out;
}

} // namespace sparsicolor

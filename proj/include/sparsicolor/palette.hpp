#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "sparsicolor/graph.hpp"
#include "sparsicolor/params.hpp"

namespace sparsicolor {

using Color = int32_t; // colors are 1..delta+1; 0 means "no color"

struct ListExhausted : std::runtime_error {
    NodeId node;
    ListExhausted(NodeId v, const std::string& what)
        : std::runtime_error(what), node(v) {}
};

// Identifies one sublist of a node's palette.
struct SublistId {
    enum Kind : uint8_t { L1 = 1, L2 = 2, L2Star = 3, L3G = 4, L3H = 5 };
    Kind kind;
    int index = 0; // L2: iteration i; L3G/L3H: iteration ell

    static SublistId l1() { return {L1, 0}; }
    static SublistId l2(int i) { return {L2, i}; }
    static SublistId l2star() { return {L2Star, 0}; }
    static SublistId l3g(int ell) { return {L3G, ell}; }
    static SublistId l3h(int ell) { return {L3H, ell}; }

    uint64_t key(NodeId v) const {
        return (static_cast<uint64_t>(v) << 24) | (static_cast<uint64_t>(kind) << 20) |
               static_cast<uint64_t>(index);
    }
};

// Fixed-size bitset over the color space [1, delta+1].
class ColorMask {
public:
    ColorMask() = default;
    explicit ColorMask(int delta) : words_((delta + 1 + 63) / 64, 0) {}
    void set(Color c) { words_[(c - 1) >> 6] |= 1ULL << ((c - 1) & 63); }
    void clear(Color c) { words_[(c - 1) >> 6] &= ~(1ULL << ((c - 1) & 63)); }
    bool test(Color c) const { return (words_[(c - 1) >> 6] >> ((c - 1) & 63)) & 1; }
    bool intersects(const ColorMask& o) const {
        size_t k = std::min(words_.size(), o.words_.size());
        for (size_t i = 0; i < k; ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }
    void or_with(const ColorMask& o) {
        for (size_t i = 0; i < std::min(words_.size(), o.words_.size()); ++i)
            words_[i] |= o.words_[i];
    }
    int count() const;
    bool empty() const {
        for (uint64_t w : words_)
            if (w) return false;
        return true;
    }

private:
    std::vector<uint64_t> words_;
};

// Sampled color lists for every node, with fresh-draw cursors. Sublists are
// deterministic functions of (seed, node, sublist), materialized on first
// use; the per-node union masks are built eagerly so the sparsified graph
// can be constructed without materializing draw orders.
class ColorLists {
public:
    ColorLists() = default;
    ColorLists(const Graph& g, const Derived& d, uint64_t seed);

    // Test helper: explicit per-node lists, all stored as a single L1 list.
    static ColorLists from_explicit(int n, int delta, const std::vector<std::vector<Color>>& lists);
    // Test helper: pin one sublist's contents (draw order as given).
    void inject(NodeId v, SublistId id, const std::vector<Color>& colors);

    int delta() const { return delta_; }
    int n() const { return n_; }

    const ColorMask& mask(NodeId v) const { return union_mask_[v]; }
    const ColorMask& l2_mask(NodeId v) const { return l2_mask_[v]; }
    bool has_color(NodeId v, Color c) const { return union_mask_[v].test(c); }

    // Next `count` unread colors of the sublist; throws ListExhausted when
    // fewer remain. count == 0 returns empty and leaves the cursor alone.
    std::vector<Color> fresh(NodeId v, SublistId id, int count);
    std::optional<Color> fresh_one(NodeId v, SublistId id);
    int remaining(NodeId v, SublistId id);
    int size(NodeId v, SublistId id);

    // Whole-sublist contents in draw order (ignores the cursor).
    const std::vector<Color>& members(NodeId v, SublistId id);
    // Membership mask of one sublist; for L3 blocking checks use both halves.
    const ColorMask& sublist_mask(NodeId v, SublistId id);

    // Claim on half sizes: every L3 half holds >= 6*beta distinct colors.
    // Checked lazily; desk mode logs, paper mode throws.
    int l3_half_deficits() const { return l3_half_deficits_; }

    std::string dump_sublist(NodeId v, SublistId id);

private:
    struct Sublist {
        std::vector<Color> order;
        ColorMask mask;
        int cursor = 0;
    };
    Sublist& get(NodeId v, SublistId id);
    Sublist make(NodeId v, SublistId id) const;
    void build_masks();

    int n_ = 0;
    int delta_ = 0;
    Derived derived_;
    uint64_t seed_ = 0;
    bool explicit_ = false;
    std::vector<ColorMask> union_mask_;
    std::vector<ColorMask> l2_mask_;
    std::unordered_map<uint64_t, Sublist> store_;
    int l3_half_deficits_ = 0;
};

// Palette sampling for every node of g under the derived rates.
inline ColorLists sample_palettes(const Graph& g, const Derived& d, uint64_t seed) {
    return ColorLists(g, d, seed);
}

// Subgraph of g keeping exactly the edges whose endpoint lists intersect.
Graph build_sparsified(const Graph& g, const ColorLists& lists);

// Aux edges for the decomposition: each incident edge of each node of
// degree >= delta/2 is sampled independently with probability rate; both
// endpoints learn membership. Returned as symmetric sorted adjacency.
std::vector<std::vector<NodeId>> sample_aux_edges(const Graph& g, double rate, uint64_t seed);

} // namespace sparsicolor

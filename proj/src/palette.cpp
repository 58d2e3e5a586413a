#include "sparsicolor/palette.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "sparsicolor/rng.hpp"

namespace sparsicolor {

namespace {
constexpr uint64_t kTagAux = 0x6175785fULL;

uint64_t stream_tag(SublistId id) {
    return (static_cast<uint64_t>(id.kind) << 32) | static_cast<uint64_t>(id.index);
}

// Bernoulli(rate) membership over colors 1..delta+1, ascending.
void sample_membership(Rng& rng, double rate, int delta, std::vector<Color>& out) {
    if (rate <= 0.0) return;
    const int top = delta + 1;
    if (rate >= 1.0) {
        out.resize(top);
        for (int c = 0; c < top; ++c) out[c] = c + 1;
        return;
    }
    if (rate > 0.05) {
        for (Color c = 1; c <= top; ++c)
            if (rng.bernoulli(rate)) out.push_back(c);
        return;
    }
    int64_t c = 0;
    for (;;) {
        c += 1 + static_cast<int64_t>(rng.geometric_skip(rate));
        if (c > top) break;
        out.push_back(static_cast<Color>(c));
    }
}
} // namespace

int ColorMask::count() const {
    int total = 0;
    for (uint64_t w : words_) total += std::popcount(w);
    return total;
}

ColorLists::ColorLists(const Graph& g, const Derived& d, uint64_t seed)
    : n_(g.n()), delta_(std::max(1, d.delta)), derived_(d), seed_(seed) {
    build_masks();
}

ColorLists ColorLists::from_explicit(int n, int delta,
                                     const std::vector<std::vector<Color>>& lists) {
    ColorLists cl;
    cl.n_ = n;
    cl.delta_ = delta;
    cl.explicit_ = true;
    cl.union_mask_.assign(n, ColorMask(delta));
    cl.l2_mask_.assign(n, ColorMask(delta));
    for (NodeId v = 0; v < n; ++v) {
        Sublist s;
        s.mask = ColorMask(delta);
        for (Color c : lists[v]) {
            s.order.push_back(c);
            s.mask.set(c);
            cl.union_mask_[v].set(c);
        }
        cl.store_.emplace(SublistId::l1().key(v), std::move(s));
    }
    return cl;
}

void ColorLists::inject(NodeId v, SublistId id, const std::vector<Color>& colors) {
    Sublist s;
    s.mask = ColorMask(delta_);
    for (Color c : colors) {
        s.order.push_back(c);
        s.mask.set(c);
        union_mask_[v].set(c);
        if (id.kind == SublistId::L2 || id.kind == SublistId::L2Star) l2_mask_[v].set(c);
    }
    store_[id.key(v)] = std::move(s);
}

ColorLists::Sublist ColorLists::make(NodeId v, SublistId id) const {
    Rng rng = Rng::stream(seed_, static_cast<uint64_t>(v), stream_tag(id));
    Sublist s;
    s.mask = ColorMask(delta_);
    switch (id.kind) {
        case SublistId::L1: {
            s.order.reserve(derived_.l1_size);
            for (int i = 0; i < derived_.l1_size; ++i) {
                Color c = static_cast<Color>(1 + rng.uniform(static_cast<uint64_t>(delta_ + 1)));
                s.order.push_back(c);
                s.mask.set(c);
            }
            return s; // uniform draws with replacement keep draw order
        }
        case SublistId::L2:
            sample_membership(rng, derived_.rate_l2, delta_, s.order);
            break;
        case SublistId::L2Star:
            sample_membership(rng, derived_.rate_l2star, delta_, s.order);
            break;
        case SublistId::L3G:
        case SublistId::L3H:
            sample_membership(rng, derived_.rate_l3, delta_, s.order);
            break;
    }
    for (Color c : s.order) s.mask.set(c);
    rng.shuffle(s.order); // fresh draws reveal the set in random order
    return s;
}

ColorLists::Sublist& ColorLists::get(NodeId v, SublistId id) {
    uint64_t k = id.key(v);
    auto it = store_.find(k);
    if (it != store_.end()) return it->second;
    if (explicit_) {
        // Explicit lists only populate L1; other sublists are empty.
        Sublist s;
        s.mask = ColorMask(delta_);
        return store_.emplace(k, std::move(s)).first->second;
    }
    Sublist s = make(v, id);
    if ((id.kind == SublistId::L3G || id.kind == SublistId::L3H) &&
        static_cast<int>(s.order.size()) < 6 * derived_.beta) {
        // Half-size claim: every L3 half carries at least 6*beta colors.
        // Binding at paper scale; at desk scale deficits are counted.
        ++l3_half_deficits_;
        if (derived_.paper_mode)
            throw std::runtime_error("L3 half below 6*beta colors in paper mode");
    }
    return store_.emplace(k, std::move(s)).first->second;
}

std::vector<Color> ColorLists::fresh(NodeId v, SublistId id, int count) {
    if (count == 0) return {};
    Sublist& s = get(v, id);
    if (s.cursor + count > static_cast<int>(s.order.size()))
        throw ListExhausted(v, "sublist ran dry");
    std::vector<Color> out(s.order.begin() + s.cursor, s.order.begin() + s.cursor + count);
    s.cursor += count;
    return out;
}

std::optional<Color> ColorLists::fresh_one(NodeId v, SublistId id) {
    Sublist& s = get(v, id);
    if (s.cursor >= static_cast<int>(s.order.size())) return std::nullopt;
    return s.order[s.cursor++];
}

int ColorLists::remaining(NodeId v, SublistId id) {
    Sublist& s = get(v, id);
    return static_cast<int>(s.order.size()) - s.cursor;
}

int ColorLists::size(NodeId v, SublistId id) {
    return static_cast<int>(get(v, id).order.size());
}

const std::vector<Color>& ColorLists::members(NodeId v, SublistId id) {
    return get(v, id).order;
}

const ColorMask& ColorLists::sublist_mask(NodeId v, SublistId id) {
    return get(v, id).mask;
}

void ColorLists::build_masks() {
    union_mask_.assign(n_, ColorMask(delta_));
    l2_mask_.assign(n_, ColorMask(delta_));
    std::vector<Color> tmp;
    for (NodeId v = 0; v < n_; ++v) {
        auto absorb = [&](SublistId id, bool into_l2) {
            tmp.clear();
            Rng rng = Rng::stream(seed_, static_cast<uint64_t>(v), stream_tag(id));
            if (id.kind == SublistId::L1) {
                for (int i = 0; i < derived_.l1_size; ++i)
                    union_mask_[v].set(
                        static_cast<Color>(1 + rng.uniform(static_cast<uint64_t>(delta_ + 1))));
                return;
            }
            double rate = id.kind == SublistId::L2       ? derived_.rate_l2
                          : id.kind == SublistId::L2Star ? derived_.rate_l2star
                                                         : derived_.rate_l3;
            sample_membership(rng, rate, delta_, tmp);
            for (Color c : tmp) {
                union_mask_[v].set(c);
                if (into_l2) l2_mask_[v].set(c);
            }
        };
        // The L2 blocking mask covers the sampling scheme's own sublists
        // (1/eps of them, plus L2*); extra iteration sublists only join the
        // sparsification union.
        absorb(SublistId::l1(), false);
        for (int i = 0; i < derived_.l2_sublists; ++i)
            absorb(SublistId::l2(i), i < derived_.l2_nominal);
        absorb(SublistId::l2star(), true);
        for (int ell = 0; ell < derived_.l3_sublists; ++ell) {
            absorb(SublistId::l3g(ell), false);
            absorb(SublistId::l3h(ell), false);
        }
    }
}

std::string ColorLists::dump_sublist(NodeId v, SublistId id) {
    std::ostringstream out;
    out << v << " " << static_cast<int>(id.kind) << "." << id.index;
    for (Color c : members(v, id)) out << " " << c;
    return out.str();
}

Graph build_sparsified(const Graph& g, const ColorLists& lists) {
    std::vector<std::pair<NodeId, NodeId>> kept;
    for (auto& [u, v] : g.edge_list())
        if (lists.mask(u).intersects(lists.mask(v))) kept.emplace_back(u, v);
    return Graph(g.n(), std::move(kept));
}

std::vector<std::vector<NodeId>> sample_aux_edges(const Graph& g, double rate, uint64_t seed) {
    std::vector<std::vector<NodeId>> aux(g.n());
    if (rate <= 0.0) return aux;
    const int threshold = (g.delta() + 1) / 2;
    for (NodeId v = 0; v < g.n(); ++v) {
        if (g.degree(v) < threshold) continue;
        Rng rng = Rng::stream(seed, static_cast<uint64_t>(v), kTagAux);
        for (NodeId u : g.neighbors(v))
            if (rng.bernoulli(rate)) {
                aux[v].push_back(u);
                aux[u].push_back(v);
            }
    }
    for (auto& nb : aux) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return aux;
}

} // namespace sparsicolor

#pragma once

#include <vector>

#include "sparsicolor/graph.hpp"
#include "sparsicolor/palette.hpp"

namespace sparsicolor {

// Partial coloring with freeze flags. Mutations happen at round boundaries
// through the engine, which asserts properness on touched edges.
class PartialColoring {
public:
    PartialColoring() = default;
    explicit PartialColoring(int n) : color_(n, 0), frozen_(n, 0) {}

    Color color(NodeId v) const { return color_[v]; }
    bool colored(NodeId v) const { return color_[v] != 0; }
    bool frozen(NodeId v) const { return frozen_[v] != 0; }

    void set(NodeId v, Color c) { color_[v] = c; }
    void clear(NodeId v) { color_[v] = 0; }
    void freeze(NodeId v) { frozen_[v] = 1; }

    int n() const { return static_cast<int>(color_.size()); }
    int uncolored_count() const {
        int k = 0;
        for (Color c : color_) k += (c == 0);
        return k;
    }

    // Palette of v: colors in [delta+1] not used by colored G-neighbors.
    ColorMask psi(const Graph& g, NodeId v, int delta) const {
        ColorMask used(delta);
        for (NodeId u : g.neighbors(v))
            if (color_[u] != 0) used.set(color_[u]);
        ColorMask out(delta);
        for (Color c = 1; c <= delta + 1; ++c)
            if (!used.test(c)) out.set(c);
        return out;
    }

    const std::vector<Color>& raw() const { return color_; }

private:
    std::vector<Color> color_;
    std::vector<uint8_t> frozen_;
};

} // namespace sparsicolor

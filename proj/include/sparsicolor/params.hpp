#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace sparsicolor {

enum class Mode { Paper, Desk };

// Algorithm constants. Paper mode keeps the published constants literally
// (usable only for structural tests); desk mode swaps in configurable
// constants sized for instances that fit on a workstation. Values of 0
// mean "derive the default for the current mode".
struct Params {
    Mode mode = Mode::Desk;

    int alpha = 0;          // leaves-per-tree constant (paper: 500, desk: 4)
    double epsilon = 0.0;   // ACD parameter (paper: 1e-8, desk: 0.05)
    double c_beta = 0.0;    // beta = floor(c_beta * log2 n) (desk default 0.6)
    int beta_override = 0;  // nonzero: use this beta directly
    double eta = 0.0;       // e_max = delta/eta (paper: Eq-derived, desk: 8)
    double gamma = 0.0;     // L2* rate constant (paper: 1/eps^2, desk: 1)

    double c1 = 8.0;        // |L1| = ceil(c1 * log2(n)^2)
    double scale_l2 = 1.0;  // L2,i per-color rate = scale_l2 / (4 delta)
    double scale_l2star = 1.0; // L2* rate = scale_l2star * gamma*beta/delta
    double scale_l3 = 0.0;  // L3 half rate = scale_l3 * 20 beta^2/delta (desk default 0.05)

    // Phase knobs.
    double slack_activation = 1.0 / 20.0; // slack generation activation prob
    double trial_activation = 0.25;       // randomized color trial activation prob
    int matching_k = 0;        // pipeline colorful-matching target K (desk: alpha)
    int matching_iter_mult = 0;// iterations = mult * K (paper: 5000, desk: 60)
    int multitrial_iters = 0;  // 0: ceil(log2 delta) + 4
    int multitrial_cap = 0;    // per-iteration draw cap (0: 2*beta)
    int aug_iter_cap = 0;      // 0: 4*ceil(log2 delta) + 8
    int reduce_round_cap = 0;  // 0: 6*ceil(log2(alpha*beta)) + 24
    int64_t round_cap = 0;     // 0: 50*log2(delta)^2 + 200
    double acd_sketch_keep = 0.0; // sketch keep prob (0: min(1, 4 beta/delta))
    double acd_es_rate = 0.0;     // aux edge rate for ACD (0: min(1, 4 beta/delta))
    double neighbor_budget_c = 4.0; // distinct-neighbor budget = c * beta^4
    int compact_cap_mult = 8;  // matching-compact selection cap = mult * beta^3
    int push_message_cap = 0;  // RandomPush precondition cap (0: beta^3)

    static Params desk() { return Params{}; }
    static Params paper() {
        Params p;
        p.mode = Mode::Paper;
        return p;
    }
};

// Params resolved against a concrete instance (n, delta). All rates are
// clamped to [0,1]; eq2_ok reports the published parameter relations.
struct Derived {
    int n = 0;
    int delta = 0;
    bool paper_mode = false;
    int alpha = 0;
    int beta = 0;
    double epsilon = 0.0;
    double eta = 0.0;
    double gamma = 0.0;
    double e_max = 0.0;

    int l1_size = 0;
    int l2_sublists = 0;     // indexed sublists (excludes L2*)
    int l2_nominal = 0;      // ceil(1/eps): the sampling scheme's own count
    int l3_sublists = 0;     // iterations covered by L3 (each has G and H halves)
    double rate_l2 = 0.0;    // per-color prob for each L2,i
    double rate_l2star = 0.0;
    double rate_l3 = 0.0;    // per-color prob for each L3 half

    int matching_k = 0;
    int matching_iters = 0;
    int multitrial_iters = 0;
    int multitrial_cap = 0;
    int aug_iter_cap = 0;
    int reduce_round_cap = 0;
    int64_t round_cap = 0;
    double sketch_keep = 0.0;
    double es_rate = 0.0;
    int64_t neighbor_budget = 0;
    int64_t bits_per_edge_budget = 0; // 4*ceil(log2 n) + 64
    int compact_cap = 0;
    int push_cap = 0;
    double slack_activation = 0.0;
    double trial_activation = 0.0;

    bool eq2_ok = true;           // epsilon <= 1/alpha^2 and 2 alpha < 1/(18 eps)
    std::vector<std::string> warnings;

    int id_bits() const { return bit_width_of(n); }
    int color_bits() const { return bit_width_of(delta + 1); }

    static int bit_width_of(int64_t values) {
        int b = 0;
        int64_t c = 1;
        while (c < values) {
            c <<= 1;
            ++b;
        }
        return b == 0 ? 1 : b;
    }
};

// Resolves params against (n, delta). Throws in paper mode when the Eq.(2)
// relations are violated; records warnings in desk mode.
Derived derive(const Params& p, int n, int delta);

inline double log2i(double x) { return std::log2(std::max(2.0, x)); }

} // namespace sparsicolor

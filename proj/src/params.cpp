#include "sparsicolor/params.hpp"

#include <algorithm>
#include <stdexcept>

namespace sparsicolor {

Derived derive(const Params& p, int n, int delta) {
    if (n < 1 || delta < 1) throw std::invalid_argument("derive: n >= 1, delta >= 1 required");
    Derived d;
    d.n = n;
    d.delta = delta;

    const bool paper = p.mode == Mode::Paper;
    d.paper_mode = paper;
    const double lg = log2i(n);

    d.alpha = p.alpha > 0 ? p.alpha : (paper ? 500 : 4);
    d.epsilon = p.epsilon > 0 ? p.epsilon : (paper ? 1e-8 : 0.05);
    double c_beta = p.c_beta > 0 ? p.c_beta : (paper ? 3.0 : 0.6);
    d.beta = p.beta_override > 0 ? p.beta_override
                                 : std::max(4, static_cast<int>(std::floor(c_beta * lg)));
    d.gamma = p.gamma > 0 ? p.gamma : (paper ? 1.0 / (d.epsilon * d.epsilon) : 1.0);

    // Eq.(2) relations between alpha and epsilon.
    d.eq2_ok = (d.epsilon <= 1.0 / (static_cast<double>(d.alpha) * d.alpha)) &&
               (2.0 * d.alpha < 1.0 / (18.0 * d.epsilon));
    if (!d.eq2_ok) {
        if (paper) throw std::invalid_argument("paper mode: parameter relations violated");
        d.warnings.push_back("eq2: alpha/epsilon relation violated (desk mode, continuing)");
    }

    d.l1_size = std::max(8, static_cast<int>(std::ceil(p.c1 * lg * lg)));
    d.matching_k = p.matching_k > 0 ? p.matching_k : d.alpha;
    int mult = p.matching_iter_mult > 0 ? p.matching_iter_mult : (paper ? 5000 : 150);
    d.matching_iters = mult * d.matching_k;

    // L2 needs one indexed sublist per matching iteration; the 1/eps count
    // of the sampling scheme covers that at paper scale only.
    d.l2_nominal = static_cast<int>(std::ceil(1.0 / d.epsilon));
    d.l2_sublists = std::max(d.l2_nominal, d.matching_iters);

    const int lgd = static_cast<int>(std::ceil(log2i(delta)));
    d.aug_iter_cap = p.aug_iter_cap > 0 ? p.aug_iter_cap : 4 * lgd + 8;
    d.l3_sublists = std::max(d.beta, d.aug_iter_cap);

    d.rate_l2 = std::min(1.0, p.scale_l2 / (4.0 * delta));
    d.rate_l2star = std::min(1.0, p.scale_l2star * d.gamma * d.beta / delta);
    double s3 = p.scale_l3 > 0 ? p.scale_l3 : (paper ? 1.0 : 0.05);
    d.rate_l3 = std::min(1.0, s3 * 20.0 * d.beta * d.beta / delta);

    // Eq.(3): eta = max(160 alpha beta, L_max/eps) with L_max ~ E|L2|.
    if (p.eta > 0) {
        d.eta = p.eta;
    } else if (paper) {
        double lmax = d.rate_l2 * (delta + 1) * d.l2_sublists + d.rate_l2star * (delta + 1);
        d.eta = std::max(160.0 * d.alpha * d.beta, lmax / d.epsilon);
    } else {
        d.eta = 8.0;
    }
    d.e_max = delta / d.eta;

    d.multitrial_iters = p.multitrial_iters > 0 ? p.multitrial_iters : lgd + 4;
    d.multitrial_cap = p.multitrial_cap > 0 ? p.multitrial_cap : 2 * d.beta;
    d.reduce_round_cap = p.reduce_round_cap > 0
                             ? p.reduce_round_cap
                             : 6 * static_cast<int>(std::ceil(log2i(d.alpha * d.beta))) + 24;
    d.round_cap = p.round_cap > 0
                      ? p.round_cap
                      : static_cast<int64_t>(50.0 * log2i(delta) * log2i(delta)) + 200;
    d.sketch_keep = p.acd_sketch_keep > 0 ? p.acd_sketch_keep
                                          : std::min(1.0, 16.0 * d.beta / delta);
    d.es_rate = p.acd_es_rate > 0 ? p.acd_es_rate : std::min(1.0, 8.0 * d.beta / delta);
    double b4 = static_cast<double>(d.beta) * d.beta * d.beta * d.beta;
    d.neighbor_budget = static_cast<int64_t>(p.neighbor_budget_c * b4);
    d.bits_per_edge_budget = 4 * Derived::bit_width_of(n) + 64;
    d.compact_cap = p.compact_cap_mult * d.beta * d.beta * d.beta;
    d.push_cap = p.push_message_cap > 0 ? p.push_message_cap : d.beta * d.beta * d.beta;
    d.slack_activation = p.slack_activation;
    d.trial_activation = p.trial_activation;
    return d;
}

} // namespace sparsicolor

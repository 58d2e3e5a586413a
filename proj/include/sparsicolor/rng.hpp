#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace sparsicolor {

// Counter-based random streams. Every stream is a pure function of the
// key it was opened with, so results do not depend on scheduling or on
// the order in which streams are opened.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t mix_key(uint64_t a, uint64_t b) {
    return splitmix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 1)));
}

class Rng {
public:
    explicit Rng(uint64_t seed) : state_(splitmix64(seed ^ 0x5851f42d4c957f2dULL)) {}

    // Stream keyed by (seed, node, tag, round). Used by the engine so that
    // per-node randomness is reproducible independent of execution order.
    static Rng stream(uint64_t seed, uint64_t node, uint64_t tag, uint64_t round = 0) {
        uint64_t k = mix_key(seed, node);
        k = mix_key(k, tag);
        k = mix_key(k, round);
        return Rng(k);
    }

    uint64_t next() { return state_ = splitmix64(state_); }

    // Uniform in [0, m). Debiased via rejection; m must be > 0.
    uint64_t uniform(uint64_t m) {
        uint64_t threshold = (0 - m) % m;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % m;
        }
    }

    // Uniform integer in [lo, hi] inclusive.
    int64_t uniform_int(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(uniform(static_cast<uint64_t>(hi - lo + 1)));
    }

    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) {
        if (p >= 1.0) return true;
        if (p <= 0.0) return false;
        return uniform01() < p;
    }

    // Distance to the next success of a Bernoulli(p) process (0-based gap).
    // Used to skip over non-sampled colors when p is small.
    uint64_t geometric_skip(double p) {
        double u = uniform01();
        if (u <= 0.0) u = 0x1.0p-53;
        return static_cast<uint64_t>(std::floor(std::log(u) / std::log1p(-p)));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = uniform(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    uint64_t state_;
};

} // namespace sparsicolor

#pragma once

#include <cstdint>

namespace skewscope {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based generator: word(i) is a pure function of (key, i), so draws
// with disjoint counter ranges are reproducible regardless of evaluation
// order or thread assignment.
struct CounterRng {
    uint64_t key = 0;

    uint64_t word(uint64_t counter) const { return splitmix64(key ^ splitmix64(counter)); }

    double uniform(uint64_t counter) const {
        return double(word(counter) >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, bound). Unbiased enough for bound << 2^64.
    uint64_t below(uint64_t counter, uint64_t bound) const {
        return word(counter) % bound;
    }

    // Named sub-stream; independent draws for distinct ids.
    CounterRng stream(uint64_t id) const { return CounterRng{splitmix64(key + 0x632be59bd9b4e019ULL * (id + 1))}; }
};

// Sequential convenience wrapper over CounterRng.
struct RngStream {
    CounterRng rng;
    uint64_t counter = 0;

    explicit RngStream(CounterRng r) : rng(r) {}
    explicit RngStream(uint64_t seed) : rng{splitmix64(seed)} {}

    uint64_t word() { return rng.word(counter++); }
    double uniform() { return rng.uniform(counter++); }
    uint64_t below(uint64_t bound) { return rng.below(counter++, bound); }
};

}  // namespace skewscope

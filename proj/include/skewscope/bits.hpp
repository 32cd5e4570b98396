#pragma once

#include <bit>
#include <cstdint>

namespace skewscope {

inline int popcount(uint64_t v) { return std::popcount(v); }

// Parity of popcount: 0 or 1.
inline int parity(uint64_t v) { return std::popcount(v) & 1; }

// Sign (-1)^{popcount(v)}.
inline int parity_sign(uint64_t v) { return (std::popcount(v) & 1) ? -1 : 1; }

// Deposits the low popcount(mask) bits of w into the set positions of mask,
// lowest position first. Order-preserving: w < w' implies scatter < scatter'.
inline uint64_t scatter_bits(uint64_t w, uint64_t mask) {
    uint64_t out = 0;
    while (mask) {
        uint64_t low = mask & (~mask + 1);
        if (w & 1) out |= low;
        w >>= 1;
        mask ^= low;
    }
    return out;
}

// Collects the bits of v at the set positions of mask into a dense low word.
inline uint64_t gather_bits(uint64_t v, uint64_t mask) {
    uint64_t out = 0;
    int j = 0;
    while (mask) {
        uint64_t low = mask & (~mask + 1);
        if (v & low) out |= uint64_t(1) << j;
        ++j;
        mask ^= low;
    }
    return out;
}

// Next word with the same popcount (Gosper). Undefined for v == 0.
inline uint64_t next_same_popcount(uint64_t v) {
    uint64_t c = v & (~v + 1);
    uint64_t r = v + c;
    return (((r ^ v) >> 2) / c) | r;
}

// Calls fn(mask) for every mask with exactly j bits among the low n positions,
// ascending.
template <typename Fn>
void for_each_mask_of_size(int n, int j, Fn&& fn) {
    if (j == 0) {
        fn(uint64_t(0));
        return;
    }
    if (j > n) return;
    uint64_t m = (uint64_t(1) << j) - 1;
    uint64_t limit = (n == 64) ? ~uint64_t(0) : (uint64_t(1) << n) - 1;
    while (m <= limit) {
        fn(m);
        if (m == 0) break;
        uint64_t nx = next_same_popcount(m);
        if (nx <= m) break;
        m = nx;
    }
}

// Calls fn(sub) for every submask of mask, ascending (2^popcount(mask) calls).
template <typename Fn>
void for_each_submask(uint64_t mask, Fn&& fn) {
    int j = popcount(mask);
    for (uint64_t w = 0; w < (uint64_t(1) << j); ++w) fn(scatter_bits(w, mask));
}

}  // namespace skewscope

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skewscope/bits.hpp"

namespace skewscope {

// Points of {-1,+1}^n, bit-encoded: bit i set <=> x_i = -1. Coordinates are
// 0-based, n <= 63.
struct Point {
    int n = 0;
    uint64_t bits = 0;
};

struct CoordSet {
    int n = 0;
    uint64_t mask = 0;

    int count() const { return popcount(mask); }
    bool contains(int i) const { return (mask >> i) & 1; }
};

// Subcube (K, y): coordinates in K fixed to the assignment, the rest free.
// Assignment bits live on the fixed positions only (bit set <=> fixed to -1).
struct Subcube {
    CoordSet fixed;
    uint64_t assignment = 0;

    int n() const { return fixed.n; }
    int codim() const { return fixed.count(); }
    bool operator==(const Subcube& o) const {
        return fixed.n == o.fixed.n && fixed.mask == o.fixed.mask && assignment == o.assignment;
    }
};

Point make_point(int n, uint64_t bits);
CoordSet make_coord_set(int n, uint64_t mask);
Subcube make_subcube(int n, uint64_t fixed_mask, uint64_t assignment);
Subcube full_cube(int n);

// chi_S(x) = prod_{i in S} x_i = (-1)^{popcount(S & x)}.
int chi(const CoordSet& s, const Point& x);

bool contains(const Subcube& c, const Point& x);

// D is a proper parent of C: same assignment on a strictly smaller fixed set.
bool is_proper_parent(const Subcube& d, const Subcube& c);

// All 2^codim - 1 proper parents, fixed-mask ascending.
std::vector<Subcube> parents(const Subcube& c);

// The 2^|L| children fixing the free coordinates L in every way,
// assignment ascending. L must be disjoint from the fixed set.
std::vector<Subcube> partition_children(const Subcube& c, const CoordSet& l);

// Every subcube of codimension <= k: mask ascending within each codimension,
// codimension 0..k, assignment ascending within a mask.
template <typename Fn>
void for_each_subcube(int n, int k, Fn&& fn) {
    for (int j = 0; j <= k; ++j) {
        for_each_mask_of_size(n, j, [&](uint64_t mask) {
            for (uint64_t w = 0; w < (uint64_t(1) << j); ++w)
                fn(Subcube{CoordSet{n, mask}, scatter_bits(w, mask)});
        });
    }
}

std::vector<Subcube> enumerate_subcubes(int n, int k);

// Text form: one char per coordinate, '+'/'-' fixed, '*' free.
std::string to_string(const Subcube& c);
Subcube parse_subcube(const std::string& s);

}  // namespace skewscope

#include "skewscope/cube.hpp"

#include <stdexcept>

namespace skewscope {

namespace {

uint64_t low_mask(int n) { return (n >= 64) ? ~uint64_t(0) : (uint64_t(1) << n) - 1; }

void check_n(int n) {
    if (n < 1 || n > 63) throw std::invalid_argument("coordinate count out of range [1,63]");
}

}  // namespace

Point make_point(int n, uint64_t bits) {
    check_n(n);
    if (bits & ~low_mask(n)) throw std::invalid_argument("point bits exceed dimension");
    return Point{n, bits};
}

CoordSet make_coord_set(int n, uint64_t mask) {
    check_n(n);
    if (mask & ~low_mask(n)) throw std::invalid_argument("coordinate mask exceeds dimension");
    return CoordSet{n, mask};
}

Subcube make_subcube(int n, uint64_t fixed_mask, uint64_t assignment) {
    CoordSet fixed = make_coord_set(n, fixed_mask);
    if (assignment & ~fixed_mask) throw std::invalid_argument("assignment bits outside fixed set");
    return Subcube{fixed, assignment};
}

Subcube full_cube(int n) {
    check_n(n);
    return Subcube{CoordSet{n, 0}, 0};
}

int chi(const CoordSet& s, const Point& x) {
    if (s.n != x.n) throw std::invalid_argument("chi: dimension mismatch");
    return parity_sign(s.mask & x.bits);
}

bool contains(const Subcube& c, const Point& x) {
    if (c.n() != x.n) throw std::invalid_argument("contains: dimension mismatch");
    return (x.bits & c.fixed.mask) == c.assignment;
}

bool is_proper_parent(const Subcube& d, const Subcube& c) {
    if (d.n() != c.n()) throw std::invalid_argument("is_proper_parent: dimension mismatch");
    if (d.fixed.mask == c.fixed.mask) return false;
    if (d.fixed.mask & ~c.fixed.mask) return false;
    return (c.assignment & d.fixed.mask) == d.assignment;
}

std::vector<Subcube> parents(const Subcube& c) {
    int j = c.codim();
    std::vector<Subcube> out;
    out.reserve((size_t(1) << j) - 1);
    for (uint64_t w = 0; w + 1 < (uint64_t(1) << j); ++w) {
        uint64_t mask = scatter_bits(w, c.fixed.mask);
        out.push_back(Subcube{CoordSet{c.n(), mask}, c.assignment & mask});
    }
    return out;
}

std::vector<Subcube> partition_children(const Subcube& c, const CoordSet& l) {
    if (c.n() != l.n) throw std::invalid_argument("partition_children: dimension mismatch");
    if (l.mask & c.fixed.mask) throw std::invalid_argument("partition_children: L meets fixed set");
    int j = l.count();
    std::vector<Subcube> out;
    out.reserve(size_t(1) << j);
    for (uint64_t w = 0; w < (uint64_t(1) << j); ++w)
        out.push_back(Subcube{CoordSet{c.n(), c.fixed.mask | l.mask},
                              c.assignment | scatter_bits(w, l.mask)});
    return out;
}

std::vector<Subcube> enumerate_subcubes(int n, int k) {
    check_n(n);
    if (k < 0 || k > n) throw std::invalid_argument("enumerate_subcubes: k out of range");
    std::vector<Subcube> out;
    for_each_subcube(n, k, [&](const Subcube& c) { out.push_back(c); });
    return out;
}

std::string to_string(const Subcube& c) {
    std::string s(size_t(c.n()), '*');
    for (int i = 0; i < c.n(); ++i)
        if (c.fixed.contains(i)) s[size_t(i)] = ((c.assignment >> i) & 1) ? '-' : '+';
    return s;
}

Subcube parse_subcube(const std::string& s) {
    int n = int(s.size());
    check_n(n);
    uint64_t mask = 0, assign = 0;
    for (int i = 0; i < n; ++i) {
        char ch = s[size_t(i)];
        if (ch == '*') continue;
        if (ch != '+' && ch != '-') throw std::invalid_argument("parse_subcube: bad character");
        mask |= uint64_t(1) << i;
        if (ch == '-') assign |= uint64_t(1) << i;
    }
    return Subcube{CoordSet{n, mask}, assign};
}

}  // namespace skewscope

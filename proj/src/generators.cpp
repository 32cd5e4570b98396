#include "skewscope/generators.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace skewscope {

namespace {

uint64_t low_mask(int n) { return (uint64_t(1) << n) - 1; }

// Moduli with x primitive, one per degree (standard LFSR taps).
constexpr uint64_t kPrimitivePoly[17] = {
    0,      0,      0x7,    0xb,    0x13,   0x25,    0x43,   0x89,  0x11d,
    0x211,  0x409,  0x805,  0x1053, 0x201b, 0x4443,  0x8003, 0x1100b,
};

}  // namespace

Gf2m gf_field(int l) {
    if (l < 2 || l > 16) throw std::invalid_argument("gf_field: l out of [2,16]");
    return Gf2m{l, kPrimitivePoly[l], (uint64_t(1) << l) - 1};
}

uint64_t gf_add(uint64_t a, uint64_t b) { return a ^ b; }

uint64_t gf_mul(const Gf2m& f, uint64_t a, uint64_t b) {
    uint64_t acc = 0;
    uint64_t top = uint64_t(1) << f.l;
    while (b) {
        if (b & 1) acc ^= a;
        b >>= 1;
        a <<= 1;
        if (a & top) a ^= f.poly;
    }
    return acc;
}

uint64_t gf_pow(const Gf2m& f, uint64_t a, uint64_t e) {
    uint64_t acc = 1;
    while (e) {
        if (e & 1) acc = gf_mul(f, acc, a);
        a = gf_mul(f, a, a);
        e >>= 1;
    }
    return acc;
}

uint64_t gf_inv(const Gf2m& f, uint64_t a) {
    if (a == 0) throw std::invalid_argument("gf_inv: zero element");
    return gf_pow(f, a, f.order - 1);
}

bool gf_x_primitive(const Gf2m& f) {
    uint64_t v = 2;
    for (uint64_t i = 1; i < f.order; ++i) {
        if (v == 1) return false;
        v = gf_mul(f, v, 2);
    }
    return v == 1;
}

BchSpec BchSpec::make(int l, int e) {
    Gf2m f = gf_field(l);
    if (!gf_x_primitive(f)) throw std::logic_error("bch: tabled modulus lost primitivity");
    int n = int(f.order);
    int rows = e * l + 1;
    if (e < 1 || rows >= n) throw std::invalid_argument("bch: e out of range for this l");
    BchSpec spec{l, e, n, rows, {}};
    spec.h.assign(size_t(rows), 0);
    for (int b = 1; b <= e; ++b) {
        uint64_t exp = uint64_t(2 * b - 1);
        for (int j = 0; j < n; ++j) {
            uint64_t el = gf_pow(f, 2, (exp * uint64_t(j)) % f.order);
            for (int r = 0; r < l; ++r)
                if ((el >> r) & 1) spec.h[size_t((b - 1) * l + r)] |= uint64_t(1) << j;
        }
    }
    spec.h[size_t(rows - 1)] = low_mask(n);
    // Rank check by elimination on row copies.
    std::vector<uint64_t> rr = spec.h;
    int rank = 0;
    for (int col = 0; col < n && rank < rows; ++col) {
        uint64_t bit = uint64_t(1) << col;
        int piv = -1;
        for (int i = rank; i < rows; ++i)
            if (rr[size_t(i)] & bit) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(rr[size_t(rank)], rr[size_t(piv)]);
        for (int i = 0; i < rows; ++i)
            if (i != rank && (rr[size_t(i)] & bit)) rr[size_t(i)] ^= rr[size_t(rank)];
        ++rank;
    }
    if (rank != rows) throw std::runtime_error("bch: parity-check matrix is rank-deficient");
    return spec;
}

std::vector<uint64_t> bch_null_space_basis(const BchSpec& spec) {
    int n = spec.n, rows = spec.rows;
    std::vector<uint64_t> rr = spec.h;
    std::vector<int> pivot_col(size_t(rows), -1);
    int rank = 0;
    for (int col = 0; col < n && rank < rows; ++col) {
        uint64_t bit = uint64_t(1) << col;
        int piv = -1;
        for (int i = rank; i < rows; ++i)
            if (rr[size_t(i)] & bit) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(rr[size_t(rank)], rr[size_t(piv)]);
        for (int i = 0; i < rows; ++i)
            if (i != rank && (rr[size_t(i)] & bit)) rr[size_t(i)] ^= rr[size_t(rank)];
        pivot_col[size_t(rank)] = col;
        ++rank;
    }
    std::vector<bool> is_pivot(size_t(n), false);
    for (int i = 0; i < rank; ++i) is_pivot[size_t(pivot_col[size_t(i)])] = true;
    std::vector<uint64_t> basis;
    for (int col = 0; col < n; ++col) {
        if (is_pivot[size_t(col)]) continue;
        uint64_t v = uint64_t(1) << col;
        for (int i = 0; i < rank; ++i)
            if ((rr[size_t(i)] >> col) & 1) v |= uint64_t(1) << pivot_col[size_t(i)];
        basis.push_back(v);
    }
    return basis;
}

uint64_t count_min_weight_codewords(const BchSpec& spec) {
    std::vector<uint64_t> basis = bch_null_space_basis(spec);
    int dim = int(basis.size());
    if (dim > 26) throw std::invalid_argument("count_min_weight: null-space dimension above 26");
    int d = 2 * spec.e + 2;
    uint64_t count = 0;
    uint64_t word = 0;
    // Gray-code walk over all combinations.
    for (uint64_t g = 1; g < (uint64_t(1) << dim); ++g) {
        word ^= basis[size_t(std::countr_zero(g))];
        int w = popcount(word);
        if (w < d) throw std::runtime_error("count_min_weight: word below design distance");
        if (w == d) ++count;
    }
    return count;
}

ExplicitMeasure gen_subcube_uniform(int n, const Subcube& c) {
    if (c.n() != n) throw std::invalid_argument("gen_subcube_uniform: dimension mismatch");
    Eigen::ArrayXd d = Eigen::ArrayXd::Zero(Eigen::Index(uint64_t(1) << n));
    double val = std::ldexp(1.0, c.codim());
    uint64_t free = ~c.fixed.mask & low_mask(n);
    for (uint64_t w = 0; w < (uint64_t(1) << (n - c.codim())); ++w)
        d[Eigen::Index(c.assignment | scatter_bits(w, free))] = val;
    return ExplicitMeasure(n, std::move(d));
}

Sampler subcube_sampler(int n, const Subcube& c, uint64_t seed) {
    if (c.n() != n) throw std::invalid_argument("subcube_sampler: dimension mismatch");
    CounterRng rng{splitmix64(seed)};
    uint64_t free = ~c.fixed.mask & low_mask(n);
    uint64_t assignment = c.assignment;
    Sampler s{n, seed, {}};
    s.draw = [rng, free, assignment](uint64_t i) { return assignment | (rng.word(i) & free); };
    return s;
}

ExplicitMeasure gen_tribes(int k, int t) {
    if (k < 1 || t < 1 || k * t > kMaxExplicitN)
        throw std::invalid_argument("gen_tribes: k*t out of range");
    int n = k * t;
    uint64_t block = low_mask(t);
    double unit = std::ldexp(1.0, t) / double(k);
    Eigen::ArrayXd d(Eigen::Index(uint64_t(1) << n));
    for (uint64_t x = 0; x < (uint64_t(1) << n); ++x) {
        int ones = 0;
        for (int i = 0; i < k; ++i)
            if (((x >> (i * t)) & block) == 0) ++ones;
        d[Eigen::Index(x)] = unit * double(ones);
    }
    return ExplicitMeasure(n, std::move(d));
}

Sampler tribes_sampler(int k, int t, uint64_t seed) {
    if (k < 1 || t < 1 || k * t > 63) throw std::invalid_argument("tribes_sampler: k*t out of range");
    int n = k * t;
    CounterRng rng{splitmix64(seed)};
    uint64_t block = low_mask(t);
    Sampler s{n, seed, {}};
    s.draw = [rng, k, t, block, n](uint64_t i) {
        uint64_t star = rng.below(2 * i, uint64_t(k));
        uint64_t x = rng.word(2 * i + 1) & low_mask(n);
        return x & ~(block << (star * uint64_t(t)));
    };
    return s;
}

ExplicitMeasure gen_noisy_parity(int n, const CoordSet& s, double eta) {
    if (s.n != n || s.mask == 0) throw std::invalid_argument("gen_noisy_parity: bad parity set");
    if (n + 1 > kMaxExplicitN) throw std::invalid_argument("gen_noisy_parity: n+1 out of range");
    if (!(eta >= 0.0 && eta <= 0.5)) throw std::invalid_argument("gen_noisy_parity: eta out of [0,0.5]");
    Eigen::ArrayXd d(Eigen::Index(uint64_t(1) << (n + 1)));
    uint64_t label = uint64_t(1) << n;
    for (uint64_t x = 0; x < (uint64_t(1) << (n + 1)); ++x) {
        int want = parity(x & s.mask);
        int got = int((x & label) != 0);
        d[Eigen::Index(x)] = (want == got) ? 2.0 * (1.0 - eta) : 2.0 * eta;
    }
    return ExplicitMeasure(n + 1, std::move(d));
}

Sampler noisy_parity_sampler(int n, const CoordSet& s, double eta, uint64_t seed) {
    if (s.n != n || s.mask == 0) throw std::invalid_argument("noisy_parity_sampler: bad parity set");
    if (n + 1 > 63) throw std::invalid_argument("noisy_parity_sampler: n out of range");
    CounterRng rng{splitmix64(seed)};
    uint64_t mask = s.mask;
    Sampler out{n + 1, seed, {}};
    out.draw = [rng, mask, n, eta](uint64_t i) {
        uint64_t x = rng.word(2 * i) & low_mask(n);
        int bit = parity(x & mask) ^ int(rng.uniform(2 * i + 1) < eta);
        return x | (uint64_t(bit) << n);
    };
    return out;
}

Subcube parity_cube(int n, const CoordSet& s, uint64_t z, int sign) {
    if (s.n != n) throw std::invalid_argument("parity_cube: dimension mismatch");
    if (z & ~s.mask) throw std::invalid_argument("parity_cube: assignment outside S");
    if (sign != 1 && sign != -1) throw std::invalid_argument("parity_cube: sign must be +-1");
    uint64_t label = uint64_t(1) << n;
    int bit = parity(z) ^ (sign < 0 ? 1 : 0);
    return Subcube{CoordSet{n + 1, s.mask | label}, z | (uint64_t(bit) << n)};
}

ExplicitMeasure gen_dual_bch(const BchSpec& spec) {
    if (spec.n > kMaxExplicitN) throw std::invalid_argument("gen_dual_bch: n out of range");
    Eigen::ArrayXd d = Eigen::ArrayXd::Zero(Eigen::Index(uint64_t(1) << spec.n));
    double val = std::ldexp(1.0, spec.n - spec.rows);
    uint64_t word = 0;
    d[0] = val;
    for (uint64_t g = 1; g < (uint64_t(1) << spec.rows); ++g) {
        word ^= spec.h[size_t(std::countr_zero(g))];
        d[Eigen::Index(word)] = val;
    }
    return ExplicitMeasure(spec.n, std::move(d));
}

Sampler dual_bch_sampler(const BchSpec& spec, uint64_t seed) {
    CounterRng rng{splitmix64(seed)};
    std::vector<uint64_t> rows = spec.h;
    Sampler s{spec.n, seed, {}};
    s.draw = [rng, rows](uint64_t i) {
        uint64_t combo = rng.word(i) & ((uint64_t(1) << rows.size()) - 1);
        uint64_t x = 0;
        while (combo) {
            x ^= rows[size_t(std::countr_zero(combo))];
            combo &= combo - 1;
        }
        return x;
    };
    return s;
}

ExplicitMeasure gen_random_sparse(int n, uint64_t support, uint64_t seed) {
    if (n < 1 || n > kMaxExplicitN) throw std::invalid_argument("gen_random_sparse: n out of range");
    uint64_t size = uint64_t(1) << n;
    if (support < 1 || support > size) throw std::invalid_argument("gen_random_sparse: bad support size");
    // Floyd's sampling: support distinct points.
    std::unordered_set<uint64_t> chosen;
    RngStream rng(seed);
    for (uint64_t j = size - support; j < size; ++j) {
        uint64_t t = rng.below(j + 1);
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    Eigen::ArrayXd d = Eigen::ArrayXd::Zero(Eigen::Index(size));
    double val = double(size) / double(support);
    for (uint64_t p : chosen) d[Eigen::Index(p)] = val;
    return ExplicitMeasure(n, std::move(d));
}

}  // namespace skewscope

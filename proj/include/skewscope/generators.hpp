#pragma once

#include <cstdint>
#include <vector>

#include "skewscope/measure.hpp"

namespace skewscope {

// GF(2^l) with a fixed primitive modulus per l; alpha = x (encoded 2) is a
// primitive element for every tabled modulus.
struct Gf2m {
    int l = 0;
    uint64_t poly = 0;   // modulus including the leading bit
    uint64_t order = 0;  // 2^l - 1
};

Gf2m gf_field(int l);  // l in [2, 16]
uint64_t gf_add(uint64_t a, uint64_t b);
uint64_t gf_mul(const Gf2m& f, uint64_t a, uint64_t b);
uint64_t gf_pow(const Gf2m& f, uint64_t a, uint64_t e);
uint64_t gf_inv(const Gf2m& f, uint64_t a);
// Multiplicative order of x equals 2^l - 1 (checked exhaustively).
bool gf_x_primitive(const Gf2m& f);

// Parity-check matrix H of the [n = 2^l - 1, n - e*l - 1, 2e + 2] code:
// e blocks of l rows (bit expansions of alpha^{(2b-1) j} across columns j)
// plus an all-ones row. Rows are bitmasks over the n columns.
struct BchSpec {
    int l = 0;
    int e = 0;
    int n = 0;
    int rows = 0;  // e*l + 1, verified = rank(H)
    std::vector<uint64_t> h;

    static BchSpec make(int l, int e);
};

// Basis of the null space {c : H c = 0 over GF(2)}; dimension n - rows.
std::vector<uint64_t> bch_null_space_basis(const BchSpec& spec);

// Number of codewords of weight exactly 2e + 2, by exhaustive enumeration of
// the null space (dimension <= 26). Errors if a nonzero word lighter than the
// design distance shows up.
uint64_t count_min_weight_codewords(const BchSpec& spec);

// Uniform measure on a subcube: density 2^codim inside, 0 outside.
ExplicitMeasure gen_subcube_uniform(int n, const Subcube& c);
Sampler subcube_sampler(int n, const Subcube& c, uint64_t seed);

// Tribes density: n = k*t, blocks of t coordinates; block i occupies
// [i*t, (i+1)*t). tau(x) = (2^t / k) * #all-plus-one blocks.
ExplicitMeasure gen_tribes(int k, int t);
Sampler tribes_sampler(int k, int t, uint64_t seed);

// Noisy parity on n+1 coordinates: x uniform, label coordinate n carries
// chi_S(x) flipped with probability eta. Density 2(1-eta) on agreement,
// 2*eta on disagreement.
ExplicitMeasure gen_noisy_parity(int n, const CoordSet& s, double eta);
Sampler noisy_parity_sampler(int n, const CoordSet& s, double eta, uint64_t seed);

// The codim-(|S|+1) cube fixing S to the assignment z and the label to
// sign * chi_S(z); sign +1 or -1.
Subcube parity_cube(int n, const CoordSet& s, uint64_t z, int sign);

// Uniform over the row space of H (2^rows points).
ExplicitMeasure gen_dual_bch(const BchSpec& spec);
Sampler dual_bch_sampler(const BchSpec& spec, uint64_t seed);

// Uniform over `support` points drawn without replacement.
ExplicitMeasure gen_random_sparse(int n, uint64_t support, uint64_t seed);

}  // namespace skewscope

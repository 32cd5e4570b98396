#pragma once

#include <unordered_map>

#include "skewscope/fourier.hpp"
#include "skewscope/measure.hpp"

namespace skewscope {

struct CoeffEntry {
    CoordSet set;
    double value = 0.0;
    bool sampled = false;
    double sample_error = 0.0;
};

struct CoeffList {
    int n = 0;
    int k = 0;
    double rho = 0.0;
    enum class Guarantee { exact, whp } guarantee = Guarantee::exact;
    std::vector<CoeffEntry> entries;

    bool contains(uint64_t mask) const;
    void sort_canonical();  // by |S|, then mask
};

// Exact list {S : |S| <= k, |psi_hat(S)| >= rho}.
CoeffList find_heavy_exact(const ExplicitMeasure& psi, int k, double rho);
CoeffList find_heavy_exact(const Spectrum& spec, int k, double rho);

// +-1 vectors of common length d, bit-packed (bit set <=> entry -1).
struct SignVectors {
    uint64_t d = 0;
    std::vector<std::vector<uint64_t>> rows;

    size_t words() const { return size_t((d + 63) / 64); }
    size_t count() const { return rows.size(); }
    void push_pm1(const std::vector<int>& v);
    int entry(size_t row, uint64_t i) const;
};

struct CorrPair {
    size_t i = 0;
    size_t j = 0;
    double corr = 0.0;
};

enum class CorrBackend { exact_pairwise, blocked_product };

// All pairs with <v1,v2>/d >= rho_prime (signed). tau is the contract floor
// below which extras must not appear; both backends threshold exactly at
// rho_prime, so they agree pairwise.
std::vector<CorrPair> find_corr(const SignVectors& v1, const SignVectors& v2, double rho_prime,
                                double tau, CorrBackend backend = CorrBackend::exact_pairwise);

struct FfcParams {
    int n = 0;
    int k = 0;
    double rho = 0.0;
    double lambda = 0.0;
    double tau = 0.0;
    uint64_t d = 0;
    int rounds = 0;
    uint64_t seed = 0;

    // tau = (rho/2)^{1/lambda}; d = ceil(32 k ln n / tau^2);
    // rounds = ceil(16 k^{3/2} ln n); both clamped to >= 1.
    static FfcParams derive(int n, int k, double rho, double lambda, uint64_t seed);
};

// Low-degree heavy coefficients from samples: per round a random bipartition,
// chi vectors on each side, correlation search at rho/2, union of Q u R over
// rounds. Output is deduplicated and re-estimated on fresh samples; entries
// keep |estimate| >= 3 rho / 4. Both signs of coefficient are found.
CoeffList ffc(const Sampler& src, const FfcParams& params,
              CorrBackend backend = CorrBackend::exact_pairwise, int workers = 1);
// Uses the first d points for the rounds and the next d for re-estimation.
CoeffList ffc(const SampleSet& samples, const FfcParams& params,
              CorrBackend backend = CorrBackend::exact_pairwise, int workers = 1);

// Superset-edge graph over L: edge T -> S for each T subseteq S in L,
// out-neighbors of T partitioned by |S \ T|.
struct CoeffGraph {
    int n = 0;
    int k = 0;
    std::vector<uint64_t> members;
    std::unordered_map<uint64_t, std::vector<std::vector<uint32_t>>> out;
    size_t edges = 0;
};

CoeffGraph preprocess(const CoeffList& l);

struct DeduceAccess {
    const Spectrum* spectrum = nullptr;  // exact evaluation
    const SampleSet* samples = nullptr;  // conditional sample means
    double delta = 1e-9;                 // per-estimate failure probability (sampled)
};

// Coefficients of psi|_C at sets S' = S \ J reachable in the graph with
// |S \ T| <= k - |J|. Exact access keeps |value| >= tau; sampled access keeps
// |estimate| >= 3 tau / 4. Requires G built from L containing every
// |psi_hat| >= tau / 4^k.
CoeffList deduce_subcube_coeffs(const CoeffGraph& g, const Subcube& c, double tau,
                                const DeduceAccess& access);

struct GlResult {
    CoeffList list;
    uint64_t queries_used = 0;
    uint64_t budget = 0;
    bool budget_exceeded = false;
};

// Kushilevitz-Mansour bucket recursion over coordinate prefixes 0..n-1.
// Weights estimated to accuracy rho^2/4 by the two-point identity with a
// shared pool per depth; recurse into buckets with estimate >= rho^2/2; at the
// leaves keep |direct estimate| >= rho/2.
GlResult goldreich_levin(const QueryOracle& oracle, double rho, double t, double delta,
                         uint64_t seed);

// Test mode: exact bucket weights and exact leaf coefficients from a spectrum.
GlResult goldreich_levin_exact_buckets(const Spectrum& spec, double rho);

}  // namespace skewscope

#include "skewscope/heavy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <unordered_set>

namespace skewscope {

namespace {

uint64_t low_mask(int n) { return (uint64_t(1) << n) - 1; }

bool canonical_before(const CoeffEntry& a, const CoeffEntry& b) {
    int pa = popcount(a.set.mask), pb = popcount(b.set.mask);
    if (pa != pb) return pa < pb;
    return a.set.mask < b.set.mask;
}

// Masks of all subsets of `pool` with size <= cap, empty set included.
std::vector<uint64_t> subsets_up_to(uint64_t pool, int cap) {
    int bits = popcount(pool);
    std::vector<uint64_t> out;
    for (int s = 0; s <= std::min(cap, bits); ++s)
        for_each_mask_of_size(bits, s, [&](uint64_t w) { out.push_back(scatter_bits(w, pool)); });
    return out;
}

}  // namespace

bool CoeffList::contains(uint64_t mask) const {
    for (const auto& e : entries)
        if (e.set.mask == mask) return true;
    return false;
}

void CoeffList::sort_canonical() {
    std::sort(entries.begin(), entries.end(), canonical_before);
}

CoeffList find_heavy_exact(const Spectrum& spec, int k, double rho) {
    if (k < 0 || k > spec.n) throw std::invalid_argument("find_heavy_exact: k out of range");
    if (!(rho > 0.0)) throw std::invalid_argument("find_heavy_exact: rho must be positive");
    CoeffList out;
    out.n = spec.n;
    out.k = k;
    out.rho = rho;
    out.guarantee = CoeffList::Guarantee::exact;
    uint64_t size = uint64_t(1) << spec.n;
    for (uint64_t s = 0; s < size; ++s)
        if (popcount(s) <= k && std::abs(spec(s)) >= rho)
            out.entries.push_back({CoordSet{spec.n, s}, spec(s), false, 0.0});
    out.sort_canonical();
    return out;
}

CoeffList find_heavy_exact(const ExplicitMeasure& psi, int k, double rho) {
    return find_heavy_exact(wht(psi), k, rho);
}

void SignVectors::push_pm1(const std::vector<int>& v) {
    if (d == 0) d = uint64_t(v.size());
    if (uint64_t(v.size()) != d) throw std::invalid_argument("sign vectors: length mismatch");
    std::vector<uint64_t> packed(words(), 0);
    for (uint64_t i = 0; i < d; ++i) {
        if (v[size_t(i)] != 1 && v[size_t(i)] != -1)
            throw std::invalid_argument("sign vectors: entries must be +-1");
        if (v[size_t(i)] == -1) packed[size_t(i >> 6)] |= uint64_t(1) << (i & 63);
    }
    rows.push_back(std::move(packed));
}

int SignVectors::entry(size_t row, uint64_t i) const {
    return ((rows[row][size_t(i >> 6)] >> (i & 63)) & 1) ? -1 : 1;
}

std::vector<CorrPair> find_corr(const SignVectors& v1, const SignVectors& v2, double rho_prime,
                                double tau, CorrBackend backend) {
    if (!(tau > 0.0) || rho_prime < tau) throw std::invalid_argument("find_corr: need rho' >= tau > 0");
    if (v1.d != v2.d) throw std::invalid_argument("find_corr: vector length mismatch");
    uint64_t d = v1.d;
    std::vector<CorrPair> out;
    if (backend == CorrBackend::exact_pairwise) {
        size_t w = v1.words();
        for (size_t i = 0; i < v1.count(); ++i) {
            for (size_t j = 0; j < v2.count(); ++j) {
                uint64_t ham = 0;
                for (size_t q = 0; q < w; ++q) ham += uint64_t(popcount(v1.rows[i][q] ^ v2.rows[j][q]));
                double corr = double(int64_t(d) - 2 * int64_t(ham)) / double(d);
                if (corr >= rho_prime) out.push_back({i, j, corr});
            }
        }
        return out;
    }
    // Dense product backend: +-1 sums are integer-exact in float below 2^24.
    if (d >= (uint64_t(1) << 24)) throw std::invalid_argument("find_corr: blocked backend capped at d < 2^24");
    Eigen::MatrixXf a(Eigen::Index(v1.count()), Eigen::Index(d));
    Eigen::MatrixXf b(Eigen::Index(v2.count()), Eigen::Index(d));
    for (size_t i = 0; i < v1.count(); ++i)
        for (uint64_t q = 0; q < d; ++q) a(Eigen::Index(i), Eigen::Index(q)) = float(v1.entry(i, q));
    for (size_t j = 0; j < v2.count(); ++j)
        for (uint64_t q = 0; q < d; ++q) b(Eigen::Index(j), Eigen::Index(q)) = float(v2.entry(j, q));
    Eigen::MatrixXf g = a * b.transpose();
    for (size_t i = 0; i < v1.count(); ++i)
        for (size_t j = 0; j < v2.count(); ++j) {
            double corr = double(g(Eigen::Index(i), Eigen::Index(j))) / double(d);
            if (corr >= rho_prime) out.push_back({i, j, corr});
        }
    return out;
}

FfcParams FfcParams::derive(int n, int k, double rho, double lambda, uint64_t seed) {
    if (n < 2 || n > 63) throw std::invalid_argument("ffc: n out of range");
    if (k < 1 || k > n) throw std::invalid_argument("ffc: k out of range");
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("ffc: rho out of (0,1]");
    if (!(lambda > 0.0 && lambda <= 1.0)) throw std::invalid_argument("ffc: lambda out of (0,1]");
    FfcParams p;
    p.n = n;
    p.k = k;
    p.rho = rho;
    p.lambda = lambda;
    p.seed = seed;
    p.tau = std::pow(rho / 2.0, 1.0 / lambda);
    double ln_n = std::log(double(n));
    p.d = std::max<uint64_t>(1, uint64_t(std::ceil(32.0 * k * ln_n / (p.tau * p.tau))));
    p.rounds = std::max(1, int(std::ceil(16.0 * std::pow(double(k), 1.5) * ln_n)));
    return p;
}

namespace {

// Per-coordinate bit columns: column[i] holds bit i of every sample.
std::vector<std::vector<uint64_t>> transpose_samples(const std::vector<uint64_t>& pts, int n) {
    size_t words = (pts.size() + 63) / 64;
    std::vector<std::vector<uint64_t>> cols(size_t(n), std::vector<uint64_t>(words, 0));
    for (size_t i = 0; i < pts.size(); ++i) {
        uint64_t p = pts[i];
        while (p) {
            int b = std::countr_zero(p);
            cols[size_t(b)][i >> 6] |= uint64_t(1) << (i & 63);
            p &= p - 1;
        }
    }
    return cols;
}

SignVectors chi_vectors(const std::vector<std::vector<uint64_t>>& cols, uint64_t d,
                        const std::vector<uint64_t>& sets) {
    SignVectors v;
    v.d = d;
    size_t words = size_t((d + 63) / 64);
    for (uint64_t s : sets) {
        std::vector<uint64_t> row(words, 0);
        uint64_t m = s;
        while (m) {
            int b = std::countr_zero(m);
            const auto& col = cols[size_t(b)];
            for (size_t q = 0; q < words; ++q) row[q] ^= col[q];
            m &= m - 1;
        }
        v.rows.push_back(std::move(row));
    }
    return v;
}

SignVectors negated(const SignVectors& v) {
    SignVectors out = v;
    size_t words = v.words();
    uint64_t tail_bits = v.d & 63;
    uint64_t tail_mask = tail_bits ? ((uint64_t(1) << tail_bits) - 1) : ~uint64_t(0);
    for (auto& row : out.rows) {
        for (size_t q = 0; q < words; ++q) row[q] = ~row[q];
        row[words - 1] &= tail_mask;
    }
    return out;
}

CoeffList ffc_run(const std::vector<uint64_t>& main_pts, const std::vector<uint64_t>& fresh_pts,
                  const FfcParams& p, CorrBackend backend, int workers) {
    int n = p.n;
    auto cols = transpose_samples(main_pts, n);
    uint64_t d = uint64_t(main_pts.size());
    CounterRng master{splitmix64(p.seed)};

    std::unordered_set<uint64_t> found;
    std::mutex sink;
    std::atomic<int> next_round{0};
    auto worker = [&]() {
        for (;;) {
            int r = next_round.fetch_add(1);
            if (r >= p.rounds) return;
            CounterRng rng = master.stream(uint64_t(r) + 1);
            uint64_t n1 = rng.word(0) & low_mask(n);
            uint64_t n2 = ~n1 & low_mask(n);
            std::vector<uint64_t> s1 = subsets_up_to(n1, (p.k + 1) / 2);
            std::vector<uint64_t> s2 = subsets_up_to(n2, p.k / 2);
            SignVectors v1 = chi_vectors(cols, d, s1);
            SignVectors v2 = chi_vectors(cols, d, s2);
            SignVectors v2n = negated(v2);
            std::vector<uint64_t> local;
            for (const auto& pr : find_corr(v1, v2, p.rho / 2.0, p.tau, backend))
                local.push_back(s1[pr.i] | s2[pr.j]);
            for (const auto& pr : find_corr(v1, v2n, p.rho / 2.0, p.tau, backend))
                local.push_back(s1[pr.i] | s2[pr.j]);
            std::lock_guard<std::mutex> lk(sink);
            for (uint64_t m : local) found.insert(m);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Fresh-sample re-estimation filter.
    CoeffList out;
    out.n = n;
    out.k = p.k;
    out.rho = p.rho;
    out.guarantee = CoeffList::Guarantee::whp;
    double m = double(fresh_pts.size());
    double err = 2.0 * std::sqrt(std::log(2.0 / default_coeff_delta(n, p.k)) / (2.0 * m));
    std::vector<uint64_t> masks(found.begin(), found.end());
    std::sort(masks.begin(), masks.end());
    for (uint64_t s : masks) {
        long long acc = 0;
        for (uint64_t x : fresh_pts) acc += parity_sign(s & x);
        double est = double(acc) / m;
        if (std::abs(est) >= 0.75 * p.rho)
            out.entries.push_back({CoordSet{n, s}, est, true, err});
    }
    out.sort_canonical();
    return out;
}

}  // namespace

CoeffList ffc(const Sampler& src, const FfcParams& params, CorrBackend backend, int workers) {
    if (src.n != params.n) throw std::invalid_argument("ffc: sampler dimension mismatch");
    std::vector<uint64_t> main_pts(size_t(params.d)), fresh_pts(size_t(params.d));
    for (uint64_t i = 0; i < params.d; ++i) main_pts[size_t(i)] = src.draw(i);
    for (uint64_t i = 0; i < params.d; ++i) fresh_pts[size_t(i)] = src.draw(params.d + i);
    return ffc_run(main_pts, fresh_pts, params, backend, workers);
}

CoeffList ffc(const SampleSet& samples, const FfcParams& params, CorrBackend backend, int workers) {
    if (samples.n != params.n) throw std::invalid_argument("ffc: sample dimension mismatch");
    if (samples.size() < size_t(params.d)) throw std::invalid_argument("ffc: need at least d samples");
    std::vector<uint64_t> main_pts(samples.points.begin(), samples.points.begin() + long(params.d));
    // Remaining points feed the re-estimation filter; reuse the main block
    // when the set has no spare tail.
    std::vector<uint64_t> fresh_pts;
    if (samples.size() >= size_t(params.d) + 64)
        fresh_pts.assign(samples.points.begin() + long(params.d), samples.points.end());
    else
        fresh_pts = main_pts;
    return ffc_run(main_pts, fresh_pts, params, backend, workers);
}

CoeffGraph preprocess(const CoeffList& l) {
    CoeffGraph g;
    g.n = l.n;
    g.k = l.k;
    std::unordered_set<uint64_t> seen;
    for (const auto& e : l.entries)
        if (seen.insert(e.set.mask).second) g.members.push_back(e.set.mask);
    std::sort(g.members.begin(), g.members.end());
    for (uint32_t idx = 0; idx < g.members.size(); ++idx) {
        uint64_t s = g.members[idx];
        for_each_submask(s, [&](uint64_t t) {
            auto& lists = g.out[t];
            if (lists.empty()) lists.resize(size_t(g.k) + 1);
            int i = popcount(s & ~t);
            lists[size_t(i)].push_back(idx);
            ++g.edges;
        });
    }
    return g;
}

CoeffList deduce_subcube_coeffs(const CoeffGraph& g, const Subcube& c, double tau,
                                const DeduceAccess& access) {
    if (g.n != c.n()) throw std::invalid_argument("deduce: dimension mismatch");
    if (!(tau > 0.0)) throw std::invalid_argument("deduce: tau must be positive");
    if (!access.spectrum && !access.samples) throw std::invalid_argument("deduce: no access route");
    int j = c.codim();
    int cap = g.k - j;
    if (cap < 0) throw std::invalid_argument("deduce: codim exceeds k");

    std::unordered_set<uint64_t> candidates;
    for_each_submask(c.fixed.mask, [&](uint64_t t) {
        auto it = g.out.find(t);
        if (it == g.out.end()) return;
        for (int i = 0; i <= cap; ++i)
            for (uint32_t idx : it->second[size_t(i)])
                candidates.insert(g.members[idx] & ~c.fixed.mask);
    });
    std::vector<uint64_t> masks(candidates.begin(), candidates.end());
    std::sort(masks.begin(), masks.end());

    CoeffList out;
    out.n = g.n;
    out.k = cap;
    out.rho = tau;
    if (access.spectrum) {
        const Spectrum& spec = *access.spectrum;
        double ip = 1.0 + skew_from_spectrum(spec, c);
        if (ip <= 0.0) throw ZeroMassError("deduce: zero-mass subcube");
        out.guarantee = CoeffList::Guarantee::exact;
        for (uint64_t s : masks) {
            if (popcount(s) > cap) continue;
            double v = restricted_coeff(spec, c, CoordSet{g.n, s}, ip);
            if (std::abs(v) >= tau) out.entries.push_back({CoordSet{g.n, s}, v, false, 0.0});
        }
    } else {
        const SampleSet& samples = *access.samples;
        if (samples.n != g.n) throw std::invalid_argument("deduce: sample dimension mismatch");
        std::vector<uint64_t> inside;
        for (uint64_t x : samples.points)
            if ((x & c.fixed.mask) == c.assignment) inside.push_back(x);
        if (inside.empty()) throw ZeroMassError("deduce: no samples in subcube");
        out.guarantee = CoeffList::Guarantee::whp;
        double m = double(inside.size());
        double err = 2.0 * std::sqrt(std::log(2.0 / access.delta) / (2.0 * m));
        for (uint64_t s : masks) {
            if (popcount(s) > cap) continue;
            long long acc = 0;
            for (uint64_t x : inside) acc += parity_sign(s & x);
            double est = double(acc) / m;
            if (std::abs(est) >= 0.75 * tau)
                out.entries.push_back({CoordSet{g.n, s}, est, true, err});
        }
    }
    out.sort_canonical();
    return out;
}

namespace {

struct GlEstimator {
    // Returns the estimated bucket weights of `buckets` at depth `depth`
    // (prefix [0..depth)), spending from the query budget.
    virtual std::vector<double> weights(int depth, const std::vector<uint64_t>& buckets) = 0;
    virtual double leaf_value(uint64_t set) = 0;
    virtual double leaf_error() const = 0;
    virtual uint64_t used() const = 0;
    virtual ~GlEstimator() = default;
};

struct SampledGl final : GlEstimator {
    const QueryOracle* oracle;
    int n;
    uint64_t m_w, m_c;
    CounterRng rng;
    uint64_t queries = 0;

    std::vector<double> weights(int depth, const std::vector<uint64_t>& buckets) override {
        uint64_t prefix = (uint64_t(1) << depth) - 1;
        uint64_t suffix = low_mask(n) & ~prefix;
        CounterRng pool = rng.stream(uint64_t(depth));
        std::vector<double> sums(buckets.size(), 0.0);
        for (uint64_t i = 0; i < m_w; ++i) {
            uint64_t u = pool.word(3 * i) & prefix;
            uint64_t u2 = pool.word(3 * i + 1) & prefix;
            uint64_t w = pool.word(3 * i + 2) & suffix;
            double p = oracle->density(u | w) * oracle->density(u2 | w);
            uint64_t du = u ^ u2;
            for (size_t b = 0; b < buckets.size(); ++b)
                sums[b] += parity(buckets[b] & du) ? -p : p;
        }
        queries += 2 * m_w;
        for (double& s : sums) s /= double(m_w);
        return sums;
    }

    double leaf_value(uint64_t set) override {
        CounterRng pool = rng.stream(uint64_t(n) + 1 + set);
        double acc = 0.0;
        for (uint64_t i = 0; i < m_c; ++i) {
            uint64_t x = pool.word(i) & low_mask(n);
            acc += oracle->density(x) * parity_sign(set & x);
        }
        queries += m_c;
        return acc / double(m_c);
    }

    double leaf_error() const override { return rho_quarter; }
    uint64_t used() const override { return queries; }
    double rho_quarter = 0.0;
};

struct ExactGl final : GlEstimator {
    const Spectrum* spec;

    std::vector<double> weights(int depth, const std::vector<uint64_t>& buckets) override {
        uint64_t prefix = (uint64_t(1) << depth) - 1;
        std::unordered_map<uint64_t, double> acc;
        for (uint64_t b : buckets) acc[b] = 0.0;
        uint64_t size = uint64_t(1) << spec->n;
        for (uint64_t s = 0; s < size; ++s) {
            auto it = acc.find(s & prefix);
            if (it != acc.end()) it->second += (*spec)(s) * (*spec)(s);
        }
        std::vector<double> out;
        out.reserve(buckets.size());
        for (uint64_t b : buckets) out.push_back(acc[b]);
        return out;
    }

    double leaf_value(uint64_t set) override { return (*spec)(set); }
    double leaf_error() const override { return 0.0; }
    uint64_t used() const override { return 0; }
};

GlResult gl_recursion(GlEstimator& est, int n, double rho, uint64_t budget) {
    GlResult res;
    res.budget = budget;
    res.list.n = n;
    res.list.k = n;
    res.list.rho = rho;
    std::vector<uint64_t> alive{0};
    for (int depth = 1; depth <= n && !alive.empty(); ++depth) {
        std::vector<uint64_t> buckets;
        buckets.reserve(alive.size() * 2);
        for (uint64_t a : alive) {
            buckets.push_back(a);
            buckets.push_back(a | (uint64_t(1) << (depth - 1)));
        }
        if (budget && est.used() > budget) {
            res.budget_exceeded = true;
            res.queries_used = est.used();
            return res;
        }
        std::vector<double> w = est.weights(depth, buckets);
        alive.clear();
        for (size_t i = 0; i < buckets.size(); ++i)
            if (w[i] >= rho * rho / 2.0) alive.push_back(buckets[i]);
    }
    for (uint64_t s : alive) {
        if (budget && est.used() > budget) {
            res.budget_exceeded = true;
            break;
        }
        double v = est.leaf_value(s);
        if (std::abs(v) >= rho / 2.0)
            res.list.entries.push_back({CoordSet{n, s}, v, budget != 0, est.leaf_error()});
    }
    res.queries_used = est.used();
    res.list.sort_canonical();
    return res;
}

}  // namespace

GlResult goldreich_levin(const QueryOracle& oracle, double rho, double t, double delta,
                         uint64_t seed) {
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("gl: rho out of (0,1]");
    if (t < 1.0) throw std::invalid_argument("gl: inorm bound below 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("gl: delta out of (0,1)");
    int n = oracle.n;
    double delta_est = delta * rho * rho / (4.0 * n * t * t);
    double ln_term = std::log(2.0 / delta_est);
    double eps_w = rho * rho / 4.0;
    double eps_c = rho / 4.0;
    SampledGl est;
    est.oracle = &oracle;
    est.n = n;
    est.m_w = uint64_t(std::ceil(8.0 * t * t * ln_term / (eps_w * eps_w)));
    est.m_c = uint64_t(std::ceil(2.0 * t * t * ln_term / (eps_c * eps_c)));
    est.rho_quarter = eps_c;
    est.rng = CounterRng{splitmix64(seed)};
    double cap = std::ceil(4.0 * n * t * t / (rho * rho));
    uint64_t budget = uint64_t(cap) * 2 * est.m_w + uint64_t(std::ceil(4.0 * t * t / (rho * rho))) * est.m_c;
    return gl_recursion(est, n, rho, budget);
}

GlResult goldreich_levin_exact_buckets(const Spectrum& spec, double rho) {
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("gl: rho out of (0,1]");
    ExactGl est;
    est.spec = &spec;
    return gl_recursion(est, spec.n, rho, 0);
}

}  // namespace skewscope

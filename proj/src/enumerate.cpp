#include "skewscope/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace skewscope {

namespace {

uint64_t low_mask(int n) { return (uint64_t(1) << n) - 1; }

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

struct StateKey {
    uint64_t fixed, assign;
    bool operator==(const StateKey& o) const { return fixed == o.fixed && assign == o.assign; }
};

struct StateHash {
    size_t operator()(const StateKey& s) const {
        return size_t(splitmix64(s.fixed ^ splitmix64(s.assign)));
    }
};

bool canonical_before(const SkewReport& a, const SkewReport& b) {
    if (a.cube.fixed.mask != b.cube.fixed.mask) return a.cube.fixed.mask < b.cube.fixed.mask;
    return a.cube.assignment < b.cube.assignment;
}

}  // namespace

void SkewQuery::validate(int n) const {
    if (k < 1 || k > n) throw std::invalid_argument("query: k must be in [1, n]");
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("query: eps must be in (0, 1]");
    double cap = sign == SkewSign::positive ? std::ldexp(1.0, k) - 1.0 : 1.0;
    if (!(gamma > 0.0 && gamma <= cap)) {
        std::ostringstream os;
        os << "query: gamma must be in (0, " << cap << "] for this sign and k";
        throw std::invalid_argument(os.str());
    }
}

SkewEstimate ExactSpectrumProvider::node_skew(const Subcube& c) {
    return {skew_from_spectrum(spec_, c), 0.0, 0};
}

std::vector<uint64_t> ExactSpectrumProvider::node_sets(const Subcube& c, int k_t,
                                                       const std::vector<double>& tau_by_size,
                                                       double node_ip) {
    std::vector<uint64_t> out;
    uint64_t free = low_mask(c.n()) & ~c.fixed.mask;
    int fb = popcount(free);
    for (int s = 1; s <= std::min(k_t, fb); ++s) {
        for_each_mask_of_size(fb, s, [&](uint64_t w) {
            uint64_t mask = scatter_bits(w, free);
            double v = restricted_coeff(spec_, c, CoordSet{c.n(), mask}, node_ip);
            if (std::abs(v) >= tau_by_size[size_t(s)] - kSkewDecisionTol) out.push_back(mask);
        });
    }
    return out;
}

SkewEstimate SampleProvider::node_skew(const Subcube& c) {
    return estimate_skew(*samples_, c, delta_);
}

std::vector<uint64_t> SampleProvider::node_sets(const Subcube& c, int k_t,
                                                const std::vector<double>& tau_by_size,
                                                double /*node_ip*/) {
    std::vector<uint64_t> inside;
    for (uint64_t x : samples_->points)
        if ((x & c.fixed.mask) == c.assignment) inside.push_back(x);
    if (inside.empty()) return {};
    std::vector<uint64_t> out;
    uint64_t free = low_mask(c.n()) & ~c.fixed.mask;
    int fb = popcount(free);
    double m = double(inside.size());
    for (int s = 1; s <= std::min(k_t, fb); ++s) {
        double need = 0.75 * tau_by_size[size_t(s)];
        for_each_mask_of_size(fb, s, [&](uint64_t w) {
            uint64_t mask = scatter_bits(w, free);
            long long acc = 0;
            for (uint64_t x : inside) acc += parity_sign(mask & x);
            if (std::abs(double(acc) / m) >= need) out.push_back(mask);
        });
    }
    return out;
}

SkewEstimate DeducedProvider::node_skew(const Subcube& c) {
    if (access_.spectrum) return {skew_from_spectrum(*access_.spectrum, c), 0.0, 0};
    return estimate_skew(*access_.samples, c, access_.delta);
}

std::vector<uint64_t> DeducedProvider::node_sets(const Subcube& c, int k_t,
                                                 const std::vector<double>& tau_by_size,
                                                 double /*node_ip*/) {
    double tau_min = tau_by_size[size_t(1)];
    for (int s = 2; s <= k_t; ++s) tau_min = std::min(tau_min, tau_by_size[size_t(s)]);
    CoeffList l;
    try {
        l = deduce_subcube_coeffs(*graph_, c, tau_min, access_);
    } catch (const ZeroMassError&) {
        return {};
    }
    std::vector<uint64_t> out;
    for (const auto& e : l.entries) {
        int s = popcount(e.set.mask);
        if (s < 1 || s > k_t) continue;
        double need = e.sampled ? 0.75 * tau_by_size[size_t(s)]
                                : tau_by_size[size_t(s)] - kSkewDecisionTol;
        if (std::abs(e.value) >= need) out.push_back(e.set.mask);
    }
    return out;
}

ExactPostFilter::ExactPostFilter(const ExplicitMeasure& psi) : psi_(&psi), spec_(wht(psi)) {}

bool ExactPostFilter::qualify(const Subcube& c, const SkewQuery& q, SkewReport& out) {
    double s = skew_from_spectrum(spec_, c);
    out.cube = c;
    out.skew = s;
    out.sign = s >= 0.0 ? +1 : -1;
    out.estimated = false;
    out.est_error = 0.0;
    double bound = (1.0 - q.eps) * q.gamma + kSkewDecisionTol;
    double keep_at = q.gamma - kSkewDecisionTol;
    bool ok;
    if (q.sign == SkewSign::positive) {
        ok = s >= keep_at;
        if (ok)
            for (const Subcube& p : parents(c)) {
                double sp = skew_from_spectrum(spec_, p);
                if (q.same_sign_parents && sp <= 0.0) continue;
                if (sp > bound) { ok = false; break; }
            }
    } else {
        ok = s <= -keep_at;
        if (ok)
            for (const Subcube& p : parents(c)) {
                double sp = skew_from_spectrum(spec_, p);
                if (q.same_sign_parents && sp >= 0.0) continue;
                if (sp < -bound) { ok = false; break; }
            }
    }
    out.minimal = ok;
    return ok;
}

bool SampledPostFilter::qualify(const Subcube& c, const SkewQuery& q, SkewReport& out) {
    SkewEstimate est = estimate_skew(*samples_, c, delta_);
    out.cube = c;
    out.skew = est.value;
    out.sign = est.value >= 0.0 ? +1 : -1;
    out.estimated = true;
    out.est_error = est.half_width;
    double bound = (1.0 - q.eps) * q.gamma;
    bool ok;
    if (q.sign == SkewSign::positive) {
        ok = est.value >= q.gamma - est.half_width;
        if (ok)
            for (const Subcube& p : parents(c)) {
                SkewEstimate pe = estimate_skew(*samples_, p, delta_);
                if (q.same_sign_parents && pe.value <= 0.0) continue;
                if (pe.value > bound + pe.half_width) { ok = false; break; }
            }
    } else {
        ok = est.value <= -(q.gamma - est.half_width);
        if (ok)
            for (const Subcube& p : parents(c)) {
                SkewEstimate pe = estimate_skew(*samples_, p, delta_);
                if (q.same_sign_parents && pe.value >= 0.0) continue;
                if (pe.value < -(bound + pe.half_width)) { ok = false; break; }
            }
    }
    out.minimal = ok;
    return ok;
}

std::vector<SkewReport> brute_force_skewed(const ExplicitMeasure& psi, int k, double gamma,
                                           SkewSign sign) {
    if (k < 0 || k > psi.n()) throw std::invalid_argument("brute force: k out of range");
    if (!(gamma > 0.0)) throw std::invalid_argument("brute force: gamma must be positive");
    std::vector<SkewReport> out;
    double keep_at = gamma - kSkewDecisionTol;
    for_each_subcube(psi.n(), k, [&](const Subcube& c) {
        double s = skew(psi, c);
        bool keep = sign == SkewSign::positive ? s >= keep_at : s <= -keep_at;
        if (keep) out.push_back({c, s, s >= 0.0 ? +1 : -1, false, false, 0.0});
    });
    std::sort(out.begin(), out.end(), canonical_before);
    return out;
}

bool is_minimal(const ExplicitMeasure& psi, const Subcube& c, double gamma, double eps,
                SkewSign sign, bool same_sign_parents) {
    double bound = (1.0 - eps) * gamma + kSkewDecisionTol;
    for (const Subcube& p : parents(c)) {
        double sp = skew(psi, p);
        if (sign == SkewSign::positive) {
            if (same_sign_parents && sp <= 0.0) continue;
            if (sp > bound) return false;
        } else {
            if (same_sign_parents && sp >= 0.0) continue;
            if (sp < -bound) return false;
        }
    }
    return true;
}

std::vector<SkewReport> brute_force_minimal(const ExplicitMeasure& psi, const SkewQuery& q) {
    q.validate(psi.n());
    // Lazy parent-skew cache: parents repeat heavily across qualifying cubes.
    std::unordered_map<StateKey, double, StateHash> cache;
    auto cached_skew = [&](const Subcube& p) {
        StateKey key{p.fixed.mask, p.assignment};
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        double s = skew(psi, p);
        cache.emplace(key, s);
        return s;
    };
    double bound = (1.0 - q.eps) * q.gamma + kSkewDecisionTol;
    double keep_at = q.gamma - kSkewDecisionTol;
    std::vector<SkewReport> out;
    for_each_subcube(psi.n(), q.k, [&](const Subcube& c) {
        double s = skew(psi, c);
        bool keep = q.sign == SkewSign::positive ? s >= keep_at : s <= -keep_at;
        if (!keep) return;
        bool ok = true;
        for (const Subcube& p : parents(c)) {
            double sp = cached_skew(p);
            if (q.sign == SkewSign::positive) {
                if (q.same_sign_parents && sp <= 0.0) continue;
                if (sp > bound) { ok = false; break; }
            } else {
                if (q.same_sign_parents && sp >= 0.0) continue;
                if (sp < -bound) { ok = false; break; }
            }
        }
        if (ok) out.push_back({c, s, s >= 0.0 ? +1 : -1, true, false, 0.0});
    });
    std::sort(out.begin(), out.end(), canonical_before);
    return out;
}

namespace {

struct RecursionShared {
    CoeffProvider* provider;
    const SkewQuery* q;
    int n;
    std::mutex mu;
    std::unordered_set<StateKey, StateHash> visited;
    std::vector<Subcube> recorded;
};

// Processes one state: marks it visited, applies the record / depth / prune
// tests, and appends unexplored children. Returns false if already visited.
bool expand(RecursionShared& sh, const Subcube& c, std::vector<Subcube>& children) {
    {
        std::lock_guard<std::mutex> lk(sh.mu);
        if (!sh.visited.insert({c.fixed.mask, c.assignment}).second) return false;
    }
    const SkewQuery& q = *sh.q;
    int k_t = q.k - c.codim();
    SkewEstimate est = sh.provider->node_skew(c);
    // Sampled estimates get the midpoint record threshold; the prune test
    // keeps one-sided slack so no completable branch is cut.
    bool sampled = est.half_width > 0.0;
    double rec = q.gamma * (sampled ? 1.0 - q.eps / 2.0 : 1.0 - q.eps);
    double slack = sampled ? 0.0 : kSkewDecisionTol;
    if (q.sign == SkewSign::positive) {
        if (est.value > rec + slack) {
            std::lock_guard<std::mutex> lk(sh.mu);
            sh.recorded.push_back(c);
            return true;
        }
        if (k_t == 0) return true;
        if (1.0 + est.value + est.half_width <
            (1.0 + q.gamma) * std::ldexp(1.0, -k_t) - slack)
            return true;
    } else {
        if (est.value < -(rec + slack)) {
            std::lock_guard<std::mutex> lk(sh.mu);
            sh.recorded.push_back(c);
            return true;
        }
        if (k_t == 0) return true;
    }
    std::vector<double> tau(size_t(k_t) + 1, 0.0);
    // Conditional-skew floor at a surviving ancestor of a minimal cube:
    // positive ip ratio gives (1+gamma)/(1+(1-eps)gamma) - 1, negative
    // gives eps*gamma. Dividing by the per-size term count yields the
    // smallest coefficient magnitude the provider must surface.
    double floor_b = q.sign == SkewSign::positive
                         ? q.eps * q.gamma / (1.0 + (1.0 - q.eps) * q.gamma)
                         : q.eps * q.gamma;
    for (int s = 1; s <= k_t; ++s) tau[size_t(s)] = floor_b / (double(k_t) * binom(k_t, s));
    for (uint64_t mask : sh.provider->node_sets(c, k_t, tau, 1.0 + est.value))
        for (const Subcube& child : partition_children(c, CoordSet{sh.n, mask}))
            children.push_back(child);
    return true;
}

void run_branch(RecursionShared& sh, std::vector<Subcube> stack) {
    std::vector<Subcube> children;
    while (!stack.empty()) {
        Subcube c = stack.back();
        stack.pop_back();
        children.clear();
        expand(sh, c, children);
        stack.insert(stack.end(), children.begin(), children.end());
    }
}

}  // namespace

EnumerateResult enumerate_minimal(CoeffProvider& provider, PostFilter& filter, int n,
                                  const SkewQuery& q, int workers) {
    q.validate(n);
    RecursionShared sh;
    sh.provider = &provider;
    sh.q = &q;
    sh.n = n;

    std::vector<Subcube> frontier;
    expand(sh, full_cube(n), frontier);
    if (workers <= 1 || frontier.size() < 2) {
        run_branch(sh, std::move(frontier));
    } else {
        int w = std::min<int>(workers, int(frontier.size()));
        std::vector<std::vector<Subcube>> chunks;
        chunks.resize(size_t(w));
        for (size_t i = 0; i < frontier.size(); ++i) chunks[i % size_t(w)].push_back(frontier[i]);
        std::vector<std::thread> pool;
        for (auto& ch : chunks) pool.emplace_back([&sh, c = std::move(ch)]() mutable {
            run_branch(sh, std::move(c));
        });
        for (auto& t : pool) t.join();
    }

    EnumerateResult res;
    res.states_visited = sh.visited.size();
    res.recorded = sh.recorded.size();
    for (const Subcube& c : sh.recorded) {
        SkewReport r;
        if (filter.qualify(c, q, r)) res.cubes.push_back(r);
    }
    std::sort(res.cubes.begin(), res.cubes.end(), canonical_before);
    return res;
}

EnumerateResult fsr(const ExplicitMeasure& psi, const SkewQuery& q0, int workers) {
    SkewQuery q = q0;
    q.sign = SkewSign::positive;
    ExactSpectrumProvider provider(wht(psi));
    ExactPostFilter filter(psi);
    return enumerate_minimal(provider, filter, psi.n(), q, workers);
}

EnumerateResult fsn(const ExplicitMeasure& psi, const SkewQuery& q0, int workers) {
    SkewQuery q = q0;
    q.sign = SkewSign::negative;
    ExactSpectrumProvider provider(wht(psi));
    ExactPostFilter filter(psi);
    return enumerate_minimal(provider, filter, psi.n(), q, workers);
}

EnumerateResult fsr(const SampleSet& samples, const SkewQuery& q0, double delta, int workers) {
    SkewQuery q = q0;
    q.sign = SkewSign::positive;
    SampleProvider provider(samples, delta);
    SampledPostFilter filter(samples, delta);
    return enumerate_minimal(provider, filter, samples.n, q, workers);
}

EnumerateResult fsn(const SampleSet& samples, const SkewQuery& q0, double delta, int workers) {
    SkewQuery q = q0;
    q.sign = SkewSign::negative;
    SampleProvider provider(samples, delta);
    SampledPostFilter filter(samples, delta);
    return enumerate_minimal(provider, filter, samples.n, q, workers);
}

double fsr_top_rho(int k, double gamma, double eps) {
    // The second form is the provable conditional-skew floor the per-node
    // thresholds are built from; for gamma < 1 it dips below eps*sqrt(gamma),
    // and the top list must cover whichever is in force.
    double floor_b = eps * gamma / (1.0 + (1.0 - eps) * gamma);
    return std::min(eps * std::sqrt(gamma), floor_b) / std::pow(16.0, k);
}

double fsn_top_rho(int k, double gamma, double eps) {
    return eps * gamma / std::pow(16.0, k);
}

namespace {

EnumerateResult run_pipeline(const SampleSet& samples, SkewQuery q, const PipelineOptions& opt) {
    q.validate(samples.n);
    double rho = opt.rho_top > 0.0
                     ? opt.rho_top
                     : (q.sign == SkewSign::positive ? fsr_top_rho(q.k, q.gamma, q.eps)
                                                     : fsn_top_rho(q.k, q.gamma, q.eps));
    FfcParams params = FfcParams::derive(samples.n, q.k, rho, opt.lambda, opt.seed);
    if (params.d > opt.max_d) {
        std::ostringstream os;
        os << "pipeline: rho " << rho << " needs d = " << params.d << " samples per round (cap "
           << opt.max_d << "); raise rho via --rho-top";
        throw std::invalid_argument(os.str());
    }
    CoeffList l = ffc(samples, params, opt.backend, opt.workers);
    CoeffGraph g = preprocess(l);
    DeduceAccess access;
    access.samples = &samples;
    access.delta = opt.delta;
    DeducedProvider provider(g, access);
    SampledPostFilter filter(samples, opt.delta);
    return enumerate_minimal(provider, filter, samples.n, q, opt.workers);
}

}  // namespace

EnumerateResult fsr_pipeline(const SampleSet& samples, const SkewQuery& q0,
                             const PipelineOptions& opt) {
    SkewQuery q = q0;
    q.sign = SkewSign::positive;
    return run_pipeline(samples, q, opt);
}

EnumerateResult fsn_pipeline(const SampleSet& samples, const SkewQuery& q0,
                             const PipelineOptions& opt) {
    SkewQuery q = q0;
    q.sign = SkewSign::negative;
    return run_pipeline(samples, q, opt);
}

uint64_t recommended_sample_size(int n, int k, double gamma, double delta) {
    if (k < 1 || k > n) throw std::invalid_argument("sample size: k out of range");
    if (!(gamma > 0.0) || !(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("sample size: bad gamma or delta");
    double cubes = 0.0;
    for (int j = 0; j <= k; ++j) cubes += binom(n, j) * std::ldexp(1.0, j);
    double dp = delta / (2.0 * cubes);  // each cube tested at most twice
    double acc = std::min(gamma, std::ldexp(1.0, -k));
    return uint64_t(std::ceil(8.0 * std::pow(4.0, k) * std::log(2.0 / dp) / (acc * acc)));
}

}  // namespace skewscope

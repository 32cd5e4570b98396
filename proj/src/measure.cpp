#include "skewscope/measure.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <unordered_map>

namespace skewscope {

namespace {

uint64_t low_mask(int n) { return (uint64_t(1) << n) - 1; }

}  // namespace

ExplicitMeasure::ExplicitMeasure(int n, Eigen::ArrayXd density, bool renormalize)
    : n_(n), density_(std::move(density)) {
    if (n < 1 || n > kMaxExplicitN) throw std::invalid_argument("explicit measure: n out of range");
    if (density_.size() != Eigen::Index(uint64_t(1) << n))
        throw std::invalid_argument("explicit measure: density size != 2^n");
    if ((density_ < 0.0).any()) throw std::invalid_argument("explicit measure: negative density");
    double mean = density_.mean();
    if (renormalize) {
        if (mean <= 0.0) throw std::invalid_argument("explicit measure: zero total mass");
        density_ /= mean;
    } else if (std::abs(mean - 1.0) > kNormalizationTol) {
        throw std::invalid_argument("explicit measure: mean differs from 1 beyond tolerance");
    }
}

ExplicitMeasure ExplicitMeasure::uniform(int n) {
    if (n < 1 || n > kMaxExplicitN) throw std::invalid_argument("uniform: n out of range");
    return ExplicitMeasure(n, Eigen::ArrayXd::Ones(Eigen::Index(uint64_t(1) << n)));
}

double inner_cube(const ExplicitMeasure& psi, const Subcube& c) {
    if (psi.n() != c.n()) throw std::invalid_argument("inner_cube: dimension mismatch");
    uint64_t free = ~c.fixed.mask & low_mask(psi.n());
    int free_bits = psi.n() - c.codim();
    double sum = 0.0;
    for (uint64_t w = 0; w < (uint64_t(1) << free_bits); ++w)
        sum += psi(c.assignment | scatter_bits(w, free));
    return std::ldexp(sum, -free_bits);  // 2^{k-n} * sum over 2^{n-k} points
}

double skew(const ExplicitMeasure& psi, const Subcube& c) { return inner_cube(psi, c) - 1.0; }

SkewEstimate estimate_skew(const SampleSet& samples, const Subcube& c, double delta) {
    if (samples.n != c.n()) throw std::invalid_argument("estimate_skew: dimension mismatch");
    if (samples.points.empty()) throw std::invalid_argument("estimate_skew: empty sample set");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("estimate_skew: delta out of (0,1)");
    size_t hits = 0;
    for (uint64_t p : samples.points)
        if ((p & c.fixed.mask) == c.assignment) ++hits;
    double m = double(samples.size());
    double scale = std::ldexp(1.0, c.codim());
    SkewEstimate est;
    est.hits = hits;
    est.value = scale * (double(hits) / m) - 1.0;
    est.half_width = scale * std::sqrt(std::log(2.0 / delta) / (2.0 * m));
    return est;
}

Restriction restrict_measure(const ExplicitMeasure& psi, const Subcube& c) {
    if (psi.n() != c.n()) throw std::invalid_argument("restrict: dimension mismatch");
    int j = c.codim();
    if (j == psi.n()) throw std::invalid_argument("restrict: no free coordinates");
    double ip = inner_cube(psi, c);
    if (ip <= 0.0) throw ZeroMassError("restrict: subcube has zero mass");
    uint64_t free = ~c.fixed.mask & low_mask(psi.n());
    int m = psi.n() - j;
    Eigen::ArrayXd d(Eigen::Index(uint64_t(1) << m));
    for (uint64_t w = 0; w < (uint64_t(1) << m); ++w)
        d[Eigen::Index(w)] = psi(c.assignment | scatter_bits(w, free)) / ip;
    Restriction r{ExplicitMeasure(m, std::move(d), true), {}, ip};
    r.free_coords.reserve(size_t(m));
    for (int i = 0; i < psi.n(); ++i)
        if (!c.fixed.contains(i)) r.free_coords.push_back(i);
    return r;
}

Subcube Restriction::lift(const Subcube& local, const Subcube& base) const {
    uint64_t mask = base.fixed.mask, assign = base.assignment;
    for (int i = 0; i < local.n(); ++i) {
        if (!local.fixed.contains(i)) continue;
        uint64_t bit = uint64_t(1) << free_coords[size_t(i)];
        mask |= bit;
        if ((local.assignment >> i) & 1) assign |= bit;
    }
    return Subcube{CoordSet{base.n(), mask}, assign};
}

InormValue inorm(const ExplicitMeasure& psi) { return {psi.density().maxCoeff(), false}; }

InormValue inorm(const SampleSet& samples) {
    if (samples.points.empty()) throw std::invalid_argument("inorm: empty sample set");
    std::unordered_map<uint64_t, size_t> mult;
    for (uint64_t p : samples.points) ++mult[p];
    size_t best = 0;
    for (const auto& kv : mult) best = std::max(best, kv.second);
    return {std::ldexp(double(best) / double(samples.size()), samples.n), true};
}

ExplicitMeasure marginal(const ExplicitMeasure& psi, const CoordSet& p) {
    if (psi.n() != p.n) throw std::invalid_argument("marginal: dimension mismatch");
    int m = p.count();
    if (m == 0) throw std::invalid_argument("marginal: empty coordinate set");
    uint64_t rest = ~p.mask & low_mask(psi.n());
    int r = psi.n() - m;
    Eigen::ArrayXd d = Eigen::ArrayXd::Zero(Eigen::Index(uint64_t(1) << m));
    for (uint64_t y = 0; y < (uint64_t(1) << m); ++y) {
        uint64_t base = scatter_bits(y, p.mask);
        double sum = 0.0;
        for (uint64_t z = 0; z < (uint64_t(1) << r); ++z) sum += psi(base | scatter_bits(z, rest));
        d[Eigen::Index(y)] = std::ldexp(sum, -r);
    }
    return ExplicitMeasure(m, std::move(d), true);
}

ExplicitMeasure extend(const ExplicitMeasure& psi_p, int n) {
    uint64_t mask = (uint64_t(1) << psi_p.n()) - 1;
    return extend(psi_p, n, CoordSet{n, mask});
}

ExplicitMeasure extend(const ExplicitMeasure& psi_p, int n, const CoordSet& p) {
    if (n < 1 || n > kMaxExplicitN) throw std::invalid_argument("extend: n out of range");
    if (p.n != n || p.count() != psi_p.n()) throw std::invalid_argument("extend: placement mismatch");
    Eigen::ArrayXd d(Eigen::Index(uint64_t(1) << n));
    for (uint64_t x = 0; x < (uint64_t(1) << n); ++x)
        d[Eigen::Index(x)] = psi_p(gather_bits(x, p.mask));
    return ExplicitMeasure(n, std::move(d), true);
}

SampleSet draw_samples(const Sampler& src, size_t m) {
    SampleSet out;
    out.n = src.n;
    out.seed = src.seed;
    out.points.reserve(m);
    for (size_t i = 0; i < m; ++i) out.points.push_back(src.draw(uint64_t(i)));
    return out;
}

Sampler explicit_sampler(const ExplicitMeasure& psi, uint64_t seed) {
    auto cdf = std::make_shared<std::vector<double>>();
    cdf->reserve(size_t(psi.size()));
    double acc = 0.0;
    double total = psi.density().sum();
    for (uint64_t x = 0; x < psi.size(); ++x) {
        acc += psi(x) / total;
        cdf->push_back(acc);
    }
    cdf->back() = 1.0;
    CounterRng rng{splitmix64(seed)};
    Sampler s;
    s.n = psi.n();
    s.seed = seed;
    s.draw = [cdf, rng](uint64_t i) {
        double u = rng.uniform(i);
        auto it = std::upper_bound(cdf->begin(), cdf->end(), u);
        if (it == cdf->end()) --it;
        return uint64_t(it - cdf->begin());
    };
    return s;
}

}  // namespace skewscope

#include "skewscope/fourier.hpp"

#include <cmath>

namespace skewscope {

void walsh_hadamard_inplace(Eigen::VectorXd& a) {
    Eigen::Index n = a.size();
    if (n == 0 || (n & (n - 1))) throw std::invalid_argument("walsh_hadamard: length not a power of two");
    for (Eigen::Index half = 1; half < n; half <<= 1) {
        for (Eigen::Index block = 0; block < n; block += half << 1) {
            for (Eigen::Index i = block; i < block + half; ++i) {
                double u = a[i], v = a[i + half];
                a[i] = u + v;
                a[i + half] = u - v;
            }
        }
    }
}

Spectrum wht(const ExplicitMeasure& psi) {
    Spectrum spec;
    spec.n = psi.n();
    spec.coeffs = psi.density().matrix();
    walsh_hadamard_inplace(spec.coeffs);
    spec.coeffs *= std::ldexp(1.0, -psi.n());
    return spec;
}

Eigen::ArrayXd density_from_spectrum(const Spectrum& spec) {
    Eigen::VectorXd a = spec.coeffs;
    walsh_hadamard_inplace(a);
    return a.array();
}

CoeffEstimate coeff_estimate(const SampleSet& samples, const CoordSet& s, double delta) {
    if (samples.n != s.n) throw std::invalid_argument("coeff_estimate: dimension mismatch");
    if (samples.points.empty()) throw std::invalid_argument("coeff_estimate: empty sample set");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("coeff_estimate: delta out of (0,1)");
    long long acc = 0;
    for (uint64_t p : samples.points) acc += parity_sign(s.mask & p);
    double m = double(samples.size());
    // parity terms span [-1, 1]: range 2 in the Hoeffding width
    return {double(acc) / m, 2.0 * std::sqrt(std::log(2.0 / delta) / (2.0 * m))};
}

double default_coeff_delta(int n, int k) { return std::pow(double(n), -2.0 * k); }

double skew_from_spectrum(const Spectrum& spec, const Subcube& c) {
    if (spec.n != c.n()) throw std::invalid_argument("skew_from_spectrum: dimension mismatch");
    double acc = 0.0;
    for_each_submask(c.fixed.mask, [&](uint64_t s) {
        if (s == 0) return;
        acc += spec(s) * parity_sign(s & c.assignment);
    });
    return acc;
}

double level_weight(const Spectrum& spec, int k) {
    if (k < 0) throw std::invalid_argument("level_weight: negative k");
    double acc = 0.0;
    uint64_t size = uint64_t(1) << spec.n;
    for (uint64_t s = 0; s < size; ++s)
        if (popcount(s) <= k) acc += spec(s) * spec(s);
    return acc;
}

double level_weight_excl(const Spectrum& spec, int k, const CoordSet& j) {
    if (spec.n != j.n) throw std::invalid_argument("level_weight_excl: dimension mismatch");
    if (k < 0) throw std::invalid_argument("level_weight_excl: negative k");
    double acc = 0.0;
    uint64_t size = uint64_t(1) << spec.n;
    for (uint64_t s = 0; s < size; ++s)
        if (popcount(s & ~j.mask) <= k) acc += spec(s) * spec(s);
    return acc;
}

double hypercontractive_bound(double t, int k) {
    if (t < 1.0) throw std::invalid_argument("hypercontractive_bound: inorm below 1");
    if (k < 0) throw std::invalid_argument("hypercontractive_bound: negative k");
    double e2 = std::exp(2.0);
    return e2 * std::pow(std::log(std::exp(1.0) * t), double(k));
}

double restricted_coeff(const Spectrum& spec, const Subcube& c, const CoordSet& s, double ip) {
    if (spec.n != c.n() || s.n != c.n())
        throw std::invalid_argument("restricted_coeff: dimension mismatch");
    if (s.mask & c.fixed.mask) throw std::invalid_argument("restricted_coeff: S meets fixed set");
    if (ip <= 0.0) throw ZeroMassError("restricted_coeff: zero-mass subcube");
    double acc = 0.0;
    for_each_submask(c.fixed.mask, [&](uint64_t t) {
        acc += spec(s.mask | t) * parity_sign(t & c.assignment);
    });
    return acc / ip;
}

}  // namespace skewscope

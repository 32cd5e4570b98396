#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "skewscope/cube.hpp"
#include "skewscope/rng.hpp"

namespace skewscope {

// Restricting to (or conditioning on) a subcube of measure zero.
struct ZeroMassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kNormalizationTol = 1e-12;
inline constexpr int kMaxExplicitN = 30;

// Probability measure on {-1,+1}^n stored on the density scale: entry x is
// 2^n * Pr[x], so the uniform measure is all-ones and the mean is 1.
class ExplicitMeasure {
  public:
    ExplicitMeasure(int n, Eigen::ArrayXd density, bool renormalize = false);

    int n() const { return n_; }
    uint64_t size() const { return uint64_t(1) << n_; }
    double operator()(uint64_t bits) const { return density_[Eigen::Index(bits)]; }
    const Eigen::ArrayXd& density() const { return density_; }

    static ExplicitMeasure uniform(int n);

  private:
    int n_;
    Eigen::ArrayXd density_;
};

// Counter-based point source: draw(i) is a pure function of (seed, i).
struct Sampler {
    int n = 0;
    uint64_t seed = 0;
    std::function<uint64_t(uint64_t)> draw;
};

struct SampleSet {
    int n = 0;
    std::vector<uint64_t> points;
    uint64_t seed = 0;  // 0 when externally supplied

    size_t size() const { return points.size(); }
};

// Evaluation plus sampling access for query-model algorithms.
struct QueryOracle {
    int n = 0;
    std::function<double(uint64_t)> density;
    Sampler sampler;
};

struct SkewReport {
    Subcube cube;
    double skew = 0.0;
    int sign = 0;  // +1 or -1 as queried
    bool minimal = false;
    bool estimated = false;
    double est_error = 0.0;
};

struct SkewEstimate {
    double value = 0.0;
    double half_width = 0.0;  // Hoeffding, at the requested failure probability
    size_t hits = 0;
};

struct InormValue {
    double value = 0.0;
    bool empirical = false;
};

// Restriction psi|_C re-indexed to the free coordinates, densest first.
// free_coords[i] is the original index of new coordinate i.
struct Restriction {
    ExplicitMeasure measure;
    std::vector<int> free_coords;
    double inner = 0.0;  // <psi, mu_C> of the restricting cube

    // Lifts a subcube over the re-indexed coordinates back to original ones.
    Subcube lift(const Subcube& local, const Subcube& base) const;
};

// <psi, mu_C> = 2^codim * Pr_psi[x in C]; range [0, 2^codim].
double inner_cube(const ExplicitMeasure& psi, const Subcube& c);

// skew = <psi, mu_C> - 1; range [-1, 2^codim - 1].
double skew(const ExplicitMeasure& psi, const Subcube& c);

// Empirical skew with two-sided Hoeffding half-width at failure prob delta:
// 2^codim * sqrt(ln(2/delta) / (2m)).
SkewEstimate estimate_skew(const SampleSet& samples, const Subcube& c, double delta);

Restriction restrict_measure(const ExplicitMeasure& psi, const Subcube& c);

InormValue inorm(const ExplicitMeasure& psi);
// 2^n * (max multiplicity / m); flagged empirical.
InormValue inorm(const SampleSet& samples);

// Marginal on P, re-indexed to |P| coordinates in ascending original order.
ExplicitMeasure marginal(const ExplicitMeasure& psi, const CoordSet& p);

// Product with the uniform measure on the complement of P; psi_p's coordinate
// i lands on the i-th smallest member of P. Default placement 0..m-1.
ExplicitMeasure extend(const ExplicitMeasure& psi_p, int n);
ExplicitMeasure extend(const ExplicitMeasure& psi_p, int n, const CoordSet& p);

SampleSet draw_samples(const Sampler& src, size_t m);
// CDF-inversion sampler for an explicit measure.
Sampler explicit_sampler(const ExplicitMeasure& psi, uint64_t seed);

}  // namespace skewscope

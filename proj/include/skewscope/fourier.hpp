#pragma once

#include <Eigen/Dense>

#include "skewscope/measure.hpp"

namespace skewscope {

// Fourier coefficients psi_hat(S) = E_{x~psi}[chi_S(x)] indexed by set mask.
// Always psi_hat(empty) = 1 for a measure.
struct Spectrum {
    int n = 0;
    Eigen::VectorXd coeffs;

    double operator()(uint64_t mask) const { return coeffs[Eigen::Index(mask)]; }
};

struct CoeffEstimate {
    double value = 0.0;
    double half_width = 0.0;
};

// In-place butterfly, unnormalized: a[s] <- sum_x (-1)^{popcount(s&x)} a[x].
void walsh_hadamard_inplace(Eigen::VectorXd& a);

// Spectrum of an explicit measure (normalized by 2^{-n}).
Spectrum wht(const ExplicitMeasure& psi);

// Density reconstruction psi(x) = sum_S psi_hat(S) chi_S(x).
Eigen::ArrayXd density_from_spectrum(const Spectrum& spec);

// Empirical coefficient over a sample set; half-width sqrt(ln(2/delta)/(2m)).
CoeffEstimate coeff_estimate(const SampleSet& samples, const CoordSet& s, double delta);
// Default per-estimate failure probability n^{-2k}.
double default_coeff_delta(int n, int k);

// skew(C) = sum_{nonempty S subseteq K} psi_hat(S) chi_S(y).
double skew_from_spectrum(const Spectrum& spec, const Subcube& c);

// W^{<=k} = sum_{|S| <= k} psi_hat(S)^2, empty set included.
double level_weight(const Spectrum& spec, int k);

// W^{<=k}(psi, J) = sum over S with |S \ J| <= k of psi_hat(S)^2.
double level_weight_excl(const Spectrum& spec, int k, const CoordSet& j);

// Level-k ceiling e^2 * ln(e*t)^k for a measure with inorm t >= 1.
double hypercontractive_bound(double t, int k);

// Coefficient of psi|_C at S (S within the free coordinates, original
// numbering): (sum_{T subseteq J} psi_hat(S u T) chi_T(z)) / ip.
double restricted_coeff(const Spectrum& spec, const Subcube& c, const CoordSet& s, double ip);

}  // namespace skewscope

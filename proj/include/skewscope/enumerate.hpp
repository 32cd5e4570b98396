#pragma once

#include <cstdint>
#include <vector>

#include "skewscope/cube.hpp"
#include "skewscope/fourier.hpp"
#include "skewscope/heavy.hpp"
#include "skewscope/measure.hpp"

namespace skewscope {

enum class SkewSign { positive, negative };

// Decision slack for exact-route comparisons. The measure-sum and spectrum-sum
// skew routes round differently; cubes sitting exactly on a record or parent
// bound must get the same verdict from both, so every exact boundary test
// carries this slack.
inline constexpr double kSkewDecisionTol = 1e-9;

struct SkewQuery {
    int k = 1;
    double gamma = 1.0;
    double eps = 1.0;
    SkewSign sign = SkewSign::positive;
    // Restrict the parent bound to parents skewed the same way as the cube.
    // Coincides with the default: an opposite-signed parent passes the
    // one-sided bound automatically.
    bool same_sign_parents = false;

    // Positive sign: gamma in (0, 2^k - 1]; negative: gamma in (0, 1];
    // eps in (0, 1]; 1 <= k <= n.
    void validate(int n) const;
};

// Per-node access used by the recursion: the skew of the current cube and the
// heavy Fourier sets of the measure restricted to it, thresholded per set size.
class CoeffProvider {
  public:
    // Exact providers report half_width 0.
    virtual SkewEstimate node_skew(const Subcube& c) = 0;
    // Sets S over the free coordinates of c with 1 <= |S| <= k_t and
    // |coeff(S)| >= tau_by_size[|S|]; sampled routes may keep entries down to
    // 3/4 of the threshold. node_ip is 1 + skew(c), positive. An empty result
    // terminates the branch.
    virtual std::vector<uint64_t> node_sets(const Subcube& c, int k_t,
                                            const std::vector<double>& tau_by_size,
                                            double node_ip) = 0;
    virtual ~CoeffProvider() = default;
};

class ExactSpectrumProvider final : public CoeffProvider {
  public:
    explicit ExactSpectrumProvider(Spectrum spec) : spec_(std::move(spec)) {}
    SkewEstimate node_skew(const Subcube& c) override;
    std::vector<uint64_t> node_sets(const Subcube& c, int k_t,
                                    const std::vector<double>& tau_by_size,
                                    double node_ip) override;
    const Spectrum& spectrum() const { return spec_; }

  private:
    Spectrum spec_;
};

class SampleProvider final : public CoeffProvider {
  public:
    SampleProvider(const SampleSet& samples, double delta) : samples_(&samples), delta_(delta) {}
    SkewEstimate node_skew(const Subcube& c) override;
    std::vector<uint64_t> node_sets(const Subcube& c, int k_t,
                                    const std::vector<double>& tau_by_size,
                                    double node_ip) override;

  private:
    const SampleSet* samples_;
    double delta_;
};

// Top-level heavy list + preprocess graph, queried through deduce_subcube_coeffs.
class DeducedProvider final : public CoeffProvider {
  public:
    DeducedProvider(const CoeffGraph& graph, DeduceAccess access) : graph_(&graph), access_(access) {}
    SkewEstimate node_skew(const Subcube& c) override;
    std::vector<uint64_t> node_sets(const Subcube& c, int k_t,
                                    const std::vector<double>& tau_by_size,
                                    double node_ip) override;

  private:
    const CoeffGraph* graph_;
    DeduceAccess access_;
};

// Final arbiter over recorded candidates: skew >= gamma (or <= -gamma) and
// minimality, exact or within sampling slack.
class PostFilter {
  public:
    virtual bool qualify(const Subcube& c, const SkewQuery& q, SkewReport& out) = 0;
    virtual ~PostFilter() = default;
};

class ExactPostFilter final : public PostFilter {
  public:
    // Precomputes the spectrum; skew decisions then cost O(2^codim) per cube.
    explicit ExactPostFilter(const ExplicitMeasure& psi);
    bool qualify(const Subcube& c, const SkewQuery& q, SkewReport& out) override;

  private:
    const ExplicitMeasure* psi_;
    Spectrum spec_;
};

class SampledPostFilter final : public PostFilter {
  public:
    SampledPostFilter(const SampleSet& samples, double delta) : samples_(&samples), delta_(delta) {}
    bool qualify(const Subcube& c, const SkewQuery& q, SkewReport& out) override;

  private:
    const SampleSet* samples_;
    double delta_;
};

struct EnumerateResult {
    std::vector<SkewReport> cubes;  // canonical (fixed mask, assignment) order
    uint64_t states_visited = 0;
    uint64_t recorded = 0;
};

std::vector<SkewReport> brute_force_skewed(const ExplicitMeasure& psi, int k, double gamma,
                                           SkewSign sign);
bool is_minimal(const ExplicitMeasure& psi, const Subcube& c, double gamma, double eps,
                SkewSign sign, bool same_sign_parents = false);
// Ground-truth oracle: brute_force_skewed filtered by is_minimal.
std::vector<SkewReport> brute_force_minimal(const ExplicitMeasure& psi, const SkewQuery& q);

// Core recursion shared by fsr and fsn; the sign lives in the query.
EnumerateResult enumerate_minimal(CoeffProvider& provider, PostFilter& filter, int n,
                                  const SkewQuery& q, int workers = 1);

EnumerateResult fsr(const ExplicitMeasure& psi, const SkewQuery& q, int workers = 1);
EnumerateResult fsn(const ExplicitMeasure& psi, const SkewQuery& q, int workers = 1);
EnumerateResult fsr(const SampleSet& samples, const SkewQuery& q, double delta = 1e-4,
                    int workers = 1);
EnumerateResult fsn(const SampleSet& samples, const SkewQuery& q, double delta = 1e-4,
                    int workers = 1);

// Top-level heavy-list thresholds for the ffc pipeline.
// min(eps*sqrt(gamma), eps*gamma/(1+(1-eps)gamma)) / 16^k
double fsr_top_rho(int k, double gamma, double eps);
double fsn_top_rho(int k, double gamma, double eps);  // eps*gamma/16^k

struct PipelineOptions {
    double rho_top = 0.0;   // 0: use the fsr/fsn top rho for the query
    double lambda = 0.5;
    uint64_t seed = 1;
    CorrBackend backend = CorrBackend::exact_pairwise;
    double delta = 1e-4;
    int workers = 1;
    uint64_t max_d = 100000000;  // refuse sample counts beyond this
};

// Sample route with the ffc -> preprocess -> deduce coefficient provider.
EnumerateResult fsr_pipeline(const SampleSet& samples, const SkewQuery& q,
                             const PipelineOptions& opt = {});
EnumerateResult fsn_pipeline(const SampleSet& samples, const SkewQuery& q,
                             const PipelineOptions& opt = {});

// Samples needed so the skew estimator's half-width stays below
// min(gamma, 2^-k)/4 simultaneously over every subcube of codim <= k.
uint64_t recommended_sample_size(int n, int k, double gamma, double delta);

}  // namespace skewscope

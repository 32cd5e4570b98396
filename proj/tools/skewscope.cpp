// skewscope: generators, Fourier tools, heavy-coefficient finders, and
// minimal-skewed-subcube enumerators over distributions on {+-1}^n.
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "skewscope/enumerate.hpp"
#include "skewscope/generators.hpp"
#include "skewscope/io.hpp"

namespace ss = skewscope;
using nlohmann::ordered_json;

namespace {

std::string g_command_line;

uint64_t named_seed(uint64_t master, const char* purpose) {
    return ss::splitmix64(master ^ ss::fnv1a64(purpose, std::strlen(purpose)));
}

int explicit_cap() {
    const char* env = std::getenv("SKEWSCOPE_MAX_EXPLICIT_N");
    if (!env) return 24;
    int v = std::atoi(env);
    if (v < 1) v = 1;
    if (v > ss::kMaxExplicitN) v = ss::kMaxExplicitN;
    return v;
}

void check_explicit_n(int n) {
    if (n > explicit_cap()) {
        std::ostringstream os;
        os << "explicit measure with n=" << n << " exceeds the guard (n <= " << explicit_cap()
           << "); set SKEWSCOPE_MAX_EXPLICIT_N to override";
        throw std::runtime_error(os.str());
    }
}

uint64_t mask_of_coords(std::initializer_list<int> coords) {
    uint64_t m = 0;
    for (int c : coords) m |= uint64_t(1) << c;
    return m;
}

// Results go to stdout or --out FILE; the manifest (with an embedded summary)
// goes to stderr or FILE.manifest.json so pipes stay clean.
struct Emitter {
    std::string out_path;  // empty: stdout
    std::ostringstream body;
    ss::RunManifest manifest;
    ordered_json summary;

    Emitter() { manifest.command = g_command_line; }

    void input(const std::string& path) {
        manifest.input_digests[path] = ss::hex64(ss::fnv1a64_file(path));
    }

    void flush() {
        ordered_json m = ordered_json::parse(manifest.to_json());
        m["summary"] = summary;
        if (out_path.empty()) {
            std::cout << body.str();
            std::cerr << m.dump(2) << "\n";
        } else {
            std::ofstream f(out_path);
            if (!f) throw std::runtime_error("cannot write " + out_path);
            f << body.str();
            std::ofstream mf(out_path + ".manifest.json");
            if (!mf) throw std::runtime_error("cannot write " + out_path + ".manifest.json");
            mf << m.dump(2) << "\n";
        }
    }
};

ss::ExplicitMeasure load_measure(Emitter& em, const std::string& path, bool renormalize) {
    std::ifstream probe(path);
    if (!probe) throw std::runtime_error("cannot open " + path);
    std::string header;
    std::getline(probe, header);
    auto pos = header.find("n=");
    if (pos != std::string::npos) check_explicit_n(std::atoi(header.c_str() + pos + 2));
    probe.close();
    em.input(path);
    return ss::read_measure_file(path, renormalize);
}

ss::SampleSet load_samples(Emitter& em, const std::string& path) {
    em.input(path);
    return ss::read_samples_file(path);
}

uint64_t parse_coord_mask(const std::string& csv, int n) {
    uint64_t mask = 0;
    std::stringstream sr(csv);
    std::string tok;
    while (std::getline(sr, tok, ',')) {
        if (tok.empty()) continue;
        int c = std::stoi(tok);
        if (c < 0 || c >= n) throw std::runtime_error("coordinate " + tok + " out of range");
        mask |= uint64_t(1) << c;
    }
    return mask;
}

void emit_coeff_list(Emitter& em, const ss::CoeffList& l) {
    for (const auto& e : l.entries) {
        char hex[24];
        std::snprintf(hex, sizeof hex, "%llx", static_cast<unsigned long long>(e.set.mask));
        em.body << hex << " " << ss::format_double(e.value) << "\n";
    }
    em.summary["count"] = l.entries.size();
    em.summary["k"] = l.k;
    em.summary["rho"] = l.rho;
    em.summary["guarantee"] = l.guarantee == ss::CoeffList::Guarantee::exact ? "exact" : "whp";
}

void emit_reports(Emitter& em, const ss::EnumerateResult& res) {
    for (const auto& r : res.cubes) em.body << ss::report_line(r) << "\n";
    em.summary["count"] = res.cubes.size();
    em.summary["states_visited"] = res.states_visited;
    em.summary["recorded"] = res.recorded;
}

// ---------------------------------------------------------------- verify ---

struct CheckSink {
    std::ostream& os;
    bool all_ok = true;
    void check(bool ok, const std::string& label) {
        os << (ok ? "ok " : "FAIL ") << label << "\n";
        all_ok &= ok;
    }
};

struct CorpusEntry {
    std::string name;
    ss::ExplicitMeasure psi;
};

std::vector<CorpusEntry> small_corpus(uint64_t seed) {
    std::vector<CorpusEntry> out;
    out.push_back({"uniform-n6", ss::ExplicitMeasure::uniform(6)});
    ss::Subcube slab = ss::parse_subcube("+++*****");
    out.push_back({"allones-n8-codim3", ss::gen_subcube_uniform(slab.n(), slab)});
    out.push_back({"tribes-k2-t3", ss::gen_tribes(2, 3)});
    out.push_back({"parity-n7-eta0.1",
                   ss::gen_noisy_parity(7, ss::make_coord_set(7, mask_of_coords({0, 2, 5})), 0.1)});
    out.push_back({"dualbch-l3-e1", ss::gen_dual_bch(ss::BchSpec::make(3, 1))});
    out.push_back({"sparse-n8-s32", ss::gen_random_sparse(8, 32, seed)});
    return out;
}

bool verify_identities(std::ostream& os, uint64_t seed) {
    CheckSink sink{os};
    const double tol = 1e-10;
    for (const auto& entry : small_corpus(seed)) {
        const auto& psi = entry.psi;
        int n = psi.n();
        ss::Spectrum spec = ss::wht(psi);
        ss::CounterRng rng{named_seed(seed, entry.name.c_str())};

        double mass = 0.0, fmass = 0.0;
        for (uint64_t x = 0; x < (uint64_t(1) << n); ++x) mass += psi(x) * psi(x);
        mass = std::ldexp(mass, -n);
        for (uint64_t s = 0; s < (uint64_t(1) << n); ++s) fmass += spec(s) * spec(s);
        sink.check(std::abs(mass - fmass) <= 1e-9, entry.name + ": parseval");

        bool round = true;
        ss::ExplicitMeasure back(n, ss::density_from_spectrum(spec));
        for (uint64_t x = 0; x < (uint64_t(1) << n); ++x)
            round &= std::abs(back(x) - psi(x)) <= 1e-9;
        sink.check(round, entry.name + ": transform round-trip");

        bool skew_ok = true, prod_ok = true, zero_ok = true, avg_ok = true, rest_ok = true;
        for (int trial = 0; trial < 40; ++trial) {
            ss::CounterRng tr = rng.stream(uint64_t(trial));
            uint64_t mask = tr.word(0) & ((uint64_t(1) << n) - 1);
            if (ss::popcount(mask) > 4 || mask == 0) mask = (uint64_t(1) << (trial % n));
            uint64_t assign = tr.word(1) & mask;
            ss::Subcube c = ss::make_subcube(n, mask, assign);

            double s1 = ss::skew(psi, c);
            double s2 = ss::skew_from_spectrum(spec, c);
            skew_ok &= std::abs(s1 - s2) <= tol;

            // zero sum of skews over all assignments of the mask
            double acc = 0.0;
            for (uint64_t w = mask;; w = (w - 1) & mask) {
                acc += ss::skew(psi, ss::make_subcube(n, mask, w));
                if (w == 0) break;
            }
            zero_ok &= std::abs(acc) <= 1e-9;

            // partition average over one extra free coordinate set
            uint64_t lmask = 0;
            for (int b = 0; b < n && ss::popcount(lmask) < 2; ++b)
                if (!((mask >> b) & 1) && ((tr.word(2) >> b) & 1)) lmask |= uint64_t(1) << b;
            if (lmask) {
                double cacc = 0.0;
                auto children = ss::partition_children(c, ss::CoordSet{n, lmask});
                for (const auto& ch : children) cacc += ss::skew(psi, ch);
                avg_ok &= std::abs(ss::skew(psi, c) - cacc / double(children.size())) <= tol;
            }

            // product rule through a parent, and the restricted-coefficient route
            double ip_c = 1.0 + s1;
            if (ip_c > 1e-9 && c.codim() >= 2) {
                auto ps = ss::parents(c);
                const ss::Subcube& d = ps[size_t(tr.below(3, ps.size()))];
                double ip_d = 1.0 + ss::skew(psi, d);
                if (ip_d <= 1e-9) continue;
                ss::Restriction rd = ss::restrict_measure(psi, d);
                // c re-expressed over d's free coordinates
                uint64_t inner_mask = 0, inner_assign = 0;
                int idx = 0;
                for (int b = 0; b < n; ++b) {
                    if ((d.fixed.mask >> b) & 1) continue;
                    if ((c.fixed.mask >> b) & 1) {
                        inner_mask |= uint64_t(1) << idx;
                        if ((c.assignment >> b) & 1) inner_assign |= uint64_t(1) << idx;
                    }
                    ++idx;
                }
                int dn = rd.measure.n();
                ss::Subcube inner = ss::make_subcube(dn, inner_mask, inner_assign);
                double ip_inner = 1.0 + ss::skew(rd.measure, inner);
                prod_ok &= std::abs(ip_c - ip_d * ip_inner) <= tol;

                ss::Spectrum dspec = ss::wht(rd.measure);
                for (uint64_t t = 0; t < (uint64_t(1) << dn) && trial % 8 == 0; ++t) {
                    if (ss::popcount(t) > 2) continue;
                    uint64_t lifted = 0;
                    int q = 0;
                    for (int b = 0; b < n; ++b) {
                        if ((d.fixed.mask >> b) & 1) continue;
                        if ((t >> q) & 1) lifted |= uint64_t(1) << b;
                        ++q;
                    }
                    double direct = dspec(t);
                    double via = ss::restricted_coeff(spec, d, ss::CoordSet{n, lifted}, ip_d);
                    rest_ok &= std::abs(direct - via) <= tol;
                }
            }
        }
        sink.check(skew_ok, entry.name + ": skew via measure == skew via spectrum");
        sink.check(zero_ok, entry.name + ": assignments of a mask sum to zero skew");
        sink.check(avg_ok, entry.name + ": partition averaging");
        sink.check(prod_ok, entry.name + ": restriction product rule");
        sink.check(rest_ok, entry.name + ": restricted coefficients match restriction transform");

        // conditional-skew floor on minimal cubes (tight form; sqrt form at gamma=1)
        bool cond_ok = true;
        for (ss::SkewSign sgn : {ss::SkewSign::positive, ss::SkewSign::negative}) {
            ss::SkewQuery q;
            q.k = std::min(3, n);
            q.gamma = 1.0;
            q.eps = 0.5;
            q.sign = sgn;
            for (const auto& r : ss::brute_force_minimal(psi, q)) {
                double ip_c = 1.0 + r.skew;
                for (const auto& d : ss::parents(r.cube)) {
                    double ip_d = 1.0 + ss::skew(psi, d);
                    if (ip_d <= 0.0) continue;
                    double cond = ip_c / ip_d - 1.0;
                    double tight = q.eps * q.gamma / (1.0 + (1.0 - q.eps) * q.gamma);
                    if (sgn == ss::SkewSign::positive)
                        cond_ok &= cond >= std::max(tight, q.eps * std::sqrt(q.gamma) / 2.0) - tol;
                    else
                        cond_ok &= cond <= -q.eps * q.gamma + tol;
                }
            }
        }
        sink.check(cond_ok, entry.name + ": conditional skew floor on minimal cubes");
    }
    return sink.all_ok;
}

bool verify_generators(std::ostream& os, uint64_t seed) {
    CheckSink sink{os};

    ss::ExplicitMeasure tribes = ss::gen_tribes(3, 4);
    sink.check(ss::inorm(tribes).value == 16.0, "tribes(3,4): inorm is exactly 2^t");
    // one forced -1 per block is the canonical 0-certificate shape
    uint64_t cert_mask = mask_of_coords({0, 4, 8});
    ss::Subcube zc = ss::make_subcube(12, cert_mask, cert_mask);
    bool cert = std::abs(ss::skew(tribes, zc) + 1.0) <= 1e-12;
    for (const auto& p : ss::parents(zc))
        cert &= std::abs(ss::skew(tribes, p) + double(p.codim()) / 3.0) <= 1e-12;
    sink.check(cert, "tribes(3,4): 0-certificate skew -1, parents -codim/3");

    ss::CoordSet star = ss::make_coord_set(8, mask_of_coords({1, 4, 6}));
    ss::ExplicitMeasure parity = ss::gen_noisy_parity(8, star, 0.1);
    ss::Spectrum pspec = ss::wht(parity);
    uint64_t label_set = star.mask | (uint64_t(1) << 8);
    bool par_ok = std::abs(pspec(label_set) - 0.8) <= 1e-12;
    for (int sgn : {+1, -1}) {
        ss::Subcube c = ss::parity_cube(8, star, 0, sgn);
        par_ok &= std::abs(ss::skew(parity, c) - 0.8 * sgn) <= 1e-12;
    }
    sink.check(par_ok, "noisy parity(8, eta=0.1): planted coefficient and cube skews +-0.8");

    ss::BchSpec bch = ss::BchSpec::make(4, 1);
    ss::ExplicitMeasure dual = ss::gen_dual_bch(bch);
    ss::Spectrum dspec = ss::wht(dual);
    bool bin = true, indep = true;
    uint64_t support = 0;
    for (uint64_t s = 0; s < (uint64_t(1) << 15); ++s) {
        double v = dspec(s);
        bin &= std::abs(v) <= 1e-12 || std::abs(v - 1.0) <= 1e-12;
        if (v > 0.5) {
            ++support;
            indep &= (s == 0) || ss::popcount(s) >= 4;
        }
    }
    sink.check(bin, "dual-bch(l=4,e=1): {0,1}-valued spectrum");
    sink.check(support == (uint64_t(1) << 10), "dual-bch(l=4,e=1): support size 2^(n-rank)");
    sink.check(indep, "dual-bch(l=4,e=1): no support below the design distance");

    ss::ExplicitMeasure sparse = ss::gen_random_sparse(10, 32, named_seed(seed, "sparse"));
    uint64_t nz = 0;
    bool quant = true;
    for (uint64_t x = 0; x < 1024; ++x)
        if (sparse(x) != 0.0) {
            ++nz;
            quant &= sparse(x) == 32.0;
        }
    sink.check(nz == 32 && quant, "random sparse(10,32): exact support and density quantum");

    // sampler agreement: empirical low-degree coefficients within loose bounds
    auto close = [&](const ss::Sampler& smp, const ss::ExplicitMeasure& psi, const char* name) {
        ss::SampleSet setp = ss::draw_samples(smp, 20000);
        ss::Spectrum spec = ss::wht(psi);
        bool ok = setp.n == psi.n();
        for (uint64_t mask : {uint64_t(1), uint64_t(3), uint64_t(5)}) {
            ss::CoeffEstimate est = ss::coeff_estimate(setp, ss::CoordSet{psi.n(), mask}, 1e-6);
            ok &= std::abs(est.value - spec(mask)) <= 0.06;
        }
        sink.check(ok, std::string(name) + ": sampler matches explicit coefficients");
    };
    close(ss::tribes_sampler(3, 4, named_seed(seed, "ts")), tribes, "tribes sampler");
    close(ss::noisy_parity_sampler(8, star, 0.1, named_seed(seed, "ps")), parity,
          "parity sampler");
    close(ss::dual_bch_sampler(bch, named_seed(seed, "bs")), dual, "dual-bch sampler");
    close(ss::explicit_sampler(sparse, named_seed(seed, "ss")), sparse, "sparse sampler");
    return sink.all_ok;
}

bool verify_oracle_equivalence(std::ostream& os, int n, int k, int trials, uint64_t seed) {
    CheckSink sink{os};
    const std::vector<uint64_t> supports{8, 32, 256};
    const std::vector<double> gammas{0.25, 0.5, 1.0, 3.0};
    const std::vector<double> epss{0.25, 0.5, 1.0};
    for (int trial = 0; trial < trials; ++trial) {
        uint64_t sup = supports[size_t(trial) % supports.size()];
        ss::ExplicitMeasure psi =
            ss::gen_random_sparse(n, sup, named_seed(seed, "oracle") + uint64_t(trial));
        bool ok = true;
        for (int kk = 1; kk <= k; ++kk)
            for (double g : gammas)
                for (double e : epss)
                    for (ss::SkewSign sgn : {ss::SkewSign::positive, ss::SkewSign::negative}) {
                        double cap =
                            sgn == ss::SkewSign::positive ? std::ldexp(1.0, kk) - 1.0 : 1.0;
                        if (g > cap) continue;
                        ss::SkewQuery q;
                        q.k = kk;
                        q.gamma = g;
                        q.eps = e;
                        q.sign = sgn;
                        auto oracle = ss::brute_force_minimal(psi, q);
                        auto got =
                            sgn == ss::SkewSign::positive ? ss::fsr(psi, q) : ss::fsn(psi, q);
                        ok &= got.cubes.size() == oracle.size();
                        if (!ok) break;
                        for (size_t i = 0; i < oracle.size(); ++i)
                            ok &= got.cubes[i].cube == oracle[i].cube &&
                                  std::abs(got.cubes[i].skew - oracle[i].skew) <= 1e-9;
                    }
        std::ostringstream label;
        label << "trial " << trial << " (n=" << n << ", support " << sup
              << "): fsr/fsn equal brute force";
        sink.check(ok, label.str());
    }
    return sink.all_ok;
}

bool verify_level_k(std::ostream& os, uint64_t seed) {
    CheckSink sink{os};
    std::vector<CorpusEntry> corpus;
    corpus.push_back({"uniform-n8", ss::ExplicitMeasure::uniform(8)});
    ss::Subcube slab = ss::parse_subcube("++++******");
    corpus.push_back({"allones-n10-codim4", ss::gen_subcube_uniform(slab.n(), slab)});
    corpus.push_back({"tribes-k3-t4", ss::gen_tribes(3, 4)});
    corpus.push_back({"parity-n12",
                      ss::gen_noisy_parity(12, ss::make_coord_set(12, mask_of_coords({0, 3, 7})),
                                           0.1)});
    corpus.push_back({"dualbch-l4-e1", ss::gen_dual_bch(ss::BchSpec::make(4, 1))});
    corpus.push_back({"sparse-n12-s256", ss::gen_random_sparse(12, 256, named_seed(seed, "lk"))});
    for (const auto& entry : corpus) {
        int n = entry.psi.n();
        ss::Spectrum spec = ss::wht(entry.psi);
        double t = ss::inorm(entry.psi).value;
        bool ok = true, jok = true;
        for (int k = 1; k <= 4 && k <= n; ++k) {
            double bound = ss::hypercontractive_bound(t, k);
            ok &= ss::level_weight(spec, k) <= bound + 1e-9;
            ss::CounterRng rng{named_seed(seed, entry.name.c_str())};
            for (int j = 0; j < 20; ++j) {
                uint64_t jm = rng.word(uint64_t(16 * k + j)) & ((uint64_t(1) << n) - 1);
                while (ss::popcount(jm) > 4) jm &= jm - 1;
                ss::CoordSet J{n, jm};
                jok &= ss::level_weight_excl(spec, k, J) <=
                       std::ldexp(1.0, J.count()) * bound + 1e-9;
            }
        }
        sink.check(ok, entry.name + ": level-k weight under the hypercontractive bound");
        sink.check(jok, entry.name + ": J-excluded level-k weight under 2^|J| times the bound");
        double pars = 0.0, mass = 0.0;
        for (uint64_t s = 0; s < (uint64_t(1) << n); ++s) pars += spec(s) * spec(s);
        for (uint64_t x = 0; x < (uint64_t(1) << n); ++x) mass += entry.psi(x) * entry.psi(x);
        sink.check(std::abs(pars - std::ldexp(mass, -n)) <= 1e-9, entry.name + ": parseval");
    }
    return sink.all_ok;
}

bool verify_ffc_stat(std::ostream& os, int seeds, uint64_t seed) {
    CheckSink sink{os};
    ss::CoordSet star = ss::make_coord_set(12, mask_of_coords({1, 5, 9}));
    uint64_t planted = star.mask | (uint64_t(1) << 12);
    int hits = 0;
    bool reest = true;
    for (int i = 0; i < seeds; ++i) {
        uint64_t si = named_seed(seed, "ffc") + uint64_t(i);
        ss::Sampler smp = ss::noisy_parity_sampler(12, star, 0.1, si);
        ss::FfcParams params = ss::FfcParams::derive(13, 4, 0.5, 0.5, si);
        ss::CoeffList l = ss::ffc(smp, params, ss::CorrBackend::exact_pairwise, 1);
        if (l.contains(planted)) ++hits;
        for (const auto& e : l.entries) reest &= std::abs(e.value) >= 0.75 * 0.5;
    }
    std::ostringstream label;
    label << "planted set recovered in " << hits << "/" << seeds << " seeds (need >= 90%)";
    sink.check(hits * 10 >= seeds * 9, label.str());
    sink.check(reest, "every reported set passes the 3rho/4 re-estimation filter");
    return sink.all_ok;
}

}  // namespace

int main(int argc, char** argv) {
    std::ostringstream cmd;
    for (int i = 0; i < argc; ++i) cmd << (i ? " " : "") << argv[i];
    g_command_line = cmd.str();

    CLI::App app{"minimal skewed subcube toolkit"};
    app.require_subcommand(1);
    argv = app.ensure_utf8(argv);

    std::string out_path, measure_path, samples_path, cube_str, coord_csv, format = "dense";
    std::string provider = "exact", backend = "exact", sign = "positive", suite;
    int n = 10, k = 3, t = 4, e = 1, l = 4, trials = 10, workers = 1, seeds = 20;
    uint64_t support = 32, sample_count = 0, seed = 1;
    double gamma = 1.0, eps = 1.0, rho = 0.5, lambda = 0.5, eta = 0.1, min_abs = 0.0;
    double delta = 1e-4, tbound = 0.0, rho_top = 0.0;
    bool renormalize = false, same_sign = false, count_min_weight = false;

    // ---- gen ----
    CLI::App* gen = app.add_subcommand("gen", "generate measures or samples");
    gen->require_subcommand(1);
    auto add_gen_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_path, "output file (default stdout)");
        sub->add_option("--samples", sample_count, "emit this many samples instead of a measure");
        sub->add_option("--seed", seed, "master seed");
        sub->add_option("--format", format, "measure format: dense|sparse")
            ->check(CLI::IsMember({"dense", "sparse"}));
    };
    CLI::App* gen_subcube = gen->add_subcommand("subcube", "uniform measure on a subcube");
    gen_subcube->add_option("--cube", cube_str, "subcube over +-* (length n)")->required();
    add_gen_common(gen_subcube);
    CLI::App* gen_tribes = gen->add_subcommand("tribes", "tribes mixture on k blocks of t");
    gen_tribes->add_option("--k", k, "block count")->required();
    gen_tribes->add_option("--t", t, "block width")->required();
    add_gen_common(gen_tribes);
    CLI::App* gen_parity = gen->add_subcommand("parity", "noisy parity with appended label");
    gen_parity->add_option("--n", n, "attribute count (label becomes coordinate n)")->required();
    gen_parity->add_option("--s", coord_csv, "parity support, comma-separated")->required();
    gen_parity->add_option("--eta", eta, "flip probability");
    add_gen_common(gen_parity);
    CLI::App* gen_bch = gen->add_subcommand("bch", "uniform measure on a dual-BCH row space");
    gen_bch->add_option("--l", l, "field degree (n = 2^l - 1)")->required();
    gen_bch->add_option("--e", e, "error parameter (design distance 2e+2)");
    gen_bch->add_flag("--count-min-weight", count_min_weight,
                      "print the count of minimum-weight null-space words");
    add_gen_common(gen_bch);
    CLI::App* gen_sparse = gen->add_subcommand("sparse", "uniform measure on a random support");
    gen_sparse->add_option("--n", n, "dimension")->required();
    gen_sparse->add_option("--support", support, "support size")->required();
    add_gen_common(gen_sparse);

    // ---- fourier ----
    CLI::App* fourier = app.add_subcommand("fourier", "spectra of explicit measures");
    fourier->require_subcommand(1);
    CLI::App* fdump = fourier->add_subcommand("dump", "write coefficients above a threshold");
    fdump->add_option("--measure", measure_path, "measure file")->required();
    fdump->add_option("--min-abs", min_abs, "keep |coefficient| >= this");
    fdump->add_flag("--renormalize", renormalize, "renormalize the measure on load");
    fdump->add_option("--out", out_path, "output file (default stdout)");

    // ---- heavy ----
    CLI::App* heavy = app.add_subcommand("heavy", "heavy Fourier coefficient finders");
    heavy->require_subcommand(1);
    CLI::App* hexact = heavy->add_subcommand("exact", "scan the full spectrum");
    hexact->add_option("--measure", measure_path)->required();
    hexact->add_option("--k", k, "degree cap");
    hexact->add_option("--rho", rho, "magnitude threshold");
    hexact->add_option("--out", out_path);
    CLI::App* hffc = heavy->add_subcommand("ffc", "bipartition correlation search on samples");
    hffc->add_option("--samples", samples_path)->required();
    hffc->add_option("--k", k, "degree cap");
    hffc->add_option("--rho", rho, "magnitude threshold");
    hffc->add_option("--lambda", lambda, "extra-output exponent in (0,1]");
    hffc->add_option("--seed", seed);
    hffc->add_option("--backend", backend, "pair scorer: exact|blocked")
        ->check(CLI::IsMember({"exact", "blocked"}));
    hffc->add_option("--workers", workers);
    hffc->add_option("--out", out_path);
    CLI::App* hgl = heavy->add_subcommand("gl", "query-model bucket recursion");
    hgl->add_option("--measure", measure_path)->required();
    hgl->add_option("--rho", rho, "magnitude threshold");
    hgl->add_option("--delta", delta, "failure probability");
    hgl->add_option("--t", tbound, "density sup-norm bound (default: measured)");
    hgl->add_option("--seed", seed);
    hgl->add_option("--out", out_path);

    // ---- enumerate ----
    CLI::App* enumerate = app.add_subcommand("enumerate", "minimal skewed subcube search");
    enumerate->require_subcommand(1);
    std::vector<CLI::App*> enum_subs;
    for (const char* name : {"fsr", "fsn", "oracle"}) {
        CLI::App* sub = enumerate->add_subcommand(
            name, std::string(name) == "oracle" ? "brute-force ground truth"
                                                : "recursive list-decoder");
        sub->add_option("--k", k, "codimension cap")->required();
        sub->add_option("--gamma", gamma, "skew magnitude")->required();
        sub->add_option("--eps", eps, "parent-slack fraction")->required();
        sub->add_option("--measure", measure_path, "explicit measure file");
        sub->add_option("--samples", samples_path, "sample file");
        sub->add_option("--provider", provider, "coefficient provider: exact|ffc")
            ->check(CLI::IsMember({"exact", "ffc"}));
        sub->add_option("--seed", seed);
        sub->add_option("--delta", delta, "per-estimate failure probability");
        sub->add_option("--rho-top", rho_top, "override the pipeline's top threshold");
        sub->add_option("--lambda", lambda);
        sub->add_option("--workers", workers);
        sub->add_flag("--same-sign-parents", same_sign,
                      "test only parents skewed the same way");
        sub->add_flag("--renormalize", renormalize);
        sub->add_option("--out", out_path);
        if (std::string(name) == "oracle")
            sub->add_option("--sign", sign, "positive|negative")
                ->check(CLI::IsMember({"positive", "negative"}));
        enum_subs.push_back(sub);
    }

    // ---- verify ----
    CLI::App* verify = app.add_subcommand("verify", "property suites");
    verify->add_option("suite", suite,
                       "identities|generators|oracle-equivalence|level-k|ffc-stat")
        ->required();
    verify->add_option("--n", n);
    verify->add_option("--k", k);
    verify->add_option("--trials", trials);
    verify->add_option("--seeds", seeds);
    verify->add_option("--seed", seed);

    CLI11_PARSE(app, argc, argv);

    try {
        Emitter em;
        em.out_path = out_path;
        em.manifest.seeds = {seed};

        if (gen_subcube->parsed() || gen_tribes->parsed() || gen_parity->parsed() ||
            gen_bch->parsed() || gen_sparse->parsed()) {
            em.manifest.params["seed"] = double(seed);
            auto emit_measure_or_samples = [&](const ss::ExplicitMeasure* psi,
                                               const ss::Sampler& smp) {
                if (sample_count > 0) {
                    ss::SampleSet sset = ss::draw_samples(smp, sample_count);
                    ss::write_samples(em.body, sset);
                    em.summary["samples"] = sample_count;
                    em.summary["n"] = smp.n;
                } else {
                    if (!psi)
                        throw std::runtime_error("explicit form unavailable here; use --samples");
                    ss::write_measure(em.body, *psi, format == "sparse");
                    em.summary["n"] = psi->n();
                }
            };
            if (gen_subcube->parsed()) {
                ss::Subcube c = ss::parse_subcube(cube_str);
                check_explicit_n(c.n());
                ss::ExplicitMeasure psi = ss::gen_subcube_uniform(c.n(), c);
                emit_measure_or_samples(&psi,
                                        ss::subcube_sampler(c.n(), c, named_seed(seed, "gen")));
            } else if (gen_tribes->parsed()) {
                em.manifest.params["k"] = k;
                em.manifest.params["t"] = t;
                check_explicit_n(k * t);
                ss::ExplicitMeasure psi = ss::gen_tribes(k, t);
                emit_measure_or_samples(&psi, ss::tribes_sampler(k, t, named_seed(seed, "gen")));
            } else if (gen_parity->parsed()) {
                em.manifest.params["eta"] = eta;
                ss::CoordSet s = ss::make_coord_set(n, parse_coord_mask(coord_csv, n));
                ss::Sampler smp = ss::noisy_parity_sampler(n, s, eta, named_seed(seed, "gen"));
                if (sample_count > 0) {
                    emit_measure_or_samples(nullptr, smp);
                } else {
                    check_explicit_n(n + 1);
                    ss::ExplicitMeasure psi = ss::gen_noisy_parity(n, s, eta);
                    emit_measure_or_samples(&psi, smp);
                }
            } else if (gen_bch->parsed()) {
                em.manifest.params["l"] = l;
                em.manifest.params["e"] = e;
                ss::BchSpec spec = ss::BchSpec::make(l, e);
                if (count_min_weight) {
                    em.body << ss::count_min_weight_codewords(spec) << "\n";
                    em.summary["n"] = spec.n;
                } else if (sample_count > 0) {
                    emit_measure_or_samples(nullptr,
                                            ss::dual_bch_sampler(spec, named_seed(seed, "gen")));
                } else {
                    check_explicit_n(spec.n);
                    ss::ExplicitMeasure psi = ss::gen_dual_bch(spec);
                    emit_measure_or_samples(&psi,
                                            ss::dual_bch_sampler(spec, named_seed(seed, "gen")));
                }
            } else {
                em.manifest.params["support"] = double(support);
                check_explicit_n(n);
                ss::ExplicitMeasure psi =
                    ss::gen_random_sparse(n, support, named_seed(seed, "gen"));
                emit_measure_or_samples(&psi, ss::explicit_sampler(psi, named_seed(seed, "draw")));
            }
            em.flush();
            return 0;
        }

        if (fdump->parsed()) {
            ss::ExplicitMeasure psi = load_measure(em, measure_path, renormalize);
            em.manifest.params["min_abs"] = min_abs;
            ss::write_spectrum(em.body, ss::wht(psi), min_abs);
            em.summary["n"] = psi.n();
            em.flush();
            return 0;
        }

        if (hexact->parsed()) {
            ss::ExplicitMeasure psi = load_measure(em, measure_path, false);
            em.manifest.params["k"] = k;
            em.manifest.params["rho"] = rho;
            emit_coeff_list(em, ss::find_heavy_exact(psi, k, rho));
            em.flush();
            return 0;
        }
        if (hffc->parsed()) {
            ss::SampleSet sset = load_samples(em, samples_path);
            ss::FfcParams params =
                ss::FfcParams::derive(sset.n, k, rho, lambda, named_seed(seed, "ffc"));
            em.manifest.params["k"] = k;
            em.manifest.params["rho"] = rho;
            em.manifest.params["lambda"] = lambda;
            em.manifest.params["d"] = double(params.d);
            em.manifest.params["rounds"] = params.rounds;
            ss::CorrBackend be = backend == "exact" ? ss::CorrBackend::exact_pairwise
                                                    : ss::CorrBackend::blocked_product;
            emit_coeff_list(em, ss::ffc(sset, params, be, workers));
            em.summary["d"] = params.d;
            em.summary["rounds"] = params.rounds;
            em.summary["tau"] = params.tau;
            em.flush();
            return 0;
        }
        if (hgl->parsed()) {
            ss::ExplicitMeasure psi = load_measure(em, measure_path, false);
            double t_used = tbound > 0.0 ? tbound : ss::inorm(psi).value;
            ss::QueryOracle oracle;
            oracle.n = psi.n();
            oracle.density = [&psi](uint64_t x) { return psi(x); };
            oracle.sampler = ss::explicit_sampler(psi, named_seed(seed, "gl-draw"));
            ss::GlResult res =
                ss::goldreich_levin(oracle, rho, t_used, delta, named_seed(seed, "gl"));
            em.manifest.params["rho"] = rho;
            em.manifest.params["delta"] = delta;
            em.manifest.params["t"] = t_used;
            emit_coeff_list(em, res.list);
            em.summary["queries_used"] = res.queries_used;
            em.summary["budget"] = res.budget;
            em.summary["budget_exceeded"] = res.budget_exceeded;
            em.flush();
            return 0;
        }

        if (enum_subs[0]->parsed() || enum_subs[1]->parsed() || enum_subs[2]->parsed()) {
            bool is_fsr = enum_subs[0]->parsed();
            bool is_oracle = enum_subs[2]->parsed();
            em.manifest.params["k"] = k;
            em.manifest.params["gamma"] = gamma;
            em.manifest.params["eps"] = eps;
            ss::SkewQuery q;
            q.k = k;
            q.gamma = gamma;
            q.eps = eps;
            q.same_sign_parents = same_sign;
            q.sign = is_oracle ? (sign == "negative" ? ss::SkewSign::negative
                                                     : ss::SkewSign::positive)
                               : (is_fsr ? ss::SkewSign::positive : ss::SkewSign::negative);

            // stdin auto-detect: dispatch on the header magic
            std::optional<ss::ExplicitMeasure> psi;
            std::optional<ss::SampleSet> sset;
            if (!measure_path.empty()) {
                psi = load_measure(em, measure_path, renormalize);
            } else if (!samples_path.empty()) {
                sset = load_samples(em, samples_path);
            } else {
                std::stringstream all;
                all << std::cin.rdbuf();
                std::string text = all.str();
                if (text.rfind("skewscope-measure", 0) == 0) {
                    std::istringstream in(text);
                    psi = ss::read_measure(in, renormalize);
                    check_explicit_n(psi->n());
                } else if (text.rfind("skewscope-samples", 0) == 0) {
                    std::istringstream in(text);
                    sset = ss::read_samples(in);
                } else {
                    throw std::runtime_error("stdin is neither a measure nor a sample file");
                }
            }

            ss::EnumerateResult res;
            if (is_oracle) {
                if (!psi) throw std::runtime_error("oracle needs an explicit measure");
                res.cubes = ss::brute_force_minimal(*psi, q);
                res.states_visited = 0;
                res.recorded = res.cubes.size();
            } else if (psi) {
                res = q.sign == ss::SkewSign::positive ? ss::fsr(*psi, q, workers)
                                                       : ss::fsn(*psi, q, workers);
            } else if (provider == "ffc") {
                ss::PipelineOptions opt;
                opt.rho_top = rho_top;
                opt.lambda = lambda;
                opt.seed = named_seed(seed, "enumerate");
                opt.delta = delta;
                opt.workers = workers;
                res = q.sign == ss::SkewSign::positive ? ss::fsr_pipeline(*sset, q, opt)
                                                       : ss::fsn_pipeline(*sset, q, opt);
            } else {
                res = q.sign == ss::SkewSign::positive ? ss::fsr(*sset, q, delta, workers)
                                                       : ss::fsn(*sset, q, delta, workers);
            }
            emit_reports(em, res);
            em.flush();
            return 0;
        }

        if (verify->parsed()) {
            bool ok;
            if (suite == "identities")
                ok = verify_identities(std::cout, seed);
            else if (suite == "generators")
                ok = verify_generators(std::cout, seed);
            else if (suite == "oracle-equivalence")
                ok = verify_oracle_equivalence(std::cout, n, k, trials, seed);
            else if (suite == "level-k")
                ok = verify_level_k(std::cout, seed);
            else if (suite == "ffc-stat")
                ok = verify_ffc_stat(std::cout, seeds, seed);
            else
                throw std::runtime_error("unknown suite: " + suite);
            return ok ? 0 : 1;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "skewscope/fourier.hpp"
#include "skewscope/measure.hpp"

namespace skewscope {

// Floating-point values are written with %.17g so a reload round-trips to the
// identical double; identical inputs therefore produce byte-identical files.
std::string format_double(double v);

// Measure file: header "skewscope-measure v1 n=<n> format=<dense|sparse>".
// Dense: 2^n density values, one per line, line index = point bits.
// Sparse: lines "<bits-hex> <density>"; absent points have density 0.
ExplicitMeasure read_measure(std::istream& in, bool renormalize = false);
ExplicitMeasure read_measure_file(const std::string& path, bool renormalize = false);
void write_measure(std::ostream& out, const ExplicitMeasure& psi, bool sparse);
void write_measure_file(const std::string& path, const ExplicitMeasure& psi, bool sparse);

// Sample file: header "skewscope-samples v1 n=<n>", one point per line as a
// {0,1}-string whose character i is bit i of the point.
SampleSet read_samples(std::istream& in);
SampleSet read_samples_file(const std::string& path);
void write_samples(std::ostream& out, const SampleSet& s);
void write_samples_file(const std::string& path, const SampleSet& s);

// Spectrum dump: "<mask-hex> <value>" lines, sorted by |S| then mask,
// restricted to |value| >= min_abs.
void write_spectrum(std::ostream& out, const Spectrum& spec, double min_abs);

// "<subcube-string> skew=<v> codim=<j> minimal=<true|false>"
std::string report_line(const SkewReport& r);

uint64_t fnv1a64(const void* data, size_t len);
uint64_t fnv1a64_file(const std::string& path);
std::string hex64(uint64_t v);

// Everything needed to re-run a command bit-identically.
struct RunManifest {
    std::string command;
    std::vector<uint64_t> seeds;
    std::map<std::string, double> params;
    std::map<std::string, std::string> input_digests;  // path -> fnv1a-64 hex
    std::string version = "skewscope 1.0.0";
    std::string to_json() const;
};

}  // namespace skewscope

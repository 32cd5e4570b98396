#include "skewscope/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace skewscope {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::runtime_error(what); }

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) bad("cannot open " + path);
    return f;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) bad("cannot write " + path);
    return f;
}

int parse_header(std::istream& in, const char* magic, std::string* format) {
    std::string line;
    if (!std::getline(in, line)) bad(std::string(magic) + ": missing header");
    std::istringstream hs(line);
    std::string tag, ver, nfield, ffield;
    hs >> tag >> ver >> nfield;
    if (tag != magic || ver != "v1" || nfield.rfind("n=", 0) != 0)
        bad(std::string(magic) + ": bad header: " + line);
    int n = 0;
    try {
        n = std::stoi(nfield.substr(2));
    } catch (const std::exception&) {
        bad(std::string(magic) + ": bad n field: " + nfield);
    }
    if (format) {
        hs >> ffield;
        if (ffield.rfind("format=", 0) != 0) bad(std::string(magic) + ": missing format field");
        *format = ffield.substr(7);
    }
    return n;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ExplicitMeasure read_measure(std::istream& in, bool renormalize) {
    std::string format;
    int n = parse_header(in, "skewscope-measure", &format);
    if (n < 1 || n > kMaxExplicitN) bad("measure: n out of range");
    uint64_t size = uint64_t(1) << n;
    Eigen::ArrayXd density = Eigen::ArrayXd::Zero(Eigen::Index(size));
    if (format == "dense") {
        for (uint64_t i = 0; i < size; ++i)
            if (!(in >> density[Eigen::Index(i)])) bad("measure: truncated density list");
    } else if (format == "sparse") {
        std::string hex;
        double v;
        while (in >> hex >> v) {
            uint64_t bits = 0;
            try {
                bits = std::stoull(hex, nullptr, 16);
            } catch (const std::exception&) {
                bad("measure: bad point " + hex);
            }
            if (bits >= size) bad("measure: point " + hex + " out of range");
            density[Eigen::Index(bits)] = v;
        }
        if (!in.eof() && in.fail()) bad("measure: bad sparse entry");
    } else {
        bad("measure: unknown format " + format);
    }
    return ExplicitMeasure(n, std::move(density), renormalize);
}

ExplicitMeasure read_measure_file(const std::string& path, bool renormalize) {
    auto f = open_in(path);
    return read_measure(f, renormalize);
}

void write_measure(std::ostream& out, const ExplicitMeasure& psi, bool sparse) {
    out << "skewscope-measure v1 n=" << psi.n() << " format=" << (sparse ? "sparse" : "dense")
        << "\n";
    uint64_t size = uint64_t(1) << psi.n();
    if (sparse) {
        char hex[24];
        for (uint64_t i = 0; i < size; ++i)
            if (psi(i) != 0.0) {
                std::snprintf(hex, sizeof hex, "%" PRIx64, i);
                out << hex << " " << format_double(psi(i)) << "\n";
            }
    } else {
        for (uint64_t i = 0; i < size; ++i) out << format_double(psi(i)) << "\n";
    }
}

void write_measure_file(const std::string& path, const ExplicitMeasure& psi, bool sparse) {
    auto f = open_out(path);
    write_measure(f, psi, sparse);
}

SampleSet read_samples(std::istream& in) {
    int n = parse_header(in, "skewscope-samples", nullptr);
    if (n < 1 || n > 63) bad("samples: n out of range");
    SampleSet s;
    s.n = n;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (int(line.size()) != n) bad("samples: line length != n: " + line);
        uint64_t bits = 0;
        for (int i = 0; i < n; ++i) {
            if (line[size_t(i)] == '1')
                bits |= uint64_t(1) << i;
            else if (line[size_t(i)] != '0')
                bad("samples: bad character in " + line);
        }
        s.points.push_back(bits);
    }
    return s;
}

SampleSet read_samples_file(const std::string& path) {
    auto f = open_in(path);
    return read_samples(f);
}

void write_samples(std::ostream& out, const SampleSet& s) {
    out << "skewscope-samples v1 n=" << s.n << "\n";
    std::string line(size_t(s.n), '0');
    for (uint64_t p : s.points) {
        for (int i = 0; i < s.n; ++i) line[size_t(i)] = (p >> i) & 1 ? '1' : '0';
        out << line << "\n";
    }
}

void write_samples_file(const std::string& path, const SampleSet& s) {
    auto f = open_out(path);
    write_samples(f, s);
}

void write_spectrum(std::ostream& out, const Spectrum& spec, double min_abs) {
    uint64_t size = uint64_t(1) << spec.n;
    std::vector<uint64_t> masks;
    for (uint64_t s = 0; s < size; ++s)
        if (std::abs(spec(s)) >= min_abs) masks.push_back(s);
    std::sort(masks.begin(), masks.end(), [](uint64_t a, uint64_t b) {
        int pa = popcount(a), pb = popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    char hex[24];
    for (uint64_t s : masks) {
        std::snprintf(hex, sizeof hex, "%" PRIx64, s);
        out << hex << " " << format_double(spec(s)) << "\n";
    }
}

std::string report_line(const SkewReport& r) {
    std::ostringstream os;
    os << to_string(r.cube) << " skew=" << format_double(r.skew) << " codim=" << r.cube.codim()
       << " minimal=" << (r.minimal ? "true" : "false");
    return os.str();
}

uint64_t fnv1a64(const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) bad("cannot open " + path);
    uint64_t h = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (f.read(buf, sizeof buf) || f.gcount() > 0) {
        std::streamsize got = f.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = version;
    j["command"] = command;
    j["seeds"] = seeds;
    nlohmann::ordered_json p;
    for (const auto& kv : params) p[kv.first] = kv.second;
    j["params"] = std::move(p);
    nlohmann::ordered_json d;
    for (const auto& kv : input_digests) d[kv.first] = kv.second;
    j["inputs"] = std::move(d);
    return j.dump(2);
}

}  // namespace skewscope

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::string work_dir() {
    static std::string dir = [] {
        char tmpl[] = "/tmp/skewscope_cli_XXXXXX";
        char* d = mkdtemp(tmpl);
        if (!d) std::abort();
        return std::string(d);
    }();
    return dir;
}

// Runs through the shell so pipes and env prefixes work as documented.
RunResult run(const std::string& args, const std::string& env_prefix = "") {
    std::string out_path = work_dir() + "/cmd_out.txt";
    std::string err_path = work_dir() + "/cmd_err.txt";
    std::string cmd = env_prefix + SKEWSCOPE_CLI_PATH + " " + args + " >" + out_path + " 2>" +
                      err_path;
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

RunResult run_pipe(const std::string& lhs_args, const std::string& rhs_args) {
    std::string out_path = work_dir() + "/pipe_out.txt";
    std::string err_path = work_dir() + "/pipe_err.txt";
    std::string cli = SKEWSCOPE_CLI_PATH;
    std::string cmd = cli + " " + lhs_args + " 2>/dev/null | " + cli + " " + rhs_args + " >" +
                      out_path + " 2>" + err_path;
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);)
        if (!l.empty()) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("identical invocations produce byte-identical outputs") {
    std::string msr = work_dir() + "/det.msr";
    std::string args = "gen sparse --n 8 --support 32 --seed 5 --format sparse --out " + msr;
    REQUIRE(run(args).exit_code == 0);
    std::string first = slurp(msr);
    std::string first_manifest = slurp(msr + ".manifest.json");
    REQUIRE(run(args).exit_code == 0);
    CHECK(slurp(msr) == first);
    CHECK(slurp(msr + ".manifest.json") == first_manifest);
    CHECK(!first.empty());
    // manifest carries command, seeds, and the tool version
    auto j = nlohmann::json::parse(first_manifest);
    CHECK(j["seeds"][0] == 5);
    CHECK(j["tool"] == "skewscope 1.0.0");
    CHECK(j["command"].get<std::string>().find("gen sparse") != std::string::npos);
    // stdout mode is deterministic too
    RunResult a = run("gen sparse --n 8 --support 32 --seed 5 --format sparse");
    RunResult b = run("gen sparse --n 8 --support 32 --seed 5 --format sparse");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("worker count does not change enumeration output") {
    std::string msr = work_dir() + "/w.msr";
    REQUIRE(run("gen sparse --n 10 --support 64 --seed 9 --out " + msr).exit_code == 0);
    RunResult one = run("enumerate fsr --measure " + msr + " --k 3 --gamma 1 --eps 0.5");
    RunResult four =
        run("enumerate fsr --measure " + msr + " --k 3 --gamma 1 --eps 0.5 --workers 4");
    CHECK(one.exit_code == 0);
    CHECK(one.out == four.out);
    CHECK(!lines_of(one.out).empty());
}

TEST_CASE("a piped sample stream feeds the enumerator end to end") {
    RunResult r = run_pipe("gen parity --n 12 --s 0,3,7 --eta 0.1 --samples 20000 --seed 7",
                           "enumerate fsr --k 4 --gamma 0.5 --eps 1");
    REQUIRE(r.exit_code == 0);
    auto lines = lines_of(r.out);
    CHECK(lines.size() == 8);  // one positive parity cube per assignment of S*
    for (const auto& l : lines) {
        // report starts with the subcube string; fixed set must be {0,3,7,12}
        std::string cube = l.substr(0, l.find(' '));
        REQUIRE(cube.size() == 13);
        for (size_t i = 0; i < cube.size(); ++i) {
            bool fixed = cube[i] != '*';
            bool expected = i == 0 || i == 3 || i == 7 || i == 12;
            CHECK(fixed == expected);
        }
        CHECK(l.find("minimal=true") != std::string::npos);
    }
}

TEST_CASE("the uniform measure yields an empty report with a clean exit") {
    std::string msr = work_dir() + "/u.msr";
    REQUIRE(run("gen subcube --cube \"********\" --out " + msr).exit_code == 0);
    RunResult r = run("enumerate fsr --measure " + msr + " --k 2 --gamma 0.5 --eps 0.5");
    CHECK(r.exit_code == 0);
    CHECK(lines_of(r.out).empty());
}

TEST_CASE("spectrum dump of the dual code is its zero-one support") {
    std::string msr = work_dir() + "/bch.msr";
    REQUIRE(run("gen bch --l 3 --e 1 --out " + msr).exit_code == 0);
    RunResult r = run("fourier dump --measure " + msr + " --min-abs 0.5");
    REQUIRE(r.exit_code == 0);
    auto lines = lines_of(r.out);
    CHECK(lines.size() == 8);  // 2^{n - rows} support sets, all value 1
    for (const auto& l : lines) {
        std::istringstream is(l);
        std::string mask;
        double v;
        is >> mask >> v;
        CHECK(v == 1.0);
    }
    CHECK(lines.front() == "0 1");
    // heavy exact at any rho > 0 keeps only the empty set below size 4:
    // nonzero support words of this code all have weight 2^{l-1} = 4
    RunResult h = run("heavy exact --measure " + msr + " --k 3 --rho 0.25");
    REQUIRE(h.exit_code == 0);
    auto hl = lines_of(h.out);
    REQUIRE(hl.size() == 1);
    CHECK(hl.front() == "0 1");
}

TEST_CASE("the minimum-weight census prints the simplex count") {
    // dual of the [7,4] Hamming code: 7 nonzero words, every one of weight 4
    RunResult r = run("gen bch --l 3 --e 1 --count-min-weight");
    REQUIRE(r.exit_code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(!lines.empty());
    CHECK(lines.front() == "7");
}

TEST_CASE("verification suites pass and unknown suites are refused") {
    RunResult ok = run("verify identities --seed 3");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("ok ") != std::string::npos);
    CHECK(ok.out.find("FAIL") == std::string::npos);
    CHECK(run("verify no-such-suite").exit_code != 0);
}

TEST_CASE("errors carry a message and a nonzero exit") {
    RunResult missing = run("enumerate fsr --measure /nonexistent.msr --k 2 --gamma 1 --eps 1");
    CHECK(missing.exit_code != 0);
    CHECK(missing.err.find("error:") != std::string::npos);
    CHECK(run("enumerate fsr --k 0 --gamma 1 --eps 1").exit_code != 0);
    RunResult badgamma = run("gen subcube --cube \"++**\" --out " + work_dir() + "/g.msr");
    REQUIRE(badgamma.exit_code == 0);
    CHECK(run("enumerate fsr --measure " + work_dir() + "/g.msr --k 1 --gamma 2 --eps 1")
              .exit_code != 0);
}

TEST_CASE("the explicit-measure guard reads the environment override") {
    RunResult refused = run("gen sparse --n 7 --support 4 --seed 1",
                            "SKEWSCOPE_MAX_EXPLICIT_N=6 ");
    CHECK(refused.exit_code != 0);
    CHECK(refused.err.find("SKEWSCOPE_MAX_EXPLICIT_N") != std::string::npos);
    RunResult allowed = run("gen sparse --n 7 --support 4 --seed 1",
                            "SKEWSCOPE_MAX_EXPLICIT_N=7 ");
    CHECK(allowed.exit_code == 0);
    // sample emission never materializes the explicit table, so it passes
    RunResult sampled = run("gen parity --n 25 --s 1,2 --eta 0.1 --samples 50 --seed 1",
                            "SKEWSCOPE_MAX_EXPLICIT_N=6 ");
    CHECK(sampled.exit_code == 0);
}

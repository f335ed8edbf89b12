#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "weyl/io.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    std::string out_file =
        (fs::temp_directory_path() / ("weyl_cli_out_" + std::to_string(counter++))).string();
    std::string cmd = env_prefix + std::string(WEYL_LAB_BIN) + " " + args + " > " + out_file + " 2>&1";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    std::ifstream is(out_file);
    std::ostringstream os;
    os << is.rdbuf();
    r.output = os.str();
    std::remove(out_file.c_str());
    return r;
}

std::string temp_path(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

size_t count_lines(const std::string& s) {
    size_t n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("quantize writes artifacts and reports hermiticity") {
    std::string out = temp_path("weyl_cli_m.json");
    auto r = run_cli("quantize --symbol \"x^2+xi^2\" --d 1 --N 64 --method monomial --out " + out);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("hermiticity_deviation") != std::string::npos);
    CHECK(r.output.find("operator_norm") != std::string::npos);

    auto j = nlohmann::ordered_json::parse(std::ifstream(out));
    CHECK(j["N"] == 64);
    CHECK(j["method"] == "MONOMIAL");
    CHECK(j.contains("config"));  // effective config embedded for provenance
    std::remove(out.c_str());
}

TEST_CASE("quantize exit codes") {
    CHECK(run_cli("quantize --symbol \"x +\" --N 16").exit_code == 2);
    CHECK(run_cli("quantize --symbol \"x2\" --d 1 --N 16").exit_code == 2);
    // kernel of op(1) has norm 1
    auto r = run_cli("quantize --symbol \"1\" --N 32 --method kernel");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("operator_norm 1") != std::string::npos);
    // monomial method on a non-polynomial is a numeric failure
    CHECK(run_cli("quantize --symbol \"cos(x)\" --N 16 --method monomial").exit_code == 3);
}

TEST_CASE("check exit codes encode the verdict") {
    CHECK(run_cli("check --symbol \"2*x + 3*xi\" --N 32").exit_code == 0);
    CHECK(run_cli("check --symbol \"xi^2 + x^3\" --N 32").exit_code == 10);
    CHECK(run_cli("check --symbol \"xi^2 + 1/x\" --N 32").exit_code == 11);
}

TEST_CASE("check writes a schema-tagged report") {
    std::string out = temp_path("weyl_cli_report.json");
    auto r = run_cli("check --symbol \"x^2 + xi^2\" --N 32 --out " + out);
    CHECK(r.exit_code == 0);
    auto j = nlohmann::ordered_json::parse(std::ifstream(out));
    CHECK(j["schema"] == "weyl-lab-report/1");
    CHECK(j["overall"] == "PASS");
    CHECK(j["simple_criterion"]["verdict"] == "PASS");
    std::remove(out.c_str());
}

TEST_CASE("bc emits the documented csv shape") {
    std::string out = temp_path("weyl_cli_bc.csv");
    auto r = run_cli("bc --potential \"x^3\" --L 8,10,12 --grid 4000 --levels 5 --out " + out);
    CHECK(r.exit_code == 0);
    std::ifstream is(out);
    std::ostringstream os;
    os << is.rdbuf();
    std::string csv = os.str();
    CHECK(count_lines(csv) == 2 + 2 * 3 * 5);
    CHECK(csv.rfind("# config:", 0) == 0);
    CHECK(r.output.find("verdict FAIL") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("oracle subcommands print both paths") {
    auto r = run_cli("oracle ladder-entry --row 0 --col 1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("0.70710678") != std::string::npos);
    CHECK(r.output.find("difference") != std::string::npos);
    // the printed difference is tiny
    auto pos = r.output.find("difference ");
    double diff = std::stod(r.output.substr(pos + 11));
    CHECK(diff <= 1e-12);

    CHECK(run_cli("oracle heat-x2 --x 2.0").exit_code == 0);
    CHECK(run_cli("oracle toeplitz-diag --n 3 --N 32").exit_code == 0);
    CHECK(run_cli("oracle weyl-overlap --z 0.5,0.5 --N 48").exit_code == 0);
}

TEST_CASE("toeplitz verifies the heat correspondence") {
    auto r = run_cli("toeplitz --symbol \"(x^2+xi^2)/2\" --N 64 --verify-heat");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("heat_toeplitz_residual") != std::string::npos);
}

TEST_CASE("mnorm flags unbounded symbols") {
    auto r = run_cli("mnorm --symbol \"x\"");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"converged\": false") != std::string::npos);
    auto g = run_cli("mnorm --symbol \"exp(-x^2 - xi^2)\"");
    CHECK(g.output.find("\"converged\": true") != std::string::npos);
}

TEST_CASE("config file precedence and unknown keys") {
    std::string cfg = temp_path("weyl_cli_cfg.json");
    {
        std::ofstream os(cfg);
        os << "{\"N\": 16, \"method\": \"monomial\"}\n";
    }
    auto r = run_cli("quantize --symbol \"x\" --config " + cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"N\":16") != std::string::npos);

    // flags override file values
    auto r2 = run_cli("quantize --symbol \"x\" --N 8 --config " + cfg);
    CHECK(r2.output.find("\"N\":8") != std::string::npos);

    std::string bad = temp_path("weyl_cli_bad.json");
    {
        std::ofstream os(bad);
        os << "{\"unknown_knob\": 3}\n";
    }
    CHECK(run_cli("quantize --symbol \"x\" --config " + bad).exit_code == 3);
    std::remove(cfg.c_str());
    std::remove(bad.c_str());
}

TEST_CASE("worker count comes from the environment when not given") {
    auto r = run_cli("quantize --symbol \"x\" --N 16", "WEYL_LAB_WORKERS=3 ");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("workers 3") != std::string::npos);
    // an explicit flag wins over the environment
    auto r2 = run_cli("quantize --symbol \"x\" --N 16 --workers 2", "WEYL_LAB_WORKERS=5 ");
    CHECK(r2.output.find("workers 2") != std::string::npos);
}

TEST_CASE("artifacts are byte-identical across worker counts") {
    std::string a = temp_path("weyl_cli_w1.json");
    std::string b = temp_path("weyl_cli_w8.json");
    std::string sym = "\"cos(x)*cos(xi)\"";
    CHECK(run_cli("quantize --symbol " + sym + " --N 32 --method kernel --workers 1 --out " + a)
              .exit_code == 0);
    CHECK(run_cli("quantize --symbol " + sym + " --N 32 --method kernel --workers 8 --out " + b)
              .exit_code == 0);
    CHECK(weyl::read_text_file(a) == weyl::read_text_file(b));
    std::remove(a.c_str());
    std::remove(b.c_str());
}

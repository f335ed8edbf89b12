#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "weyl/io.hpp"

using namespace weyl;

namespace {
std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("fock matrix json round trip") {
    auto m = quantize_polynomial(parse("x^2 + x*xi", 1), 8);
    Json j = to_json(m);
    CHECK(j["N"] == 8);
    CHECK(j["method"] == "MONOMIAL");
    FockMatrix back = fock_from_json(j);
    CHECK(back.N == m.N);
    CHECK(back.k == m.k);
    CHECK((back.entries - m.entries).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fock matrix binary layout") {
    auto m = quantize_kernel(parse("cos(x)", 1), 8, {});
    std::string path = temp_path("weyl_io_test.wfm");
    write_fock_binary(m, path);

    std::ifstream is(path, std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                     std::istreambuf_iterator<char>());
    REQUIRE(bytes.size() == 32 + 16u * 8 * 8);
    CHECK(std::string(bytes.begin(), bytes.begin() + 8) == "WEYL0001");
    auto u32 = [&](size_t off) {
        return bytes[off] | (bytes[off + 1] << 8) | (bytes[off + 2] << 16) | (bytes[off + 3] << 24);
    };
    CHECK(u32(8) == 8);   // N
    CHECK(u32(12) == 1);  // d
    CHECK(u32(16) == 1);  // k
    CHECK(u32(20) == 2);  // KERNEL_QUADRATURE
    for (size_t off = 24; off < 32; ++off) CHECK(bytes[off] == 0);

    FockMatrix back = read_fock_binary(path);
    CHECK(back.method == Method::KernelQuadrature);
    CHECK((back.entries - m.entries).cwiseAbs().maxCoeff() == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("sampled symbol container with sidecar") {
    SampledSymbol s;
    s.d = 1;
    s.half_width = 6.0;
    s.points_per_axis = 8;
    s.values.resize(64);
    for (size_t i = 0; i < 64; ++i) s.values[i] = Complex(static_cast<double>(i), -1.0);
    std::string path = temp_path("weyl_io_test.wss");
    write_sampled_binary(s, path);
    CHECK(std::filesystem::exists(path + ".meta.json"));
    SampledSymbol back = read_sampled_binary(path);
    CHECK(back.half_width == 6.0);
    CHECK(back.points_per_axis == 8);
    CHECK(back.values == s.values);
    std::remove(path.c_str());
    std::remove((path + ".meta.json").c_str());
}

TEST_CASE("profile and verdict serialization field names") {
    OscillationProfile p;
    p.direction = 0;
    p.shifts = {PhasePoint{1.0, 0.0}, PhasePoint{2.0, 0.0}};
    p.norms = {2.0, 4.0};
    p.N = 32;
    p.M = 16;
    Json j = to_json(p);
    CHECK(j.contains("direction"));
    CHECK(j.contains("shifts"));
    CHECK(j.contains("norms"));
    CHECK(j.contains("basis_size"));
    CHECK(j.contains("restriction_size"));
    CHECK(j["direction"] == 1);  // 1-based in reports

    CriterionVerdict v;
    v.verdict = Verdict::Pass;
    v.c_estimate = 2.0;
    v.max_ratio = 1.1;
    v.evidence.push_back({PhasePoint{1.0, 0.0}, 2.0, 1.0});
    v.caveats.push_back("x");
    Json jv = to_json(v);
    CHECK(jv["verdict"] == "PASS");
    CHECK(jv.contains("c_estimate"));
    CHECK(jv.contains("max_ratio"));
    CHECK(jv["evidence"][0].contains("z"));
    CHECK(jv["evidence"][0].contains("norm"));
    CHECK(jv["evidence"][0].contains("ratio"));
    CHECK(jv.contains("caveats"));
}

TEST_CASE("report schema and bc csv shape") {
    auto t = bc_sensitivity(parse("x^2", 1), {8.0, 10.0, 12.0}, 1000, 5, {});
    std::string csv = bc_table_csv(t, "{}");
    size_t rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == 2 + 2 * 3 * 5);  // comment + header + payload
    CHECK(csv.find("L,bc,level,eigenvalue") != std::string::npos);
    CHECK(csv.find("DIRICHLET") != std::string::npos);
    CHECK(csv.find("NEUMANN") != std::string::npos);

    DiagnosticsConfig cfg;
    cfg.refine = false;
    cfg.N = 16;
    auto rep = build_report(AnySymbol(parse("2*x", 1)), cfg);
    Json j = to_json(rep);
    CHECK(j["schema"] == "weyl-lab-report/1");
    CHECK(j.contains("overall"));
    CHECK(j.contains("caveats"));
}

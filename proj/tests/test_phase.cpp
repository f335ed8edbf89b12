#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "weyl/phase.hpp"

using namespace weyl;

namespace {
double block_dev(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, int m) {
    return (a.topLeftCorner(m, m) - b.topLeftCorner(m, m)).cwiseAbs().maxCoeff();
}
const QuadratureConfig kQuad{};
}  // namespace

TEST_CASE("form derivative basics") {
    FockMatrix id;
    id.entries = Eigen::MatrixXcd::Identity(32, 32);
    id.N = 32;
    id.d = 1;
    auto dz = form_derivative(id, PhasePoint{1.0, 0.0});
    CHECK(dz.entries.cwiseAbs().maxCoeff() < 1e-14);
    CHECK(dz.method == Method::Commutator);

    // d_1 op(x) = op(1) = I on the trusted block
    FockMatrix q;
    q.entries = position_matrix(64);
    q.N = 64;
    q.d = 1;
    auto dq = form_derivative(q, PhasePoint{1.0, 0.0});
    CHECK(block_dev(dq.entries, Eigen::MatrixXcd::Identity(64, 64), 32) < 1e-8);

    // d_1 op(x^2) = 2 Q
    auto x2 = quantize_polynomial(parse("x^2", 1), 64);
    auto dx2 = form_derivative(x2, PhasePoint{1.0, 0.0});
    auto two_q = quantize_polynomial(parse("2*x", 1), 64);
    CHECK(block_dev(dx2.entries, two_q.entries, 32) < 1e-8);
}

TEST_CASE("form derivative is linear at matrix level") {
    auto a = quantize_polynomial(parse("x^2 + x*xi", 1), 32);
    auto b = quantize_polynomial(parse("xi^3", 1), 32);
    PhasePoint w{0.3, -0.7};
    FockMatrix combo;
    combo.entries = 2.0 * a.entries - 0.5 * b.entries;
    combo.N = 32;
    combo.d = 1;
    auto lhs = form_derivative(combo, w);
    auto da = form_derivative(a, w);
    auto db = form_derivative(b, w);
    Eigen::MatrixXcd rhs = 2.0 * da.entries - 0.5 * db.entries;
    CHECK((lhs.entries - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mixed phase-space derivatives commute on the trusted block") {
    auto a = quantize_polynomial(parse("x^2*xi", 1), 64);
    auto d12 = form_derivative(form_derivative(a, PhasePoint{1.0, 0.0}), PhasePoint{0.0, 1.0});
    auto d21 = form_derivative(form_derivative(a, PhasePoint{0.0, 1.0}), PhasePoint{1.0, 0.0});
    CHECK(block_dev(d12.entries, d21.entries, 32) < 1e-8);
}

TEST_CASE("intertwining residuals") {
    CHECK(intertwining_residual(parse("x^2", 1), MultiIndex{1, 0}, 64, 16, kQuad) < 1e-8);
    CHECK(intertwining_residual(parse("cos(x) + xi^2", 1), MultiIndex{1, 0}, 96, 24, kQuad) < 1e-4);
    CHECK(intertwining_residual(parse("5", 1), MultiIndex{1, 0}, 32, 16, kQuad) < 1e-12);
    CHECK(intertwining_residual(parse("5", 1), MultiIndex{1, 2}, 32, 16, kQuad) < 1e-12);
    CHECK_THROWS_AS(intertwining_residual(parse("x", 1), MultiIndex{1, 0}, 32, 20, kQuad),
                    InvalidConfig);  // M > N/2
}

TEST_CASE("intertwining residual does not grow under refinement") {
    for (const char* s : {"x^2*xi", "x^3", "x*xi"}) {
        auto f = parse(s, 1);
        double r32 = intertwining_residual(f, MultiIndex{1, 0}, 32, 8, kQuad);
        double r64 = intertwining_residual(f, MultiIndex{1, 0}, 64, 8, kQuad);
        double r128 = intertwining_residual(f, MultiIndex{1, 0}, 128, 8, kQuad);
        CHECK(r64 <= r32 + 1e-10);
        CHECK(r128 <= r64 + 1e-10);
    }
}

TEST_CASE("covariance residuals") {
    // op(x + a) = Q + a on the trusted block
    CHECK(covariance_residual(parse("x", 1), PhasePoint{0.9, 0.0}, 128, 16, kQuad) < 1e-6);
    CHECK(covariance_residual(parse("1", 1), PhasePoint{1.3, -0.4}, 64, 16, kQuad) < 1e-10);
    CHECK(covariance_residual(parse("x^2 + xi^2", 1), PhasePoint{0.7, -0.6}, 128, 16, kQuad) <
          1e-4);
    CHECK(covariance_residual(parse("x^2 + xi^2", 1), PhasePoint{0.0, 0.0}, 64, 16, kQuad) == 0.0);
}

TEST_CASE("oscillation profile closed forms") {
    // d_1 (x^2 + xi^2) shifted along e_1 differs by the constant 2a
    auto f = parse("x^2 + xi^2", 1);
    auto p = oscillation_profile(f, 0, octave_shifts(0, 1), 64, 32, kQuad);
    std::vector<double> expect = {2.0, 4.0, 8.0, 16.0};
    for (size_t i = 0; i < expect.size(); ++i)
        CHECK(p.norms[i] == doctest::Approx(expect[i]).epsilon(1e-8));

    // linear symbols have constant gradient: profile identically zero
    auto lin = parse("2*x - 3*xi", 1);
    auto pl = oscillation_profile(lin, 0, octave_shifts(0, 1), 32, 16, kQuad);
    for (double n : pl.norms) CHECK(n < 1e-12);

    // the cubic counterexample keeps growing with the trusted block, far
    // beyond the 5% refinement window that would allow a PASS
    auto bad = parse("xi^2 + x^3", 1);
    auto pb16 = oscillation_profile(bad, 0, octave_shifts(0, 1), 32, 16, kQuad);
    auto pb32 = oscillation_profile(bad, 0, octave_shifts(0, 1), 64, 32, kQuad);
    CHECK(pb32.norms.back() > 1.15 * pb16.norms.back());
}

TEST_CASE("criterion fit verdicts") {
    CriterionOptions opts;
    auto f = parse("x^2 + xi^2", 1);
    auto p = oscillation_profile(f, 0, octave_shifts(0, 1), 32, 16, kQuad);
    auto p2 = oscillation_profile(f, 0, octave_shifts(0, 1), 64, 32, kQuad);
    auto fit = criterion_fit(p, p2, opts);
    CHECK(fit.verdict == Verdict::Pass);
    CHECK(fit.c_estimate >= 1.6);
    CHECK(fit.c_estimate <= 2.0);
    CHECK_FALSE(fit.caveats.empty());

    auto lin = parse("x", 1);
    auto pl = oscillation_profile(lin, 0, octave_shifts(0, 1), 32, 16, kQuad);
    auto fl = criterion_fit(pl, opts);
    CHECK(fl.verdict == Verdict::Pass);
    CHECK(fl.c_estimate == 0.0);

    auto bad = parse("xi^2 + x^3", 1);
    auto pb = oscillation_profile(bad, 0, octave_shifts(0, 1), 32, 16, kQuad);
    auto pb2 = oscillation_profile(bad, 0, octave_shifts(0, 1), 64, 32, kQuad);
    auto fb = criterion_fit(pb, pb2, opts);
    CHECK(fb.verdict == Verdict::Fail);

    OscillationProfile tiny;
    tiny.direction = 0;
    tiny.shifts = octave_shifts(0, 1, {1.0, 2.0});
    tiny.norms = {1.0, 2.0};
    tiny.N = 32;
    tiny.M = 16;
    CHECK_THROWS_AS(criterion_fit(tiny, opts), InsufficientSamples);
}

TEST_CASE("matrix symbols run through the phase calculus") {
    auto F = parse_matrix("[[x^2, x],[x, xi^2]]", 1);
    double r = intertwining_residual(F, MultiIndex{1, 0}, 32, 8, kQuad);
    CHECK(r < 1e-8);
    auto p = oscillation_profile(F, 0, octave_shifts(0, 1), 32, 16, kQuad);
    CHECK(p.norms.size() == 4);
    CHECK(p.norms[0] > 0.0);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "weyl/fock.hpp"
#include "weyl/oracles.hpp"

using namespace weyl;

namespace {
double block_dev(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, int m) {
    return (a.topLeftCorner(m, m) - b.topLeftCorner(m, m)).cwiseAbs().maxCoeff();
}
}  // namespace

TEST_CASE("ladder entries match the quadrature oracle") {
    auto lm = ladder_matrices(16, 1);
    CHECK(lm.Q[0].entries(0, 1).real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(lm.Q[0].entries(0, 1).real() == doctest::Approx(oracle::ladder_q_entry(0, 1)).epsilon(1e-12));
    CHECK(std::abs(lm.Q[0].entries(3, 4) - Complex(oracle::ladder_q_entry(3, 4))) < 1e-12);
    CHECK(std::abs(lm.Q[0].entries(2, 4)) < 1e-14);  // only |m-n|=1 couples

    // the oracle integral fixes the momentum sign: <phi_0, -i phi_1'> = -i/sqrt(2)
    Complex p01 = oracle::ladder_p_entry(0, 1);
    CHECK(p01.real() == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(p01.imag() == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-9));
    CHECK(std::abs(lm.P[0].entries(0, 1) - p01) < 1e-9);
    CHECK(std::abs(lm.P[0].entries(1, 0) - oracle::ladder_p_entry(1, 0)) < 1e-9);

    CHECK(lm.P[0].hermiticity_deviation() < 1e-15);
    CHECK(lm.P[0].entries.real().cwiseAbs().maxCoeff() == 0.0);  // purely imaginary
}

TEST_CASE("canonical commutation relation on the trusted block") {
    auto lm = ladder_matrices(64, 1);
    Eigen::MatrixXcd comm = lm.Q[0].entries * lm.P[0].entries - lm.P[0].entries * lm.Q[0].entries;
    Eigen::MatrixXcd target = Complex(0, 1) * Eigen::MatrixXcd::Identity(64, 64);
    CHECK(block_dev(comm, target, 62) < 1e-10);
    // the top corner is a truncation artifact by construction
    CHECK(std::abs(comm(63, 63) - Complex(0, 1)) > 1.0);
}

TEST_CASE("monomial quantization anchors") {
    CHECK((quantize_monomial({1}, {0}, 32, 1).entries - position_matrix(32)).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((quantize_monomial({0}, {1}, 32, 1).entries - momentum_matrix(32)).cwiseAbs().maxCoeff() ==
          0.0);

    // op(x xi) = (QP + PQ)/2
    Eigen::MatrixXcd q = position_matrix(32), p = momentum_matrix(32);
    Eigen::MatrixXcd sym = 0.5 * (q * p + p * q);
    CHECK((quantize_monomial({1}, {1}, 32, 1).entries - sym).cwiseAbs().maxCoeff() < 1e-14);

    // op((x^2 + xi^2)/2) is diagonal n + 1/2 away from the cutoff
    auto ho = quantize_polynomial(parse("(x^2 + xi^2)/2", 1), 64);
    for (int n = 0; n < 62; ++n) {
        CHECK(std::abs(ho.entries(n, n) - Complex(n + 0.5)) < 1e-10);
        if (n + 1 < 62) CHECK(std::abs(ho.entries(n, n + 1)) < 1e-12);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ho.entries);
    for (int n = 0; n <= 15; ++n)
        CHECK(std::abs(es.eigenvalues()[n] - (n + 0.5)) < 1e-10);
}

TEST_CASE("monomial truncation locality") {
    auto f = parse("x^3*xi", 1);  // degree 4
    auto a = quantize_polynomial(f, 32);
    auto b = quantize_polynomial(f, 40);
    CHECK(block_dev(a.entries, b.entries, 28) == 0.0);

    CHECK_THROWS_AS(quantize_monomial({7}, {6}, 16, 1), CostGuard);
}

TEST_CASE("kernel quantization normalization anchors") {
    QuadratureConfig cfg;
    auto id = quantize_kernel(parse("1", 1), 32, cfg);
    CHECK((id.entries - Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-8);

    auto qx = quantize_kernel(parse("x", 1), 32, cfg);
    CHECK(block_dev(qx.entries, position_matrix(32), 16) < 1e-8);

    auto pxi = quantize_kernel(parse("xi", 1), 32, cfg);
    CHECK(block_dev(pxi.entries, momentum_matrix(32), 16) < 1e-8);

    auto two = quantize_kernel(parse("2", 1), 16, cfg);
    CHECK(operator_norm(two) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("kernel quantization of a mixed symbol matches the monomial route") {
    auto f = parse("x^2*xi", 1);
    auto mk = quantize_kernel(f, 96, {});
    auto mm = quantize_polynomial(f, 96);
    CHECK(block_dev(mk.entries, mm.entries, 16) < 1e-6);
    // degree <= 4 polynomial corpus, quarter block
    for (const char* s : {"x^2 + xi^2", "x*xi", "x^3", "xi^4", "(x + xi)^2"}) {
        auto g = parse(s, 1);
        auto k = quantize_kernel(g, 96, {});
        auto m = quantize_polynomial(g, 96);
        CHECK(block_dev(k.entries, m.entries, 24) < 1e-6);
    }
}

TEST_CASE("kernel quantization agrees with the direct-quadrature oracle on cos(x)") {
    auto f = parse("cos(x)", 1);
    auto m = quantize_kernel(f, 32, {});
    CHECK(m.hermiticity_deviation() < 1e-10);
    for (auto [i, j] : {std::pair{0, 0}, {0, 1}, {1, 1}, {2, 0}, {3, 2}}) {
        Complex o = oracle::kernel_matrix_element(f, i, j);
        CHECK(std::abs(m.entries(i, j) - o) < 1e-8);
    }
}

TEST_CASE("kernel quantization of oscillatory-in-xi symbols stays hermitian") {
    auto m = quantize_kernel(parse("cos(x)*cos(xi)", 1), 48, {});
    CHECK(m.hermiticity_deviation() < 1e-10);
    auto g = quantize_kernel(parse("sin(xi)", 1), 48, {});
    CHECK(g.hermiticity_deviation() < 1e-10);
}

TEST_CASE("grid-doubling guard") {
    QuadratureConfig cfg;
    cfg.verify_grid = true;
    CHECK_NOTHROW(quantize_kernel(parse("cos(x)*cos(xi)", 1), 16, cfg));
    cfg.grid_tol = 0.0;
    CHECK_THROWS_AS(quantize_kernel(parse("cos(x)*cos(xi)", 1), 16, cfg), GridTooCoarse);
}

TEST_CASE("sampled symbols quantize through the same pipeline") {
    // sample exp(-x^2-xi^2) on a grid and compare with the closed-form path
    auto f = parse("exp(-x^2 - xi^2)", 1);
    QuadratureConfig cfg;
    int n = 256;
    SampledSymbol s;
    s.d = 1;
    s.half_width = cfg.resolved_box_x(24);
    s.points_per_axis = n;
    s.values.resize(static_cast<size_t>(n) * n);
    PhasePoint z = PhasePoint::zero(1);
    for (int i = 0; i < n; ++i) {
        z.coords[0] = s.node(i);
        for (int j = 0; j < n; ++j) {
            z.coords[1] = s.node(j);
            s.values[static_cast<size_t>(i) * n + j] = f.evaluate(z);
        }
    }
    auto a = quantize_kernel(s, 24, cfg);
    auto b = quantize_kernel(f, 24, cfg);
    CHECK(block_dev(a.entries, b.entries, 12) < 1e-6);
}

TEST_CASE("weyl operators are unitary and reproduce the vacuum overlap oracle") {
    auto w0 = weyl_operator(PhasePoint{0.0, 0.0}, 32, 1);
    CHECK((w0.entries - Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-14);

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.4, 1.4);
    for (int trial = 0; trial < 5; ++trial) {
        PhasePoint z{u(rng), u(rng)};
        auto w = weyl_operator(z, 64, 1);
        CHECK((w.entries.adjoint() * w.entries - Eigen::MatrixXcd::Identity(64, 64))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        double fast = std::abs(w.entries(0, 0));
        double slow = oracle::weyl_vacuum_overlap(z.coords[0], z.coords[1]);
        CHECK(std::abs(fast - slow) < 1e-8);
    }
    CHECK_THROWS_AS(weyl_operator(PhasePoint{20.0, 0.0}, 32, 1), InvalidConfig);
}

TEST_CASE("projective composition has a frozen phase") {
    // W_z W_w = exp(c sigma(z,w)) W_{z+w}; c = -i/2 under this convention,
    // fixed once against the explicit-action oracle and kept as a regression
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        PhasePoint z{u(rng), u(rng)}, w{u(rng), u(rng)};
        auto Wz = weyl_operator(z, 48, 1);
        auto Ww = weyl_operator(w, 48, 1);
        auto Wzw = weyl_operator(z + w, 48, 1);
        Eigen::MatrixXcd prod = Wz.entries * Ww.entries;
        Complex scalar = prod(0, 0) / Wzw.entries(0, 0);
        CHECK(std::abs(std::abs(scalar) - 1.0) < 1e-8);
        double sigma = z.coords[0] * w.coords[1] - w.coords[0] * z.coords[1];
        Complex frozen = std::exp(Complex(0.0, -0.5) * sigma);
        CHECK(std::abs(scalar - frozen) < 1e-8);
        CHECK(block_dev(prod, (frozen * Wzw.entries).eval(), 12) < 1e-8);
    }
}

TEST_CASE("operator norm") {
    FockMatrix id;
    id.entries = Eigen::MatrixXcd::Identity(20, 20);
    id.N = 20;
    CHECK(operator_norm(id) == doctest::Approx(1.0).epsilon(1e-12));

    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(16, 16);
    for (int i = 0; i < 16; ++i) diag(i, i) = i;
    CHECK(operator_norm(diag) == doctest::Approx(15.0).epsilon(1e-12));
}

TEST_CASE("dispatch and matrix symbols") {
    QuadratureConfig cfg;
    CHECK_THROWS_AS(quantize(parse("cos(x)", 1), 16, Method::Monomial, cfg), MethodMismatch);

    auto blocks = quantize(parse_matrix("[[x, 0],[0, -x]]", 1), 16, Method::Monomial, cfg);
    Eigen::MatrixXcd q = position_matrix(16);
    for (int rm = 0; rm < 16; ++rm)
        for (int rn = 0; rn < 16; ++rn) {
            CHECK(blocks.entries(2 * rm, 2 * rn) == q(rm, rn));
            CHECK(blocks.entries(2 * rm + 1, 2 * rn + 1) == -q(rm, rn));
            CHECK(blocks.entries(2 * rm, 2 * rn + 1) == Complex(0.0));
        }

    auto herm = quantize_auto(parse_matrix("[[cos(x) + xi^2, sin(x)],[sin(x), -cos(x) + xi^2]]", 1),
                              24, cfg);
    CHECK(herm.hermiticity_deviation() < 1e-10);
    CHECK(herm.method == Method::KernelQuadrature);
    CHECK(herm.entries.rows() == 48);

    CHECK(quantize_auto(parse("x^2", 1), 16, cfg).method == Method::Monomial);
    CHECK(quantize_auto(parse("cos(x)", 1), 16, cfg).method == Method::KernelQuadrature);
}

TEST_CASE("two-mode quantization") {
    auto lm = ladder_matrices(6, 2);
    CHECK(lm.Q[0].entries.rows() == 36);
    // op(x1 xi2) = Q_1 (x) P_2 under the lexicographic ordering
    auto m = quantize_monomial({1, 0}, {0, 1}, 6, 2);
    Eigen::MatrixXcd expect = kron(position_matrix(6), momentum_matrix(6));
    CHECK((m.entries - expect).cwiseAbs().maxCoeff() < 1e-14);

    QuadratureConfig cfg;
    cfg.xi_grid = 64;
    auto id2 = quantize_kernel(parse("1", 2), 6, cfg);
    CHECK((id2.entries - Eigen::MatrixXcd::Identity(36, 36)).cwiseAbs().maxCoeff() < 1e-8);
    auto x1 = quantize_kernel(parse("x1", 2), 6, cfg);
    CHECK((x1.entries - lm.Q[0].entries).topLeftCorner(18, 18).cwiseAbs().maxCoeff() < 1e-8);
    // a genuinely mixed two-mode symbol through the general path; the
    // xi_2-independent axis must collapse to its exact zero mode
    auto mixed = quantize_kernel(parse("x1*xi1", 2), 4, cfg);
    auto mono = quantize_monomial({1, 0}, {1, 0}, 4, 2);
    CHECK(block_dev(mixed.entries, mono.entries, 8) < 1e-6);
}

TEST_CASE("projection onto the trusted cube") {
    auto ho = quantize_polynomial(parse("(x1^2 + xi1^2 + x2^2 + xi2^2)/2", 2), 8);
    Eigen::MatrixXcd blk = project_block(ho, 4);
    CHECK(blk.rows() == 16);
    // diagonal entries are n1 + n2 + 1 on the cube
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            CHECK(std::abs(blk(a * 4 + b, a * 4 + b) - Complex(a + b + 1.0)) < 1e-12);
}

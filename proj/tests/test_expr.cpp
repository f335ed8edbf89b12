#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "weyl/expr.hpp"

using namespace weyl;

namespace {

std::vector<PhasePoint> sample_points(int d, int count, unsigned seed, double box = 5.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-box, box);
    std::vector<PhasePoint> pts;
    for (int i = 0; i < count; ++i) {
        std::vector<double> c(static_cast<size_t>(2 * d));
        for (double& v : c) v = u(rng);
        pts.emplace_back(std::move(c));
    }
    return pts;
}

void check_same_on_grid(const SymbolExpr& a, const SymbolExpr& b, double rel = 1e-12,
                        unsigned seed = 7) {
    for (const auto& z : sample_points(a.dof(), 60, seed)) {
        Complex va = a.evaluate(z);
        Complex vb = b.evaluate(z);
        double scale = std::max({std::abs(va), std::abs(vb), 1.0});
        CHECK(std::abs(va - vb) <= rel * scale);
    }
}

}  // namespace

TEST_CASE("parsing and evaluation basics") {
    auto f = parse("x^2 + xi^2", 1);
    CHECK(f.evaluate(PhasePoint{1.0, 1.0}) == Complex(2.0));

    auto g = parse("cos(x) * xi", 1);
    CHECK(g.evaluate(PhasePoint{0.0, 3.0}).real() == doctest::Approx(3.0).epsilon(1e-15));

    auto h = parse("x^3 + xi^2", 1);
    CHECK(h.evaluate(PhasePoint{2.0, 1.0}).real() == doctest::Approx(9.0));

    CHECK(parse("exp(-x^2 - xi^2)", 1).evaluate(PhasePoint{0.0, 0.0}) == Complex(1.0));
}

TEST_CASE("identifier resolution and error positions") {
    CHECK_THROWS_AS(parse("x1 + q", 1), UnknownIdentifier);
    try {
        parse("x1 + q", 1);
    } catch (const UnknownIdentifier& e) {
        CHECK(e.name() == "q");
        CHECK(e.position() == 5);
    }
    CHECK_NOTHROW(parse("x1 + xi1", 1));  // indexed spelling allowed at d = 1
    CHECK_THROWS_AS(parse("x2", 1), DimensionMismatch);
    CHECK_THROWS_AS(parse("x", 2), DimensionMismatch);
    CHECK_NOTHROW(parse("x1*xi2 + x2", 2));
    CHECK_THROWS_AS(parse("x3", 2), DimensionMismatch);
    CHECK_THROWS_AS(parse("x +", 1), SyntaxError);
    CHECK_THROWS_AS(parse("sin x", 1), SyntaxError);
    CHECK_THROWS_AS(parse("(x", 1), SyntaxError);
    CHECK_THROWS_AS(parse("x^xi", 1), SyntaxError);
}

TEST_CASE("numbers, imaginary suffix, precedence") {
    CHECK(parse("2.5", 1).evaluate(PhasePoint{0, 0}) == Complex(2.5));
    CHECK(parse("3i", 1).evaluate(PhasePoint{0, 0}) == Complex(0.0, 3.0));
    CHECK(parse("1e-3", 1).evaluate(PhasePoint{0, 0}) == Complex(1e-3));
    // ^ binds tightest, unary minus below *
    CHECK(parse("-x^2", 1).evaluate(PhasePoint{2, 0}) == Complex(-4.0));
    CHECK(parse("2*-x", 1).evaluate(PhasePoint{3, 0}) == Complex(-6.0));
    CHECK(parse("6 - 3 - 2", 1).evaluate(PhasePoint{0, 0}) == Complex(1.0));  // left assoc
    CHECK(parse("x^-1", 1).evaluate(PhasePoint{4, 0}) == Complex(0.25));
}

TEST_CASE("division and non-finite errors") {
    auto f = parse("1/x", 1);
    CHECK_THROWS_AS(f.evaluate(PhasePoint{0.0, 0.0}), DivisionByZero);
    CHECK(f.evaluate(PhasePoint{2.0, 0.0}) == Complex(0.5));
    auto g = parse("exp(x^2)", 1);
    CHECK_THROWS_AS(g.evaluate(PhasePoint{100.0, 0.0}), NonFinite);
}

TEST_CASE("differentiation examples") {
    auto f = parse("x^3", 1);
    auto d2 = f.differentiate(MultiIndex{2, 0});
    CHECK(d2.to_string() == "6*x");

    auto counter = parse("xi^2 + x^3", 1);
    auto dx = counter.differentiate(MultiIndex{1, 0});
    check_same_on_grid(dx, parse("3*x^2", 1));

    auto c4 = parse("cos(x)", 1).differentiate(MultiIndex{4, 0});
    check_same_on_grid(c4, parse("cos(x)", 1));

    // derivative closure over the whole function set
    auto mix = parse("tanh(x*xi) / (2 + x^2) + sinh(x)*cosh(xi)", 1);
    CHECK_NOTHROW(mix.differentiate(MultiIndex{2, 2}));
}

TEST_CASE("differentiation is linear on sample grids") {
    auto f = parse("sin(x)*xi^2", 1);
    auto g = parse("exp(-x^2 - xi^2)", 1);
    Complex a(2.0, 0.0), b(-0.5, 0.0);
    auto combo = SymbolExpr::constant(a, 1) * f + SymbolExpr::constant(b, 1) * g;
    MultiIndex gamma{1, 1};
    auto lhs = combo.differentiate(gamma);
    auto rhs = SymbolExpr::constant(a, 1) * f.differentiate(gamma) +
               SymbolExpr::constant(b, 1) * g.differentiate(gamma);
    check_same_on_grid(lhs, rhs);
}

TEST_CASE("shift substitutes and composes") {
    auto f = parse("x", 1);
    auto s = f.shift(PhasePoint{1.5, 0.0});
    CHECK(s.evaluate(PhasePoint{2.0, 0.0}) == Complex(3.5));

    auto g = parse("sin(x)*xi + x^2", 1);
    PhasePoint z{0.7, -1.2}, w{-0.4, 0.9};
    auto double_shift = g.shift(z).shift(w);
    auto sum_shift = g.shift(z + w);
    check_same_on_grid(double_shift, sum_shift);

    // evaluate(shift(f,z), w) = evaluate(f, w + z)
    for (const auto& pt : sample_points(1, 40, 3)) {
        Complex lhs = g.shift(z).evaluate(pt);
        Complex rhs = g.evaluate(pt + z);
        CHECK(std::abs(lhs - rhs) <= 4e-15 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("shift of a linear symbol adds the pairing constant") {
    // w.R picks up (w.z) under the phase-space shift
    double wx = 2.0, wxi = -3.0;
    PhasePoint z{0.5, 1.25};
    auto linear = parse("2*x - 3*xi", 1);
    auto shifted = linear.shift(z);
    double pairing = wx * z.coords[0] + wxi * z.coords[1];
    for (const auto& pt : sample_points(1, 30, 11)) {
        Complex lhs = shifted.evaluate(pt);
        Complex rhs = linear.evaluate(pt) + pairing;
        CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("shift and derivative commute") {
    auto f = parse("cos(x*xi) + x^3", 1);
    PhasePoint z{0.3, -0.8};
    MultiIndex gamma{1, 1};
    check_same_on_grid(f.shift(z).differentiate(gamma), f.differentiate(gamma).shift(z), 1e-11);
}

TEST_CASE("print/parse round trip agrees on random points") {
    const char* symbols[] = {
        "x^2 + xi^2",
        "cos(x)*xi - sin(xi)/(2 + x^2)",
        "exp(-x^2 - xi^2)*tanh(x)",
        "(1 + 2i)*x + 3i*xi^2",
        "-x^3 + 2*x*xi - 7",
    };
    for (const char* s : symbols) {
        auto f = parse(s, 1);
        auto g = parse(f.to_string(), 1);
        for (const auto& z : sample_points(1, 100, 17)) {
            Complex a = f.evaluate(z);
            Complex b = g.evaluate(z);
            CHECK(std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("polynomial detection and monomial expansion") {
    auto p = parse("(x + xi)^2 / 2", 1);
    CHECK(p.is_polynomial());
    auto mono = p.monomials();
    CHECK(mono.at({2, 0}) == Complex(0.5));
    CHECK(mono.at({1, 1}) == Complex(1.0));
    CHECK(mono.at({0, 2}) == Complex(0.5));
    CHECK(p.polynomial_degree() == 2);

    CHECK_FALSE(parse("cos(x)", 1).is_polynomial());
    CHECK_THROWS_AS(parse("cos(x)", 1).monomials(), MethodMismatch);
    CHECK_FALSE(parse("1/x", 1).is_polynomial());
}

TEST_CASE("matrix symbols parse, evaluate, and stay square") {
    auto m = parse_matrix("[[x, 1i*xi],[-1i*xi, -x]]", 1);
    CHECK(m.k() == 2);
    auto v = m.evaluate(PhasePoint{2.0, 3.0});
    CHECK(v(0, 0) == Complex(2.0));
    CHECK(v(0, 1) == Complex(0.0, 3.0));
    CHECK(v(1, 0) == Complex(0.0, -3.0));

    CHECK_THROWS_AS(parse_matrix("[[x, xi],[x]]", 1), DimensionMismatch);
    CHECK_THROWS_AS(parse_matrix("[[x, xi]]", 1), DimensionMismatch);
    CHECK(looks_like_matrix("  [[x]]"));
    CHECK_FALSE(looks_like_matrix("x + 1"));

    auto dm = m.differentiate(MultiIndex{1, 0});
    CHECK(dm.at(0, 0).to_string() == "1");
    auto sm = m.shift(PhasePoint{1.0, 0.0});
    CHECK(sm.at(0, 0).evaluate(PhasePoint{0.0, 0.0}) == Complex(1.0));
}

TEST_CASE("two degrees of freedom") {
    auto f = parse("x1*xi2 + x2^2", 2);
    CHECK(f.evaluate(PhasePoint{1.0, 2.0, 3.0, 4.0}) == Complex(8.0));
    auto d = f.differentiate(MultiIndex{0, 2, 0, 0});
    CHECK(d.evaluate(PhasePoint{0.0, 0.0, 0.0, 0.0}) == Complex(2.0));
    CHECK_THROWS_AS(f.evaluate(PhasePoint{1.0, 2.0}), DimensionMismatch);
}

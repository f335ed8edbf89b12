#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "weyl/hermite.hpp"
#include "weyl/errors.hpp"

using namespace weyl;

TEST_CASE("values at the origin") {
    const double quartic = std::pow(M_PI, -0.25);
    CHECK(hermite_eval(0, 0.0) == doctest::Approx(quartic).epsilon(1e-14));
    CHECK(hermite_eval(1, 0.0) == doctest::Approx(0.0));
    CHECK(hermite_eval(2, 0.0) == doctest::Approx(-quartic / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(hermite_eval(0, 0.0) == doctest::Approx(0.7511255444649425).epsilon(1e-14));
    CHECK(hermite_eval(2, 0.0) == doctest::Approx(-0.5311259660135985).epsilon(1e-12));
}

TEST_CASE("recurrence stays in range at extreme arguments") {
    // n = 2000, y = 50: the polynomial factor alone overflows a double
    double v = hermite_eval(2000, 50.0);
    CHECK(std::isfinite(v));
    CHECK(std::abs(v) < 1.0);
    CHECK(std::abs(v) > 0.0);  // still inside the classically allowed region

    CHECK(hermite_eval(4, 40.0) == 0.0);  // deep tail underflows to zero
    CHECK(std::isfinite(hermite_eval(1500, 10.0)));
    CHECK_THROWS_AS(hermite_eval(2001, 0.0), InvalidConfig);
    CHECK_THROWS_AS(hermite_eval(-1, 0.0), InvalidConfig);
}

TEST_CASE("hermite_all agrees with hermite_eval") {
    std::vector<double> vals;
    for (double y : {-3.7, -0.5, 0.0, 1.1, 6.0}) {
        hermite_all(40, y, vals);
        for (int n = 0; n <= 40; n += 5)
            CHECK(vals[static_cast<size_t>(n)] ==
                  doctest::Approx(hermite_eval(n, y)).epsilon(1e-12));
    }
}

TEST_CASE("gauss-hermite rule integrates hermite products exactly") {
    GaussHermiteRule rule = gauss_hermite(64);
    // orthonormality
    std::vector<double> vals;
    for (int m = 0; m <= 20; m += 4)
        for (int n = 0; n <= 20; n += 3) {
            double acc = 0.0;
            for (size_t i = 0; i < rule.nodes.size(); ++i) {
                hermite_all(std::max(m, n), rule.nodes[i], vals);
                acc += rule.weights[i] * vals[static_cast<size_t>(m)] * vals[static_cast<size_t>(n)];
            }
            CHECK(acc == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-12));
        }
}

TEST_CASE("gauss-hermite rule reproduces gaussian moments") {
    GaussHermiteRule rule = gauss_hermite(48);
    double m0 = 0.0, m2 = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        double x = rule.nodes[i];
        double g = std::exp(-x * x);
        m0 += rule.weights[i] * g;
        m2 += rule.weights[i] * x * x * g;
    }
    CHECK(m0 == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-13));
}

TEST_CASE("high-order rules stay finite") {
    GaussHermiteRule rule = gauss_hermite(512);
    for (double w : rule.weights) {
        CHECK(std::isfinite(w));
        CHECK(w > 0.0);
    }
    CHECK(std::abs(rule.nodes.front() + rule.nodes.back()) < 1e-10);  // symmetric
}

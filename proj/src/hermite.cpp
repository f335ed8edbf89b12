#include "weyl/hermite.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "weyl/errors.hpp"

namespace weyl {

namespace {
const double kQuarticRootPi = 0.7511255444649425;  // pi^{-1/4}
const double kLn2 = 0.6931471805599453;
}  // namespace

double hermite_eval(int n, double y) {
    if (n < 0 || n > 2000) throw InvalidConfig("hermite_eval: n must be in [0, 2000]");
    // h_k = (2^k k! sqrt(pi))^{-1/2} H_k(y), so phi_n = h_n e^{-y^2/2}.
    // Carry a binary exponent c so h stays in range for large |y|.
    double h0 = kQuarticRootPi;
    double h1 = std::sqrt(2.0) * y * h0;
    long c = 0;
    const double big = 0x1p500;
    const double small = 0x1p-500;
    double hn = (n == 0) ? h0 : h1;
    for (int k = 1; k < n; ++k) {
        double next = std::sqrt(2.0 / (k + 1)) * y * h1 - std::sqrt(k / (k + 1.0)) * h0;
        h0 = h1;
        h1 = next;
        if (std::abs(h1) > big) {
            h0 *= small;
            h1 *= small;
            c += 500;
        }
        hn = h1;
    }
    double t = static_cast<double>(c) * kLn2 - 0.5 * y * y;
    if (c == 0 && t > -700.0) return hn * std::exp(t);
    if (t < -745.0 - std::log(std::abs(hn) + 1e-300)) return 0.0;
    return hn * std::exp(t);
}

void hermite_all(int nmax, double y, std::vector<double>& out) {
    if (nmax < 0) throw InvalidConfig("hermite_all: nmax must be >= 0");
    if (std::abs(y) > 37.0)
        throw InvalidConfig("hermite_all: |y| too large for the direct recurrence");
    out.resize(static_cast<size_t>(nmax) + 1);
    double g = kQuarticRootPi * std::exp(-0.5 * y * y);
    out[0] = g;
    if (nmax == 0) return;
    out[1] = std::sqrt(2.0) * y * g;
    for (int k = 1; k < nmax; ++k)
        out[static_cast<size_t>(k) + 1] =
            std::sqrt(2.0 / (k + 1)) * y * out[static_cast<size_t>(k)] -
            std::sqrt(k / (k + 1.0)) * out[static_cast<size_t>(k) - 1];
}

GaussHermiteRule gauss_hermite(int order) {
    if (order < 1 || order > 1024) throw InvalidConfig("gauss_hermite: order must be in [1, 1024]");
    // Golub-Welsch nodes: eigenvalues of the symmetric tridiagonal Jacobi
    // matrix for the weight e^{-x^2} (zero diagonal, off-diagonal sqrt(k/2)).
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(order > 1 ? order - 1 : 0);
    for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

    GaussHermiteRule rule;
    rule.nodes.resize(static_cast<size_t>(order));
    rule.weights.resize(static_cast<size_t>(order));
    std::vector<double> phis;
    for (int i = 0; i < order; ++i) {
        double x = es.eigenvalues()[i];
        rule.nodes[static_cast<size_t>(i)] = x;
        // Christoffel identity: the unit-weight Gauss weight at x equals
        // 1 / sum_{k<order} phi_k(x)^2.
        hermite_all(order - 1, x, phis);
        double s = 0.0;
        for (double p : phis) s += p * p;
        rule.weights[static_cast<size_t>(i)] = 1.0 / s;
    }
    return rule;
}

}  // namespace weyl

#pragma once

#include <vector>

namespace weyl {

/// Value of the n-th L^2-orthonormal Hermite function
///   phi_n(y) = (2^n n! sqrt(pi))^{-1/2} H_n(y) e^{-y^2/2},
/// computed by the normalized three-term recurrence with an exponent-carrying
/// rescale so that no intermediate overflows for n <= 2000.
double hermite_eval(int n, double y);

/// phi_0..phi_nmax at one point (fast path; |y| must stay below the direct
/// recurrence's underflow guard, which holds for every quadrature node used
/// in this project).
void hermite_all(int nmax, double y, std::vector<double>& out);

/// Gauss-Hermite rule recast for unit-weight integrals of Hermite-type
/// integrands: integral g(y) dy ~= sum_i w[i] g(x[i]), exact whenever
/// g(y) = p(y) e^{-y^2} with deg p <= 2n-1. The weights are the classical
/// ones with the e^{x_i^2} factor folded in (w_i = 1 / sum_k phi_k(x_i)^2),
/// which keeps everything in range at high order.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussHermiteRule gauss_hermite(int order);

}  // namespace weyl

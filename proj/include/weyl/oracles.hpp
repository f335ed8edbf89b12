#pragma once

#include <complex>

#include "weyl/expr.hpp"

namespace weyl::oracle {

/// Slow, first-principles reference computations. Everything here is built
/// from direct quadrature of the defining integrals (plus finite differences
/// for derivatives) and stays independent of the fast quantization paths it
/// is used to check.

/// <phi_m, y phi_n> by Gauss-Hermite quadrature.
double ladder_q_entry(int m, int n);

/// <phi_m, -i phi_n'> with phi_n' from a five-point finite-difference stencil.
std::complex<double> ladder_p_entry(int m, int n);

/// Matrix element <phi_m, op(f) phi_n> by direct quadrature of the defining
/// triple integral (fine uniform x/y grids, tapered xi transform).
std::complex<double> kernel_matrix_element(const SymbolExpr& f, int m, int n,
                                           double box = 10.0, int xy_points = 200,
                                           double xi_box = 0.0, int xi_points = 2048);

/// |<phi_0, W_z phi_0>| from the explicit shift-and-phase action of the Weyl
/// operator on functions.
double weyl_vacuum_overlap(double x, double xi, int points = 4000, double box = 14.0);

/// |<coherent(z), coherent(w)>| from the same explicit action.
double coherent_overlap(const PhasePoint& z, const PhasePoint& w, int points = 4000,
                        double box = 16.0);

/// Diagonal <e_n, T_{(x^2+xi^2)/2} e_n> by fine radial quadrature of the
/// Bargmann monomial integral (expected n + 1).
double harmonic_toeplitz_diagonal(int n, int points = 200000, double rmax = 30.0);

/// Gaussian-moment check: integral (x - u)^2 g(u) du with the calibrated
/// kernel, evaluated by direct quadrature (expected x^2 + 1/2).
double heat_of_x2(double x, int points = 20001, double box = 12.0);

}  // namespace weyl::oracle

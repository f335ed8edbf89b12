#pragma once

#include <Eigen/Core>

#include "weyl/fock.hpp"

namespace weyl {

/// Heat time matching the Toeplitz correspondence on this basis: the kernel
/// is (1/pi)^d exp(-|z|^2), i.e. variance 1/2 per phase-space coordinate.
inline constexpr double kCalibratedHeatTime = 0.25;

struct HeatConfig {
    double half_width = 12.0;  // output box [-R, R)^{2d}
    int points = 512;          // per axis, power of two
    double pad = 8.0;          // sampling margin absorbing the kernel reach
    bool verify_box = true;    // recompute with doubled margin and compare
    double box_tol = 1e-8;
};

/// Gaussian smoothing of the symbol: convolution with the heat kernel at
/// time t (variance 2t per coordinate). Realized on a padded grid by FFT.
SampledSymbol heat_transform(const SymbolExpr& f, double t, const HeatConfig& cfg = {});
SampledSymbol heat_transform(const SampledSymbol& f, double t, bool verify_box = true,
                             double box_tol = 1e-8);

/// Closed form for polynomial symbols via Gaussian moments.
SymbolExpr heat_transform_polynomial(const SymbolExpr& f, double t);

/// Normalized coherent state centered at the phase-space point z (the
/// displaced vacuum), as a column in the truncated basis.
Eigen::VectorXcd coherent_state(const PhasePoint& z, int N);

/// Closed-form Bargmann coefficients <e_n, coherent> for the complex label
/// w = r e^{i theta} under the identification w = (x + i xi)/sqrt(2).
Eigen::VectorXcd coherent_coefficients(double r, double theta, int N);

struct PolarQuadratureConfig {
    int radial_panels = 32;    // composite Gauss-Legendre panels on [0, r_max]
    int panel_points = 12;
    int angular_grid = 0;      // power of two; 0 = auto: max(256, 4N)
    double radial_max = 0.0;   // 0 = auto: sqrt(2N) + 8
    bool verify = false;       // recompute at doubled resolution and compare
    double tol = 1e-6;
    int workers = 0;

    void validate() const;
    int resolved_angular(int N) const;
    double resolved_radial_max(int N) const;
};

/// Toeplitz (anti-Wick) matrix: the compression of multiplication by f to
/// the truncated Bargmann basis, assembled from the coherent-state
/// resolution of identity on a polar grid.
FockMatrix toeplitz_matrix(const SymbolExpr& f, int N, const PolarQuadratureConfig& cfg = {});

/// || P_M ( toeplitz(f) - op(heat f at the calibrated time) ) P_M ||.
double heat_toeplitz_residual(const SymbolExpr& f, int N, int M,
                              const PolarQuadratureConfig& polar = {},
                              QuadratureConfig quad = {}, const HeatConfig& heat = {});

}  // namespace weyl

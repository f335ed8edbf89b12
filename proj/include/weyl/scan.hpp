#pragma once

#include <string>
#include <vector>

#include "weyl/expr.hpp"

namespace weyl {

enum class GrowthVerdict { Bounded, Growing, Inconclusive };

std::string to_string(GrowthVerdict v);

/// Sup of |f| (operator norm for matrix symbols) over expanding boxes
/// [-L, L]^{2d}. Per-box sups are non-decreasing in L by construction
/// (running maximum over nested boxes).
struct SupEstimate {
    std::vector<double> half_widths;
    std::vector<double> sups;
    GrowthVerdict verdict = GrowthVerdict::Inconclusive;
    double last_ratio = 1.0;
};

struct ScanOptions {
    int points_per_axis = 201;       // clamped so the total grid stays <= 10^7 points
    double growth_threshold = 1.5;   // GROWING iff the final sup ratio exceeds this
    int workers = 0;                 // 0 = default_workers()
};

SupEstimate sup_scan(const SymbolExpr& f, const std::vector<double>& half_widths,
                     const ScanOptions& opts = {});
SupEstimate sup_scan(const MatrixSymbol& f, const std::vector<double>& half_widths,
                     const ScanOptions& opts = {});

/// Hermiticity check on a sample grid: max over the grid of the entrywise
/// deviation |F_ij(z) - conj(F_ji(z))| / 2, which for scalars is |Im f(z)|.
struct HermiticityReport {
    bool pass = false;
    double max_deviation = 0.0;
    double tolerance = 0.0;
};

HermiticityReport is_hermitian(const SymbolExpr& f, double box_half_width = 5.0,
                               int points_per_axis = 21, double tolerance = 1e-10);
HermiticityReport is_hermitian(const MatrixSymbol& f, double box_half_width = 5.0,
                               int points_per_axis = 21, double tolerance = 1e-10);

}  // namespace weyl

#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "weyl/bargmann.hpp"
#include "weyl/phase.hpp"
#include "weyl/scan.hpp"

namespace weyl {

using AnySymbol = std::variant<SymbolExpr, MatrixSymbol>;

struct DiagnosticsConfig {
    int N = 32;                 // base cutoff for operator-level checks
    bool refine = true;         // recompute oscillation profiles at 2N
    std::vector<double> L_schedule = {1.0, 10.0, 100.0, 1000.0};
    int scan_points = 201;
    double growth_threshold = 1.5;
    double pass_window = 1.2;
    double refine_growth_tol = 0.05;
    std::vector<double> shift_magnitudes = {1.0, 2.0, 4.0, 8.0};

    double m1_box = 8.0;        // short-time Fourier grid for the modulation-space estimate
    int m1_grid = 64;
    double m1_window = 1.0;
    double m1_tol = 0.05;
    bool m1_enabled_d2 = false;  // 4-D STFT grids are a cost guard away for d = 2

    std::vector<int> cv_schedule = {16, 32, 64};
    double cv_plateau_tol = 0.02;

    std::vector<double> bc_L_schedule = {8.0, 10.0, 12.0};
    int bc_grid = 4000;
    int bc_levels = 5;
    double bc_pass_tol = 1e-4;
    double bc_fail_threshold = 0.1;

    int workers = 0;
    QuadratureConfig quad;  // boxes/orders resolved per N where left at auto
};

struct SimpleCriterionRow {
    MultiIndex gamma;
    SupEstimate estimate;
};

struct SimpleCriterionReport {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<SimpleCriterionRow> rows;
    std::optional<MultiIndex> witness;  // first GROWING gamma
    std::string note;
};

struct OscillationCriterionReport {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<CriterionVerdict> directions;
    std::string note;
};

struct MInftyOneEstimate {
    double estimate = 0.0;
    bool converged = false;
    double grid_change = 0.0;  // relative change under grid refinement
    double box_change = 0.0;   // relative change under box enlargement
};

struct MInftyOneRow {
    MultiIndex alpha;
    MInftyOneEstimate estimate;
};

struct MInftyOneReport {
    Verdict verdict = Verdict::Inconclusive;  // PASS only if every row converged
    std::vector<MInftyOneRow> rows;
    bool skipped = false;
    std::string note;
};

struct CvBoundReport {
    bool ran = false;
    std::string note;
    std::vector<int> cutoffs;
    std::vector<double> norms;
    double max_derivative_sup = 0.0;
    double final_increase = 0.0;
    bool plateau = false;
    Verdict verdict = Verdict::Inconclusive;
};

struct BCSpectrumTable {
    std::string potential;
    std::vector<double> half_widths;
    int grid = 0;
    int levels = 0;
    // eigenvalues[L index][bc (0 = DIRICHLET, 1 = NEUMANN)][level]
    std::vector<std::array<std::vector<double>, 2>> eigenvalues;
    std::vector<double> discrepancy_at_largest;
    Verdict verdict = Verdict::Inconclusive;
};

struct DiagnosticsReport {
    std::string symbol_text;
    int d = 1;
    int k = 1;
    std::optional<SimpleCriterionReport> simple_criterion;
    std::optional<OscillationCriterionReport> oscillation_criterion;
    std::optional<MInftyOneReport> m_infty_one;
    std::optional<CvBoundReport> cv_bound;
    std::optional<BCSpectrumTable> bc_sensitivity;
    Verdict overall = Verdict::Inconclusive;
    std::vector<std::string> caveats;
};

/// Uniform-boundedness scan of every d^gamma f with 2 <= |gamma| <= 2d+3.
SimpleCriterionReport check_simple_criterion(const AnySymbol& f,
                                             const DiagnosticsConfig& cfg = {});

/// Oscillation profiles and fits for every direction, with N refinement.
OscillationCriterionReport check_oscillation_criterion(const AnySymbol& f,
                                                       const DiagnosticsConfig& cfg = {});

/// Modulation-space norm estimate: integral over modulation nodes of the
/// translation supremum of the windowed Fourier magnitude on a phase-space
/// grid, with refinement/box-growth convergence flags. Matrix symbols use
/// the Frobenius norm of the entrywise transform.
MInftyOneEstimate m_infty_one_norm(const SymbolExpr& g, double window_width,
                                   double box_half_width, int grid_points, double tol = 0.05);
MInftyOneEstimate m_infty_one_norm(const SampledSymbol& g, double window_width, double tol = 0.05);
MInftyOneEstimate m_infty_one_norm(const MatrixSymbol& g, double window_width,
                                   double box_half_width, int grid_points, double tol = 0.05);

/// Membership evidence for every second-order derivative.
MInftyOneReport check_m_infty_one(const AnySymbol& f, const DiagnosticsConfig& cfg = {});

/// Operator norms across an N schedule versus the derivative sups; evidence
/// of boundedness is a norm plateau.
CvBoundReport cv_bound_check(const AnySymbol& f, const DiagnosticsConfig& cfg = {});

struct BCOptions {
    bool verify_grid = false;
    double grid_tol = 1e-3;
    double pass_tol = 1e-4;
    double fail_threshold = 0.1;
};

/// Finite-difference spectra of -u'' + V(x) u on [-L, L] under Dirichlet and
/// Neumann conditions. Persistent BC discrepancy across growing L is
/// evidence against essential self-adjointness on the line.
BCSpectrumTable bc_sensitivity(const SymbolExpr& V, const std::vector<double>& half_widths,
                               int grid, int levels, const BCOptions& opts = {});

/// Detects f = xi^2 + V(x) (d = 1); returns V on success.
std::optional<SymbolExpr> split_schroedinger_potential(const SymbolExpr& f);

DiagnosticsReport build_report(const AnySymbol& f, const DiagnosticsConfig& cfg = {});

}  // namespace weyl

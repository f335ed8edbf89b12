#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weyl/fock.hpp"

namespace weyl {

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

/// Restricted-block norms of op(d_j f - shifted d_j f) over a shift schedule.
struct OscillationProfile {
    int direction = 0;  // 0-based index into (x_1..x_d, xi_1..xi_d)
    std::vector<PhasePoint> shifts;
    std::vector<double> norms;
    int N = 0;
    int M = 0;
};

struct EvidenceRow {
    PhasePoint z;
    double norm = 0.0;
    double ratio = 0.0;  // score ratio vs the previous octave (1.0 for the first)
};

struct CriterionVerdict {
    Verdict verdict = Verdict::Inconclusive;
    double c_estimate = 0.0;
    double max_ratio = 0.0;
    std::vector<EvidenceRow> evidence;
    std::vector<std::string> caveats;
};

struct CriterionOptions {
    double growth_threshold = 1.5;   // FAIL: score ratios above this across two octaves
    double pass_window = 1.2;        // PASS: final-octave score ratio at most this
    double refine_growth_tol = 0.05;  // norms growing more than this under refinement block PASS
    double zero_tol = 1e-12;
};

/// Phase-space derivative of a quantized form along w:
/// i [sigma(w, R), A] with sigma(w, R) = w_x . P - w_xi . Q.
FockMatrix form_derivative(const FockMatrix& A, const PhasePoint& w);

/// || P_M ( d^gamma_matrix op(f) - op(d^gamma f) ) P_M || with the matrix-side
/// derivative built from nested commutators.
double intertwining_residual(const SymbolExpr& f, const MultiIndex& gamma, int N, int M,
                             const QuadratureConfig& cfg);
double intertwining_residual(const MatrixSymbol& f, const MultiIndex& gamma, int N, int M,
                             const QuadratureConfig& cfg);

/// || P_M ( W_z op(f) W_z^dagger - op(f(. + z)) ) P_M ||.
double covariance_residual(const SymbolExpr& f, const PhasePoint& z, int N, int M,
                           const QuadratureConfig& cfg);
double covariance_residual(const MatrixSymbol& f, const PhasePoint& z, int N, int M,
                           const QuadratureConfig& cfg);

OscillationProfile oscillation_profile(const SymbolExpr& f, int direction,
                                       const std::vector<PhasePoint>& shifts, int N, int M,
                                       const QuadratureConfig& cfg);
OscillationProfile oscillation_profile(const MatrixSymbol& f, int direction,
                                       const std::vector<PhasePoint>& shifts, int N, int M,
                                       const QuadratureConfig& cfg);

/// Default schedule: magnitudes along the same coordinate direction.
std::vector<PhasePoint> octave_shifts(int direction, int d,
                                      const std::vector<double>& magnitudes = {1, 2, 4, 8});

CriterionVerdict criterion_fit(const OscillationProfile& profile, const CriterionOptions& opts = {});
/// Variant with an N-refined recomputation of the same profile; norms still
/// growing under refinement block PASS and, combined with super-linear shift
/// scaling, force FAIL.
CriterionVerdict criterion_fit(const OscillationProfile& profile,
                               const OscillationProfile& refined,
                               const CriterionOptions& opts = {});

}  // namespace weyl

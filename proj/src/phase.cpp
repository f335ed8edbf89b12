#include "weyl/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace weyl {

namespace {

void check_restriction(int N, int M) {
    if (M < 1 || 2 * M > N)
        throw InvalidConfig("restriction size M must satisfy 1 <= M <= N/2");
}

Eigen::MatrixXcd sigma_matrix(const PhasePoint& w, int N, int d, int k) {
    LadderMatrices lm = ladder_matrices(N, d);
    Eigen::Index side = lm.Q[0].entries.rows();
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(side, side);
    for (int j = 0; j < d; ++j)
        s += w.coords[static_cast<size_t>(j)] * lm.P[static_cast<size_t>(j)].entries -
             w.coords[static_cast<size_t>(d + j)] * lm.Q[static_cast<size_t>(j)].entries;
    if (k > 1) s = kron(s, Eigen::MatrixXcd::Identity(k, k));
    return s;
}

template <typename Symbol>
double intertwining_impl(const Symbol& f, const MultiIndex& gamma, int N, int M,
                         const QuadratureConfig& cfg) {
    check_restriction(N, M);
    int d = f.dof();
    if (gamma.dof() != d) throw DimensionMismatch("multi-index dimension mismatch");
    FockMatrix A = quantize_auto(f, N, cfg);
    FockMatrix lhs = A;
    for (int v = 0; v < 2 * d; ++v)
        for (int rep = 0; rep < gamma.entries[static_cast<size_t>(v)]; ++rep)
            lhs = form_derivative(lhs, PhasePoint::axis(v, 1.0, d));
    FockMatrix rhs = quantize_auto(f.differentiate(gamma), N, cfg);
    return operator_norm(project_block(lhs, M) - project_block(rhs, M));
}

template <typename Symbol>
double covariance_impl(const Symbol& f, const PhasePoint& z, int N, int M,
                       const QuadratureConfig& cfg) {
    check_restriction(N, M);
    int d = f.dof();
    FockMatrix A = quantize_auto(f, N, cfg);
    FockMatrix shifted = quantize_auto(f.shift(z), N, cfg);
    Eigen::MatrixXcd W = weyl_operator(z, N, d).entries;
    if (A.k > 1) W = kron(W, Eigen::MatrixXcd::Identity(A.k, A.k));
    Eigen::MatrixXcd conj = W * A.entries * W.adjoint();
    Eigen::MatrixXcd diff = conj - shifted.entries;
    return operator_norm(project_block(diff, N, d, A.k, M));
}

template <typename Symbol>
OscillationProfile profile_impl(const Symbol& f, int direction,
                                const std::vector<PhasePoint>& shifts, int N, int M,
                                const QuadratureConfig& cfg) {
    check_restriction(N, M);
    int d = f.dof();
    if (direction < 0 || direction >= 2 * d)
        throw DimensionMismatch("oscillation direction out of range");
    auto df = f.differentiate(MultiIndex::unit(direction, d));
    OscillationProfile p;
    p.direction = direction;
    p.shifts = shifts;
    p.N = N;
    p.M = M;
    for (const PhasePoint& z : shifts) {
        auto g = df - df.shift(z);
        FockMatrix m = quantize_auto(g, N, cfg);
        p.norms.push_back(operator_norm(project_block(m, M)));
    }
    return p;
}

// MatrixSymbol lacks operator-; route the difference through entries.
MatrixSymbol matrix_difference(const MatrixSymbol& a, const MatrixSymbol& b) {
    std::vector<SymbolExpr> e;
    for (int i = 0; i < a.k(); ++i)
        for (int j = 0; j < a.k(); ++j) e.push_back(a.at(i, j) - b.at(i, j));
    return MatrixSymbol(std::move(e), a.k(), a.dof());
}

struct Scored {
    PhasePoint z;
    double mag = 0.0;
    double norm = 0.0;
    double score = 0.0;
};

std::vector<Scored> scored_samples(const OscillationProfile& p) {
    std::vector<Scored> s;
    for (size_t i = 0; i < p.shifts.size(); ++i) {
        double mag = p.shifts[i].norm();
        double n = p.norms[i];
        s.push_back({p.shifts[i], mag, n, n / (1.0 + mag)});
    }
    std::sort(s.begin(), s.end(), [](const Scored& a, const Scored& b) { return a.mag < b.mag; });
    return s;
}

CriterionVerdict fit_impl(const OscillationProfile& profile,
                          const OscillationProfile* refined, const CriterionOptions& opts) {
    if (profile.shifts.size() != profile.norms.size())
        throw InvalidConfig("profile shifts/norms length mismatch");
    std::vector<Scored> s = scored_samples(refined ? *refined : profile);
    size_t nonzero_mag = 0;
    for (const auto& r : s)
        if (r.mag > 0.0) ++nonzero_mag;
    if (nonzero_mag < 4)
        throw InsufficientSamples("criterion fit needs at least 3 octaves (4 shift magnitudes)");

    CriterionVerdict v;
    v.caveats.push_back(
        "truncated norms are lower bounds of the form norm; PASS is evidence, not proof");

    double maxnorm = 0.0;
    for (const auto& r : s) {
        v.c_estimate = std::max(v.c_estimate, r.score);
        maxnorm = std::max(maxnorm, r.norm);
    }

    std::vector<double> ratios;
    double prev_score = 0.0;
    bool have_prev = false;
    for (const auto& r : s) {
        if (r.mag == 0.0) continue;
        double ratio = 1.0;
        if (have_prev)
            ratio = prev_score > opts.zero_tol ? r.score / prev_score
                                               : (r.score > opts.zero_tol ? 1e300 : 1.0);
        if (have_prev) ratios.push_back(ratio);
        v.evidence.push_back({r.z, r.norm, ratio});
        prev_score = r.score;
        have_prev = true;
    }
    for (double r : ratios) v.max_ratio = std::max(v.max_ratio, r);

    if (maxnorm <= opts.zero_tol) {
        v.verdict = Verdict::Pass;
        v.c_estimate = 0.0;
        return v;
    }

    bool refine_converged = true;
    if (refined) {
        double growth = 0.0;
        for (size_t i = 0; i < profile.norms.size() && i < refined->norms.size(); ++i) {
            double base = profile.norms[i];
            double fine = refined->norms[i];
            if (base > opts.zero_tol) growth = std::max(growth, (fine - base) / base);
            else if (fine > opts.zero_tol) growth = std::max(growth, 1.0);
        }
        refine_converged = growth <= opts.refine_growth_tol;
        if (!refine_converged)
            v.caveats.push_back("restricted norms still grow under N refinement (+" +
                                std::to_string(growth * 100.0) + "%); operator likely unbounded");
    }

    size_t nr = ratios.size();
    double last = nr >= 1 ? ratios[nr - 1] : 1.0;
    double second_last = nr >= 2 ? ratios[nr - 2] : 1.0;

    if (refine_converged && last <= opts.pass_window) {
        v.verdict = Verdict::Pass;
        return v;
    }
    bool superlinear_hard = last > opts.growth_threshold && second_last > opts.growth_threshold;
    bool increasing_soft = last > 1.05 && second_last > 1.05;
    if (superlinear_hard || (!refine_converged && increasing_soft)) {
        v.verdict = Verdict::Fail;
        return v;
    }
    v.verdict = Verdict::Inconclusive;
    return v;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        default: return "INCONCLUSIVE";
    }
}

FockMatrix form_derivative(const FockMatrix& A, const PhasePoint& w) {
    A.check_shape();
    if (w.dof() != A.d) throw DimensionMismatch("form_derivative: direction dimension mismatch");
    Eigen::MatrixXcd s = sigma_matrix(w, A.N, A.d, A.k);
    FockMatrix out;
    out.entries = Complex(0.0, 1.0) * (s * A.entries - A.entries * s);
    out.N = A.N;
    out.d = A.d;
    out.k = A.k;
    out.method = Method::Commutator;
    return out;
}

double intertwining_residual(const SymbolExpr& f, const MultiIndex& gamma, int N, int M,
                             const QuadratureConfig& cfg) {
    return intertwining_impl(f, gamma, N, M, cfg);
}

double intertwining_residual(const MatrixSymbol& f, const MultiIndex& gamma, int N, int M,
                             const QuadratureConfig& cfg) {
    return intertwining_impl(f, gamma, N, M, cfg);
}

double covariance_residual(const SymbolExpr& f, const PhasePoint& z, int N, int M,
                           const QuadratureConfig& cfg) {
    return covariance_impl(f, z, N, M, cfg);
}

double covariance_residual(const MatrixSymbol& f, const PhasePoint& z, int N, int M,
                           const QuadratureConfig& cfg) {
    return covariance_impl(f, z, N, M, cfg);
}

OscillationProfile oscillation_profile(const SymbolExpr& f, int direction,
                                       const std::vector<PhasePoint>& shifts, int N, int M,
                                       const QuadratureConfig& cfg) {
    return profile_impl(f, direction, shifts, N, M, cfg);
}

OscillationProfile oscillation_profile(const MatrixSymbol& f, int direction,
                                       const std::vector<PhasePoint>& shifts, int N, int M,
                                       const QuadratureConfig& cfg) {
    check_restriction(N, M);
    int d = f.dof();
    if (direction < 0 || direction >= 2 * d)
        throw DimensionMismatch("oscillation direction out of range");
    MatrixSymbol df = f.differentiate(MultiIndex::unit(direction, d));
    OscillationProfile p;
    p.direction = direction;
    p.shifts = shifts;
    p.N = N;
    p.M = M;
    for (const PhasePoint& z : shifts) {
        MatrixSymbol g = matrix_difference(df, df.shift(z));
        FockMatrix m = quantize_auto(g, N, cfg);
        p.norms.push_back(operator_norm(project_block(m, M)));
    }
    return p;
}

std::vector<PhasePoint> octave_shifts(int direction, int d, const std::vector<double>& magnitudes) {
    std::vector<PhasePoint> out;
    for (double a : magnitudes) out.push_back(PhasePoint::axis(direction, a, d));
    return out;
}

CriterionVerdict criterion_fit(const OscillationProfile& profile, const CriterionOptions& opts) {
    return fit_impl(profile, nullptr, opts);
}

CriterionVerdict criterion_fit(const OscillationProfile& profile,
                               const OscillationProfile& refined, const CriterionOptions& opts) {
    return fit_impl(profile, &refined, opts);
}

}  // namespace weyl

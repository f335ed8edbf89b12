#include "weyl/scan.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "weyl/parallel.hpp"

namespace weyl {

namespace {

int clamp_axis_points(int requested, int nvars) {
    const double cap = 1e7;
    int m = std::max(2, requested);
    double total = std::pow(static_cast<double>(m), nvars);
    if (total <= cap) return m;
    int clamped = static_cast<int>(std::floor(std::pow(cap, 1.0 / nvars)));
    return std::max(2, clamped);
}

// uniform grid over [-L, L]^{nvars}; index -> point
void decode_point(std::size_t idx, int nvars, int m, double L, std::vector<double>& z) {
    double h = 2.0 * L / (m - 1);
    for (int v = nvars - 1; v >= 0; --v) {
        std::size_t q = idx % static_cast<std::size_t>(m);
        idx /= static_cast<std::size_t>(m);
        z[static_cast<size_t>(v)] = -L + h * static_cast<double>(q);
    }
}

double matrix_two_norm(const Eigen::MatrixXcd& m) {
    if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.adjoint() * m);
    double lam = es.eigenvalues().maxCoeff();
    return std::sqrt(std::max(0.0, lam));
}

template <typename Eval>
SupEstimate scan_impl(int d, const std::vector<double>& half_widths, const ScanOptions& opts,
                      const Eval& magnitude) {
    if (half_widths.empty()) throw InvalidConfig("sup_scan: L schedule must be non-empty");
    for (size_t i = 1; i < half_widths.size(); ++i)
        if (half_widths[i] <= half_widths[i - 1])
            throw InvalidConfig("sup_scan: L schedule must be strictly increasing");

    int nvars = 2 * d;
    int m = clamp_axis_points(opts.points_per_axis, nvars);
    std::size_t npoints = 1;
    for (int v = 0; v < nvars; ++v) npoints *= static_cast<std::size_t>(m);

    SupEstimate est;
    est.half_widths = half_widths;
    double running = 0.0;
    for (double L : half_widths) {
        const std::size_t chunk = 4096;
        std::size_t nchunks = (npoints + chunk - 1) / chunk;
        std::vector<double> chunk_max(nchunks, 0.0);
        std::vector<std::exception_ptr> chunk_err(nchunks);
        parallel_chunks(npoints, chunk, opts.workers, [&](std::size_t b, std::size_t e) {
            std::size_t c = b / chunk;
            std::vector<double> z(static_cast<size_t>(nvars));
            double mx = 0.0;
            try {
                for (std::size_t i = b; i < e; ++i) {
                    decode_point(i, nvars, m, L, z);
                    mx = std::max(mx, magnitude(z));
                }
            } catch (...) {
                chunk_err[c] = std::current_exception();
            }
            chunk_max[c] = mx;
        });
        for (const auto& ep : chunk_err)
            if (ep) std::rethrow_exception(ep);
        double sup = 0.0;
        for (double v : chunk_max) sup = std::max(sup, v);
        running = std::max(running, sup);  // boxes are nested
        est.sups.push_back(running);
    }

    if (est.sups.size() < 2) {
        est.verdict = GrowthVerdict::Inconclusive;
        return est;
    }
    double a = est.sups[est.sups.size() - 2];
    double b = est.sups.back();
    est.last_ratio = (a < 1e-300) ? (b < 1e-300 ? 1.0 : std::numeric_limits<double>::infinity())
                                  : b / a;
    est.verdict = est.last_ratio > opts.growth_threshold ? GrowthVerdict::Growing
                                                         : GrowthVerdict::Bounded;
    return est;
}

template <typename Eval>
HermiticityReport hermitian_impl(int d, double L, int m, double tol, const Eval& deviation) {
    int nvars = 2 * d;
    m = clamp_axis_points(m, nvars);
    std::size_t npoints = 1;
    for (int v = 0; v < nvars; ++v) npoints *= static_cast<std::size_t>(m);
    std::vector<double> z(static_cast<size_t>(nvars));
    double mx = 0.0;
    for (std::size_t i = 0; i < npoints; ++i) {
        decode_point(i, nvars, m, L, z);
        mx = std::max(mx, deviation(z));
    }
    return {mx <= tol, mx, tol};
}

}  // namespace

std::string to_string(GrowthVerdict v) {
    switch (v) {
        case GrowthVerdict::Bounded: return "BOUNDED";
        case GrowthVerdict::Growing: return "GROWING";
        default: return "INCONCLUSIVE";
    }
}

SupEstimate sup_scan(const SymbolExpr& f, const std::vector<double>& half_widths,
                     const ScanOptions& opts) {
    return scan_impl(f.dof(), half_widths, opts, [&](const std::vector<double>& z) {
        return std::abs(f.evaluate(PhasePoint(z)));
    });
}

SupEstimate sup_scan(const MatrixSymbol& f, const std::vector<double>& half_widths,
                     const ScanOptions& opts) {
    return scan_impl(f.dof(), half_widths, opts, [&](const std::vector<double>& z) {
        return matrix_two_norm(f.evaluate(PhasePoint(z)));
    });
}

HermiticityReport is_hermitian(const SymbolExpr& f, double box_half_width, int points_per_axis,
                               double tolerance) {
    return hermitian_impl(f.dof(), box_half_width, points_per_axis, tolerance,
                          [&](const std::vector<double>& z) {
                              return std::abs(f.evaluate(PhasePoint(z)).imag());
                          });
}

HermiticityReport is_hermitian(const MatrixSymbol& f, double box_half_width, int points_per_axis,
                               double tolerance) {
    return hermitian_impl(f.dof(), box_half_width, points_per_axis, tolerance,
                          [&](const std::vector<double>& z) {
                              Eigen::MatrixXcd m = f.evaluate(PhasePoint(z));
                              return 0.5 * (m - m.adjoint()).cwiseAbs().maxCoeff();
                          });
}

}  // namespace weyl

#include "weyl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

namespace weyl {

namespace {

int symbol_dof(const AnySymbol& f) {
    return std::visit([](const auto& s) { return s.dof(); }, f);
}

int symbol_k(const AnySymbol& f) {
    if (std::holds_alternative<MatrixSymbol>(f)) return std::get<MatrixSymbol>(f).k();
    return 1;
}

std::string symbol_text(const AnySymbol& f) {
    return std::visit([](const auto& s) { return s.to_string(); }, f);
}

void enumerate_order(int order, int nvars, std::vector<int>& cur, int pos,
                     std::vector<MultiIndex>& out) {
    if (pos == nvars - 1) {
        cur[static_cast<size_t>(pos)] = order;
        out.emplace_back(cur);
        return;
    }
    for (int v = order; v >= 0; --v) {
        cur[static_cast<size_t>(pos)] = v;
        enumerate_order(order - v, nvars, cur, pos + 1, out);
    }
}

std::vector<MultiIndex> multi_indices_of_order(int order, int nvars) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<size_t>(nvars), 0);
    enumerate_order(order, nvars, cur, 0, out);
    return out;
}

SupEstimate scan_symbol(const AnySymbol& g, const std::vector<double>& Ls, const ScanOptions& so) {
    if (std::holds_alternative<SymbolExpr>(g)) return sup_scan(std::get<SymbolExpr>(g), Ls, so);
    return sup_scan(std::get<MatrixSymbol>(g), Ls, so);
}

AnySymbol differentiate_any(const AnySymbol& f, const MultiIndex& gamma) {
    if (std::holds_alternative<SymbolExpr>(f))
        return std::get<SymbolExpr>(f).differentiate(gamma);
    return std::get<MatrixSymbol>(f).differentiate(gamma);
}

bool tree_contains_var(const NodePtr& n, int lo) {
    if (!n) return false;
    if (n->kind == NodeKind::Variable && n->var >= lo) return true;
    return tree_contains_var(n->a, lo) || tree_contains_var(n->b, lo);
}

void flatten_terms(const NodePtr& n, int sign, std::vector<std::pair<int, NodePtr>>& out) {
    if (n->kind == NodeKind::Add) {
        flatten_terms(n->a, sign, out);
        flatten_terms(n->b, sign, out);
    } else if (n->kind == NodeKind::Sub) {
        flatten_terms(n->a, sign, out);
        flatten_terms(n->b, -sign, out);
    } else if (n->kind == NodeKind::Neg) {
        flatten_terms(n->a, -sign, out);
    } else {
        out.emplace_back(sign, n);
    }
}

// ---- modulation-space estimator ------------------------------------------

// |V(z, .)| magnitudes on the DFT frequency grid for one translation z,
// accumulated as squared magnitudes over the (k^2) symbol entries.
struct M1Workspace {
    Eigen::FFT<double> fft;
    std::vector<Complex> buf, line, lineF;
};

double m1_estimate_grids(const std::vector<std::vector<Complex>>& entry_grids, int n, double h,
                         double sigma) {
    const double wnorm = 1.0 / std::sqrt(M_PI * sigma * sigma);
    const double zstep = 0.5 * sigma;
    const double R = 0.5 * n * h;
    // translations stay a window reach inside the box so the transform never
    // sees the artificial edge of the sampling box
    const double zmax = std::max(R - 5.0 * sigma, 0.5 * R);
    int zq = static_cast<int>(std::floor(zmax / zstep));

    std::vector<double> supbins(static_cast<size_t>(n) * n, 0.0);
    M1Workspace ws;
    ws.buf.resize(static_cast<size_t>(n) * n);
    ws.line.resize(static_cast<size_t>(n));
    ws.lineF.resize(static_cast<size_t>(n));
    std::vector<double> mag2(static_cast<size_t>(n) * n);

    std::vector<double> window_axis(static_cast<size_t>(n));
    for (int zi = -zq; zi <= zq; ++zi)
        for (int zj = -zq; zj <= zq; ++zj) {
            double zx = zi * zstep;
            double zy = zj * zstep;
            std::fill(mag2.begin(), mag2.end(), 0.0);
            for (const auto& grid : entry_grids) {
                for (int i = 0; i < n; ++i) {
                    double tx = -R + h * i;
                    double wx = std::exp(-0.25 * (tx - zx) * (tx - zx) / (sigma * sigma));
                    window_axis[static_cast<size_t>(i)] = wx;
                }
                for (int i = 0; i < n; ++i) {
                    double wx = window_axis[static_cast<size_t>(i)];
                    for (int j = 0; j < n; ++j) {
                        double ty = -R + h * j;
                        double wy = std::exp(-0.25 * (ty - zy) * (ty - zy) / (sigma * sigma));
                        ws.buf[static_cast<size_t>(i) * n + j] =
                            grid[static_cast<size_t>(i) * n + j] * (wnorm * wx * wx * wy * wy);
                    }
                }
                for (int r = 0; r < n; ++r) {
                    std::copy_n(ws.buf.begin() + static_cast<std::ptrdiff_t>(r) * n, n,
                                ws.line.begin());
                    ws.fft.fwd(ws.lineF, ws.line);
                    std::copy(ws.lineF.begin(), ws.lineF.end(),
                              ws.buf.begin() + static_cast<std::ptrdiff_t>(r) * n);
                }
                for (int c = 0; c < n; ++c) {
                    for (int r = 0; r < n; ++r)
                        ws.line[static_cast<size_t>(r)] = ws.buf[static_cast<size_t>(r) * n + c];
                    ws.fft.fwd(ws.lineF, ws.line);
                    for (int r = 0; r < n; ++r)
                        mag2[static_cast<size_t>(r) * n + c] +=
                            std::norm(ws.lineF[static_cast<size_t>(r)]);
                }
            }
            for (size_t b = 0; b < supbins.size(); ++b)
                supbins[b] = std::max(supbins[b], mag2[b]);
        }
    double sum = 0.0;
    for (double s : supbins) sum += std::sqrt(s);
    double scale = 2.0 * M_PI / n;
    return scale * scale * sum;
}

// window squared appears above (w^2 per axis as wx*wx): the window is
// exp(-|t-z|^2 / (2 sigma^2)) so each axis factor is exp(-(.)^2/(2 sigma^2));
// written as the square of exp(-(.)^2/(4 sigma^2)) purely to reuse the axis value.

using GridSampler = std::function<void(double R, int n, std::vector<std::vector<Complex>>&)>;

MInftyOneEstimate m1_with_convergence(const GridSampler& sample, double R, int n, double sigma,
                                      double tol) {
    std::vector<std::vector<Complex>> grids;
    sample(R, n, grids);
    double base = m1_estimate_grids(grids, n, 2.0 * R / n, sigma);
    sample(R, 2 * n, grids);
    double fine = m1_estimate_grids(grids, 2 * n, R / n, sigma);
    sample(2.0 * R, 2 * n, grids);
    double big = m1_estimate_grids(grids, 2 * n, 2.0 * R / n, sigma);

    MInftyOneEstimate est;
    est.estimate = fine;
    double ref = std::max({std::abs(base), std::abs(fine), 1e-300});
    est.grid_change = std::abs(fine - base) / ref;
    est.box_change = std::abs(big - base) / ref;
    if (std::abs(base) < 1e-300 && std::abs(fine) < 1e-300 && std::abs(big) < 1e-300) {
        est.grid_change = 0.0;
        est.box_change = 0.0;
    }
    est.converged = est.grid_change <= tol && est.box_change <= tol;
    return est;
}

}  // namespace

MInftyOneEstimate m_infty_one_norm(const SymbolExpr& g, double window_width, double box_half_width,
                                   int grid_points, double tol) {
    if (g.dof() != 1) throw InvalidConfig("modulation-space estimate supports d = 1");
    GridSampler sample = [&](double R, int n, std::vector<std::vector<Complex>>& grids) {
        grids.assign(1, std::vector<Complex>(static_cast<size_t>(n) * n));
        double h = 2.0 * R / n;
        PhasePoint z = PhasePoint::zero(1);
        for (int i = 0; i < n; ++i) {
            z.coords[0] = -R + h * i;
            for (int j = 0; j < n; ++j) {
                z.coords[1] = -R + h * j;
                grids[0][static_cast<size_t>(i) * n + j] = g.evaluate(z);
            }
        }
    };
    return m1_with_convergence(sample, box_half_width, grid_points, window_width, tol);
}

MInftyOneEstimate m_infty_one_norm(const MatrixSymbol& g, double window_width,
                                   double box_half_width, int grid_points, double tol) {
    if (g.dof() != 1) throw InvalidConfig("modulation-space estimate supports d = 1");
    int k = g.k();
    GridSampler sample = [&](double R, int n, std::vector<std::vector<Complex>>& grids) {
        grids.assign(static_cast<size_t>(k) * k, std::vector<Complex>(static_cast<size_t>(n) * n));
        double h = 2.0 * R / n;
        PhasePoint z = PhasePoint::zero(1);
        for (int i = 0; i < n; ++i) {
            z.coords[0] = -R + h * i;
            for (int j = 0; j < n; ++j) {
                z.coords[1] = -R + h * j;
                Eigen::MatrixXcd m = g.evaluate(z);
                for (int a = 0; a < k; ++a)
                    for (int b = 0; b < k; ++b)
                        grids[static_cast<size_t>(a) * k + b][static_cast<size_t>(i) * n + j] =
                            m(a, b);
            }
        }
    };
    return m1_with_convergence(sample, box_half_width, grid_points, window_width, tol);
}

MInftyOneEstimate m_infty_one_norm(const SampledSymbol& g, double window_width, double tol) {
    g.validate();
    if (g.d != 1) throw InvalidConfig("modulation-space estimate supports d = 1");
    // the sample fixes box and resolution; box self-containment is probed by
    // zero-embedding into a doubled box
    const int n = g.points_per_axis;
    double h = g.spacing();
    std::vector<std::vector<Complex>> grids(1, g.values);
    double base = m1_estimate_grids(grids, n, h, window_width);
    int n2 = 2 * n;
    std::vector<std::vector<Complex>> big(1, std::vector<Complex>(static_cast<size_t>(n2) * n2,
                                                                  Complex(0.0)));
    int off = n / 2;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            big[0][static_cast<size_t>(i + off) * n2 + (j + off)] =
                g.values[static_cast<size_t>(i) * n + j];
    double bigv = m1_estimate_grids(big, n2, h, window_width);
    MInftyOneEstimate est;
    est.estimate = base;
    double ref = std::max({std::abs(base), 1e-300});
    est.box_change = std::abs(bigv - base) / ref;
    est.grid_change = 0.0;
    if (std::abs(base) < 1e-300 && std::abs(bigv) < 1e-300) est.box_change = 0.0;
    est.converged = est.box_change <= tol;
    return est;
}

SimpleCriterionReport check_simple_criterion(const AnySymbol& f, const DiagnosticsConfig& cfg) {
    SimpleCriterionReport rep;
    int d = symbol_dof(f);
    ScanOptions so;
    so.points_per_axis = d == 1 ? cfg.scan_points : std::min(cfg.scan_points, 21);
    so.growth_threshold = cfg.growth_threshold;
    so.workers = cfg.workers;
    bool any_growing = false;
    bool all_bounded = true;
    try {
        for (int order = 2; order <= 2 * d + 3; ++order)
            for (const MultiIndex& gamma : multi_indices_of_order(order, 2 * d)) {
                AnySymbol g = differentiate_any(f, gamma);
                SupEstimate est = scan_symbol(g, cfg.L_schedule, so);
                rep.rows.push_back({gamma, est});
                if (est.verdict == GrowthVerdict::Growing) {
                    any_growing = true;
                    if (!rep.witness) rep.witness = gamma;
                } else if (est.verdict != GrowthVerdict::Bounded) {
                    all_bounded = false;
                }
            }
    } catch (const std::exception& e) {
        rep.verdict = Verdict::Inconclusive;
        rep.note = std::string("evaluation failed inside a scan box: ") + e.what();
        return rep;
    }
    rep.verdict = any_growing ? Verdict::Fail
                              : (all_bounded ? Verdict::Pass : Verdict::Inconclusive);
    return rep;
}

OscillationCriterionReport check_oscillation_criterion(const AnySymbol& f,
                                                       const DiagnosticsConfig& cfg) {
    OscillationCriterionReport rep;
    int d = symbol_dof(f);
    int N = cfg.N;
    int M = N / 2;
    CriterionOptions opts;
    opts.growth_threshold = cfg.growth_threshold;
    opts.pass_window = cfg.pass_window;
    opts.refine_growth_tol = cfg.refine_growth_tol;

    QuadratureConfig quad = cfg.quad;
    quad.verify_grid = false;
    quad.workers = cfg.workers;

    bool any_fail = false;
    bool all_pass = true;
    for (int j = 0; j < 2 * d; ++j) {
        std::vector<PhasePoint> shifts = octave_shifts(j, d, cfg.shift_magnitudes);
        CriterionVerdict v;
        if (std::holds_alternative<SymbolExpr>(f)) {
            const auto& s = std::get<SymbolExpr>(f);
            OscillationProfile p1 = oscillation_profile(s, j, shifts, N, M, quad);
            if (cfg.refine) {
                OscillationProfile p2 = oscillation_profile(s, j, shifts, 2 * N, N, quad);
                v = criterion_fit(p1, p2, opts);
            } else {
                v = criterion_fit(p1, opts);
            }
        } else {
            const auto& s = std::get<MatrixSymbol>(f);
            OscillationProfile p1 = oscillation_profile(s, j, shifts, N, M, quad);
            if (cfg.refine) {
                OscillationProfile p2 = oscillation_profile(s, j, shifts, 2 * N, N, quad);
                v = criterion_fit(p1, p2, opts);
            } else {
                v = criterion_fit(p1, opts);
            }
        }
        rep.directions.push_back(v);
        if (v.verdict == Verdict::Fail) any_fail = true;
        if (v.verdict != Verdict::Pass) all_pass = false;
    }
    rep.verdict = any_fail ? Verdict::Fail : (all_pass ? Verdict::Pass : Verdict::Inconclusive);
    return rep;
}

MInftyOneReport check_m_infty_one(const AnySymbol& f, const DiagnosticsConfig& cfg) {
    MInftyOneReport rep;
    int d = symbol_dof(f);
    if (d != 1 && !cfg.m1_enabled_d2) {
        rep.skipped = true;
        rep.note = "second-derivative modulation scan skipped for d = 2 (cost guard)";
        return rep;
    }
    bool all_converged = true;
    for (const MultiIndex& alpha : multi_indices_of_order(2, 2 * d)) {
        AnySymbol g = differentiate_any(f, alpha);
        MInftyOneEstimate est;
        if (std::holds_alternative<SymbolExpr>(g))
            est = m_infty_one_norm(std::get<SymbolExpr>(g), cfg.m1_window, cfg.m1_box, cfg.m1_grid,
                                   cfg.m1_tol);
        else
            est = m_infty_one_norm(std::get<MatrixSymbol>(g), cfg.m1_window, cfg.m1_box,
                                   cfg.m1_grid, cfg.m1_tol);
        rep.rows.push_back({alpha, est});
        if (!est.converged) all_converged = false;
    }
    // an unconverged estimate means membership is not established, which is
    // inconclusive evidence, never a refutation
    rep.verdict = all_converged ? Verdict::Pass : Verdict::Inconclusive;
    return rep;
}

CvBoundReport cv_bound_check(const AnySymbol& f, const DiagnosticsConfig& cfg) {
    CvBoundReport rep;
    int d = symbol_dof(f);
    ScanOptions so;
    so.points_per_axis = d == 1 ? cfg.scan_points : std::min(cfg.scan_points, 21);
    so.growth_threshold = cfg.growth_threshold;
    so.workers = cfg.workers;
    bool pre_ok = true;
    try {
        for (int order = 0; order <= 2 * d + 1 && pre_ok; ++order)
            for (const MultiIndex& gamma : multi_indices_of_order(order, 2 * d)) {
                AnySymbol g = differentiate_any(f, gamma);
                SupEstimate est = scan_symbol(g, cfg.L_schedule, so);
                rep.max_derivative_sup = std::max(rep.max_derivative_sup, est.sups.back());
                if (est.verdict != GrowthVerdict::Bounded) {
                    pre_ok = false;
                    rep.note = "derivative sup scan not bounded through order 2d+1";
                    break;
                }
            }
    } catch (const std::exception& e) {
        rep.note = std::string("derivative scan failed: ") + e.what();
        rep.verdict = Verdict::Inconclusive;
        return rep;
    }
    rep.ran = pre_ok;
    // norms are informative either way: non-plateau growth is how an
    // unbounded quantization announces itself
    QuadratureConfig quad = cfg.quad;
    quad.verify_grid = false;
    quad.workers = cfg.workers;
    try {
        for (int N : cfg.cv_schedule) {
            double nrm = std::holds_alternative<SymbolExpr>(f)
                             ? operator_norm(quantize_auto(std::get<SymbolExpr>(f), N, quad))
                             : operator_norm(quantize_auto(std::get<MatrixSymbol>(f), N, quad));
            rep.cutoffs.push_back(N);
            rep.norms.push_back(nrm);
        }
    } catch (const std::exception& e) {
        rep.note += std::string(rep.note.empty() ? "" : "; ") + "norm schedule failed: " + e.what();
        rep.verdict = Verdict::Inconclusive;
        return rep;
    }
    size_t n = rep.norms.size();
    if (n >= 2 && rep.norms[n - 2] > 1e-300)
        rep.final_increase = (rep.norms[n - 1] - rep.norms[n - 2]) / rep.norms[n - 2];
    rep.plateau = rep.final_increase <= cfg.cv_plateau_tol;
    rep.verdict = (pre_ok && rep.plateau) ? Verdict::Pass : Verdict::Inconclusive;
    return rep;
}

BCSpectrumTable bc_sensitivity(const SymbolExpr& V, const std::vector<double>& half_widths,
                               int grid, int levels, const BCOptions& opts) {
    if (V.dof() != 1) throw InvalidConfig("bc_sensitivity needs a d = 1 potential");
    if (tree_contains_var(V.root(), 1))
        throw InvalidConfig("bc_sensitivity potential must depend on x only");
    if (grid < 500) throw InvalidConfig("bc grid must be >= 500");
    if (half_widths.empty()) throw InvalidConfig("bc L schedule must be non-empty");
    if (levels < 1) throw InvalidConfig("bc needs at least one level");

    auto eval_potential = [&](double x) {
        Complex v = V.evaluate(PhasePoint{x, 0.0});
        if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v.real())))
            throw InvalidConfig("bc_sensitivity potential must be real-valued");
        return v.real();
    };

    auto spectrum = [&](double L, int npts, bool neumann) {
        double h = 2.0 * L / npts;
        int n = neumann ? npts + 1 : npts - 1;
        Eigen::VectorXd diag(n);
        Eigen::VectorXd sub(n - 1);
        for (int i = 0; i < n; ++i) {
            double x = neumann ? -L + h * i : -L + h * (i + 1);
            diag[i] = 2.0 / (h * h) + eval_potential(x);
        }
        for (int i = 0; i + 1 < n; ++i) sub[i] = -1.0 / (h * h);
        if (neumann) {
            // ghost-point closure symmetrized by a diagonal similarity
            sub[0] = -std::sqrt(2.0) / (h * h);
            sub[n - 2] = -std::sqrt(2.0) / (h * h);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
        std::vector<double> lows;
        for (int i = 0; i < levels && i < n; ++i) lows.push_back(es.eigenvalues()[i]);
        return lows;
    };

    BCSpectrumTable table;
    table.potential = V.to_string();
    table.half_widths = half_widths;
    table.grid = grid;
    table.levels = levels;
    for (double L : half_widths) {
        std::array<std::vector<double>, 2> pair = {spectrum(L, grid, false),
                                                   spectrum(L, grid, true)};
        if (opts.verify_grid) {
            std::vector<double> finer = spectrum(L, 2 * grid, false);
            for (size_t i = 0; i < pair[0].size() && i < finer.size(); ++i)
                if (std::abs(pair[0][i] - finer[i]) > opts.grid_tol)
                    throw GridTooCoarse("bc eigenvalue changed by " +
                                        std::to_string(std::abs(pair[0][i] - finer[i])) +
                                        " under grid doubling at L = " + std::to_string(L));
        }
        table.eigenvalues.push_back(std::move(pair));
    }

    const auto& last = table.eigenvalues.back();
    for (int lvl = 0; lvl < levels; ++lvl)
        table.discrepancy_at_largest.push_back(std::abs(last[0][static_cast<size_t>(lvl)] -
                                                        last[1][static_cast<size_t>(lvl)]));

    double max_disc = *std::max_element(table.discrepancy_at_largest.begin(),
                                        table.discrepancy_at_largest.end());
    bool persistent = true;
    int probe = std::min(3, levels);
    for (const auto& per_L : table.eigenvalues) {
        double worst = 0.0;
        for (int lvl = 0; lvl < probe; ++lvl)
            worst = std::max(worst, std::abs(per_L[0][static_cast<size_t>(lvl)] -
                                             per_L[1][static_cast<size_t>(lvl)]));
        if (worst <= opts.fail_threshold) persistent = false;
    }
    if (max_disc <= opts.pass_tol)
        table.verdict = Verdict::Pass;
    else if (persistent)
        table.verdict = Verdict::Fail;
    else
        table.verdict = Verdict::Inconclusive;
    return table;
}

std::optional<SymbolExpr> split_schroedinger_potential(const SymbolExpr& f) {
    if (f.dof() != 1) return std::nullopt;
    std::vector<std::pair<int, NodePtr>> terms;
    flatten_terms(f.root(), 1, terms);
    int xi_sq_at = -1;
    for (size_t i = 0; i < terms.size(); ++i) {
        const auto& [sign, node] = terms[i];
        if (sign == 1 && node->kind == NodeKind::Pow && node->exponent == 2 &&
            node->a->kind == NodeKind::Variable && node->a->var == 1) {
            xi_sq_at = static_cast<int>(i);
            break;
        }
    }
    if (xi_sq_at < 0) return std::nullopt;
    SymbolExpr V = SymbolExpr::constant(0.0, 1);
    for (size_t i = 0; i < terms.size(); ++i) {
        if (static_cast<int>(i) == xi_sq_at) continue;
        const auto& [sign, node] = terms[i];
        if (tree_contains_var(node, 1)) return std::nullopt;
        SymbolExpr term(node, 1);
        V = sign > 0 ? V + term : V - term;
    }
    return V;
}

DiagnosticsReport build_report(const AnySymbol& f, const DiagnosticsConfig& cfg) {
    DiagnosticsReport rep;
    rep.symbol_text = symbol_text(f);
    rep.d = symbol_dof(f);
    rep.k = symbol_k(f);
    rep.caveats.push_back(
        "all verdicts are desk-scale numerical evidence on truncated bases, not proofs");

    bool hermitian_ok = true;
    try {
        HermiticityReport h = std::holds_alternative<SymbolExpr>(f)
                                  ? is_hermitian(std::get<SymbolExpr>(f), 5.0, 11, 1e-8)
                                  : is_hermitian(std::get<MatrixSymbol>(f), 5.0, 11, 1e-8);
        if (!h.pass) {
            hermitian_ok = false;
            rep.caveats.push_back("symbol is not hermitian (deviation " +
                                  std::to_string(h.max_deviation) +
                                  "); self-adjointness question is ill-posed");
        }
    } catch (const std::exception& e) {
        hermitian_ok = false;
        rep.caveats.push_back(std::string("hermiticity probe failed: ") + e.what());
    }

    auto guarded = [&](const char* name, auto&& fn) {
        using R = std::decay_t<decltype(fn())>;
        try {
            return std::optional<R>(fn());
        } catch (const std::exception& e) {
            rep.caveats.push_back(std::string(name) + " criterion aborted: " + e.what());
            R empty{};
            empty.verdict = Verdict::Inconclusive;
            return std::optional<R>(std::move(empty));
        }
    };

    rep.simple_criterion = guarded("derivative-bound", [&] { return check_simple_criterion(f, cfg); });
    rep.oscillation_criterion =
        guarded("oscillation", [&] { return check_oscillation_criterion(f, cfg); });
    rep.m_infty_one = guarded("modulation-space", [&] { return check_m_infty_one(f, cfg); });
    rep.cv_bound = guarded("norm-plateau", [&] { return cv_bound_check(f, cfg); });

    if (std::holds_alternative<SymbolExpr>(f)) {
        if (auto V = split_schroedinger_potential(std::get<SymbolExpr>(f))) {
            try {
                // without a classically forbidden region near the endpoints the
                // eigenfunctions have no exponential decay and the experiment
                // cannot separate boundary conditions at desk scale
                ScanOptions so;
                so.points_per_axis = 201;
                double lmax = cfg.bc_L_schedule.back();
                bool confining =
                    sup_scan(*V, {lmax / 2.0, lmax}, so).verdict == GrowthVerdict::Growing;
                if (confining) {
                    BCOptions opts;
                    opts.pass_tol = cfg.bc_pass_tol;
                    opts.fail_threshold = cfg.bc_fail_threshold;
                    rep.bc_sensitivity =
                        bc_sensitivity(*V, cfg.bc_L_schedule, cfg.bc_grid, cfg.bc_levels, opts);
                } else {
                    rep.caveats.push_back(
                        "bc-sensitivity skipped: non-confining potential gives no usable "
                        "boundary separation");
                }
            } catch (const std::exception& e) {
                rep.caveats.push_back(std::string("bc-sensitivity aborted: ") + e.what());
            }
        }
    }

    std::vector<Verdict> run;
    if (rep.simple_criterion) run.push_back(rep.simple_criterion->verdict);
    if (rep.oscillation_criterion) run.push_back(rep.oscillation_criterion->verdict);
    if (rep.m_infty_one && !rep.m_infty_one->skipped) run.push_back(rep.m_infty_one->verdict);
    if (rep.cv_bound && rep.cv_bound->ran) run.push_back(rep.cv_bound->verdict);
    if (rep.bc_sensitivity) run.push_back(rep.bc_sensitivity->verdict);

    bool any_fail = std::any_of(run.begin(), run.end(), [](Verdict v) { return v == Verdict::Fail; });
    bool all_pass = !run.empty() &&
                    std::all_of(run.begin(), run.end(), [](Verdict v) { return v == Verdict::Pass; });
    rep.overall = any_fail ? Verdict::Fail : (all_pass ? Verdict::Pass : Verdict::Inconclusive);
    if (!hermitian_ok && rep.overall == Verdict::Pass) rep.overall = Verdict::Inconclusive;
    return rep;
}

}  // namespace weyl

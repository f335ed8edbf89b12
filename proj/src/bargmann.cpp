#include "weyl/bargmann.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "weyl/parallel.hpp"

namespace weyl {

namespace {

int next_pow2(int n) {
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

// Gauss-Legendre rule on [-1, 1] by Golub-Welsch.
struct GLRule {
    std::vector<double> nodes, weights;
};

const GLRule& gauss_legendre(int order) {
    static std::map<int, GLRule> cache;
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(order - 1);
    for (int k = 1; k < order; ++k) sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub);
    GLRule r;
    for (int i = 0; i < order; ++i) {
        r.nodes.push_back(es.eigenvalues()[i]);
        double v0 = es.eigenvectors()(0, i);
        r.weights.push_back(2.0 * v0 * v0);
    }
    return cache.emplace(order, std::move(r)).first->second;
}

// periodic Gaussian smoothing of a square 2-D grid (in place logic, returns new)
std::vector<Complex> gaussian_filter_2d(const std::vector<Complex>& values, int n, double h,
                                        double t) {
    Eigen::FFT<double> fft;
    std::vector<Complex> work = values;
    std::vector<Complex> line(static_cast<size_t>(n)), lineF(static_cast<size_t>(n));
    // FFT rows then columns
    for (int r = 0; r < n; ++r) {
        std::copy_n(work.begin() + static_cast<std::ptrdiff_t>(r) * n, n, line.begin());
        fft.fwd(lineF, line);
        std::copy(lineF.begin(), lineF.end(), work.begin() + static_cast<std::ptrdiff_t>(r) * n);
    }
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) line[static_cast<size_t>(r)] = work[static_cast<size_t>(r) * n + c];
        fft.fwd(lineF, line);
        for (int r = 0; r < n; ++r) work[static_cast<size_t>(r) * n + c] = lineF[static_cast<size_t>(r)];
    }
    auto freq = [&](int m) {
        int ms = m < n / 2 ? m : m - n;
        return 2.0 * M_PI * ms / (n * h);
    };
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            double w2 = freq(r) * freq(r) + freq(c) * freq(c);
            work[static_cast<size_t>(r) * n + c] *= std::exp(-t * w2);
        }
    for (int r = 0; r < n; ++r) {
        std::copy_n(work.begin() + static_cast<std::ptrdiff_t>(r) * n, n, line.begin());
        fft.inv(lineF, line);
        std::copy(lineF.begin(), lineF.end(), work.begin() + static_cast<std::ptrdiff_t>(r) * n);
    }
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) line[static_cast<size_t>(r)] = work[static_cast<size_t>(r) * n + c];
        fft.inv(lineF, line);
        for (int r = 0; r < n; ++r) work[static_cast<size_t>(r) * n + c] = lineF[static_cast<size_t>(r)];
    }
    return work;
}

SampledSymbol heat_on_padded_grid(const SymbolExpr& f, double t, const HeatConfig& cfg,
                                  double pad) {
    const int n = cfg.points;
    const double R = cfg.half_width;
    const double h = 2.0 * R / n;
    int pn = static_cast<int>(std::ceil(pad / h));
    int np = next_pow2(n + 2 * pn);
    int off = (np - n) / 2;
    double Rp = 0.5 * np * h;

    std::vector<Complex> vals(static_cast<size_t>(np) * np);
    PhasePoint z = PhasePoint::zero(1);
    for (int i = 0; i < np; ++i) {
        z.coords[0] = -Rp + h * i;
        for (int j = 0; j < np; ++j) {
            z.coords[1] = -Rp + h * j;
            vals[static_cast<size_t>(i) * np + j] = f.evaluate(z);
        }
    }
    std::vector<Complex> sm = gaussian_filter_2d(vals, np, h, t);

    SampledSymbol out;
    out.d = 1;
    out.half_width = R;
    out.points_per_axis = n;
    out.values.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.values[static_cast<size_t>(i) * n + j] =
                sm[static_cast<size_t>(i + off) * np + (j + off)];
    return out;
}

double binom(int n, int r) {
    double v = 1.0;
    for (int i = 0; i < r; ++i) v = v * (n - i) / (i + 1);
    return v;
}

double double_factorial(int m) {  // (m-1)!! for even m: 1*3*...*(m-1)
    double v = 1.0;
    for (int i = m - 1; i >= 1; i -= 2) v *= i;
    return v;
}

}  // namespace

SampledSymbol heat_transform(const SymbolExpr& f, double t, const HeatConfig& cfg) {
    if (t <= 0.0) throw InvalidConfig("heat time must be positive");
    if (f.dof() != 1) throw InvalidConfig("grid heat transform supports d = 1");
    if (cfg.points < 64 || (cfg.points & (cfg.points - 1)) != 0)
        throw InvalidConfig("heat grid points must be a power of two >= 64");
    SampledSymbol a = heat_on_padded_grid(f, t, cfg, cfg.pad);
    if (cfg.verify_box) {
        SampledSymbol b = heat_on_padded_grid(f, t, cfg, 2.0 * cfg.pad);
        double diff = 0.0;
        for (size_t i = 0; i < a.values.size(); ++i)
            diff = std::max(diff, std::abs(a.values[i] - b.values[i]));
        if (diff > cfg.box_tol)
            throw BoxTooSmall("heat transform changes by " + std::to_string(diff) +
                              " under padding enlargement; increase the box");
    }
    return a;
}

SampledSymbol heat_transform(const SampledSymbol& f, double t, bool verify_box, double box_tol) {
    f.validate();
    if (t <= 0.0) throw InvalidConfig("heat time must be positive");
    if (f.d != 1) throw InvalidConfig("grid heat transform supports d = 1");
    const int n = f.points_per_axis;
    SampledSymbol out = f;
    out.values = gaussian_filter_2d(f.values, n, f.spacing(), t);
    if (verify_box) {
        // zero-embed into a doubled box; differences near the edge reveal
        // data that does not decay inside the given box
        int n2 = 2 * n;
        std::vector<Complex> big(static_cast<size_t>(n2) * n2, Complex(0.0));
        int off = n / 2;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                big[static_cast<size_t>(i + off) * n2 + (j + off)] =
                    f.values[static_cast<size_t>(i) * n + j];
        std::vector<Complex> sm = gaussian_filter_2d(big, n2, f.spacing(), t);
        double diff = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                diff = std::max(diff, std::abs(out.values[static_cast<size_t>(i) * n + j] -
                                               sm[static_cast<size_t>(i + off) * n2 + (j + off)]));
        if (diff > box_tol)
            throw BoxTooSmall("sampled heat transform is not self-contained in its box (dev " +
                              std::to_string(diff) + ")");
    }
    return out;
}

SymbolExpr heat_transform_polynomial(const SymbolExpr& f, double t) {
    if (!f.is_polynomial()) throw MethodMismatch("closed-form heat transform needs a polynomial");
    const int d = f.dof();
    const int nvars = 2 * d;
    const double var = 2.0 * t;
    std::map<std::vector<int>, Complex> out;
    for (const auto& [exps, coeff] : f.monomials()) {
        // expand prod_v (v + u_v)^{a_v} over independent Gaussian moments
        std::map<std::vector<int>, Complex> acc;
        acc[std::vector<int>(static_cast<size_t>(nvars), 0)] = coeff;
        for (int v = 0; v < nvars; ++v) {
            int a = exps[static_cast<size_t>(v)];
            if (a == 0) continue;
            std::map<std::vector<int>, Complex> next;
            for (const auto& [e, c] : acc)
                for (int m = 0; m <= a; m += 2) {
                    double moment = binom(a, m) * double_factorial(m) * std::pow(var, m / 2.0);
                    std::vector<int> e2 = e;
                    e2[static_cast<size_t>(v)] += a - m;
                    next[e2] += c * moment;
                }
            acc = std::move(next);
        }
        for (const auto& [e, c] : acc) out[e] += c;
    }
    SymbolExpr result = SymbolExpr::constant(0.0, d);
    for (const auto& [e, c] : out) {
        if (c == Complex(0.0)) continue;
        SymbolExpr term = SymbolExpr::constant(c, d);
        for (int v = 0; v < nvars; ++v)
            if (e[static_cast<size_t>(v)] > 0)
                term = term * SymbolExpr::variable(v, d).pow(e[static_cast<size_t>(v)]);
        result = result + term;
    }
    return result;
}

Eigen::VectorXcd coherent_state(const PhasePoint& z, int N) {
    int d = z.dof();
    if (z.norm() > 0.8 * std::sqrt(2.0 * N))
        throw TailGuard("coherent state would leak past the truncation (|z| > 0.8 sqrt(2N))");
    // the displacement taking the vacuum to the state centered at z
    FockMatrix w = weyl_operator(-z, N, d);
    return w.entries.col(0);
}

Eigen::VectorXcd coherent_coefficients(double r, double theta, int N) {
    Eigen::VectorXcd c(N);
    for (int n = 0; n < N; ++n) {
        if (r == 0.0) {
            c[n] = n == 0 ? 1.0 : 0.0;
            continue;
        }
        double logmag = -0.5 * r * r + n * std::log(r) - 0.5 * std::lgamma(n + 1.0);
        c[n] = std::exp(logmag) * Complex(std::cos(n * theta), std::sin(n * theta));
    }
    return c;
}

void PolarQuadratureConfig::validate() const {
    if (radial_panels < 1 || panel_points < 2 || panel_points > 24)
        throw InvalidConfig("polar quadrature: bad radial configuration");
    if (angular_grid != 0 && (angular_grid < 64 || (angular_grid & (angular_grid - 1)) != 0))
        throw InvalidConfig("polar quadrature: angular grid must be a power of two >= 64");
}

int PolarQuadratureConfig::resolved_angular(int N) const {
    if (angular_grid > 0) return angular_grid;
    return std::max(256, next_pow2(4 * N));
}

double PolarQuadratureConfig::resolved_radial_max(int N) const {
    return radial_max > 0.0 ? radial_max : std::sqrt(2.0 * N) + 8.0;
}

namespace {

Eigen::MatrixXcd toeplitz_assemble(const SymbolExpr& f, int N, const PolarQuadratureConfig& cfg,
                                   int panels, int ntheta) {
    const double rmax = cfg.resolved_radial_max(N);
    const GLRule& gl = gauss_legendre(cfg.panel_points);
    std::vector<double> rs, ws;
    for (int p = 0; p < panels; ++p) {
        double a = rmax * p / panels;
        double b = rmax * (p + 1) / panels;
        for (int q = 0; q < cfg.panel_points; ++q) {
            rs.push_back(a + (b - a) * 0.5 * (gl.nodes[static_cast<size_t>(q)] + 1.0));
            ws.push_back(0.5 * (b - a) * gl.weights[static_cast<size_t>(q)]);
        }
    }
    std::vector<double> lgam(static_cast<size_t>(N));
    for (int n = 0; n < N; ++n) lgam[static_cast<size_t>(n)] = std::lgamma(n + 1.0);

    const std::size_t chunk = 16;
    std::size_t nchunks = (rs.size() + chunk - 1) / chunk;
    std::vector<Eigen::MatrixXcd> partial(nchunks);
    std::vector<std::exception_ptr> errs(nchunks);
    parallel_chunks(rs.size(), chunk, cfg.workers, [&](std::size_t b, std::size_t e) {
        std::size_t cidx = b / chunk;
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(N, N);
        try {
            Eigen::FFT<double> fft;
            std::vector<Complex> line(static_cast<size_t>(ntheta)), lineF(static_cast<size_t>(ntheta));
            PhasePoint z = PhasePoint::zero(1);
            for (std::size_t ri = b; ri < e; ++ri) {
                double r = rs[ri];
                for (int k = 0; k < ntheta; ++k) {
                    double th = 2.0 * M_PI * k / ntheta;
                    z.coords[0] = std::sqrt(2.0) * r * std::cos(th);
                    z.coords[1] = std::sqrt(2.0) * r * std::sin(th);
                    line[static_cast<size_t>(k)] = f.evaluate(z);
                }
                fft.fwd(lineF, line);
                // c_kappa = (1/ntheta) * bin(kappa mod ntheta)
                double lr = std::log(r);
                for (int i = 0; i < N; ++i)
                    for (int j = 0; j < N; ++j) {
                        int kappa = j - i;
                        int bin = kappa >= 0 ? kappa : kappa + ntheta;
                        Complex c = lineF[static_cast<size_t>(bin)] / static_cast<double>(ntheta);
                        double g = std::exp((i + j + 1) * lr - r * r -
                                            0.5 * (lgam[static_cast<size_t>(i)] +
                                                   lgam[static_cast<size_t>(j)]));
                        acc(i, j) += ws[ri] * 2.0 * g * c;
                    }
            }
        } catch (...) {
            errs[cidx] = std::current_exception();
        }
        partial[cidx] = std::move(acc);
    });
    for (const auto& ep : errs)
        if (ep) std::rethrow_exception(ep);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(N, N);
    for (const auto& p : partial) m += p;
    return m;
}

}  // namespace

FockMatrix toeplitz_matrix(const SymbolExpr& f, int N, const PolarQuadratureConfig& cfg) {
    cfg.validate();
    if (f.dof() != 1) throw InvalidConfig("Toeplitz assembly supports d = 1");
    if (N < 2) throw InvalidConfig("N must be >= 2");
    int ntheta = cfg.resolved_angular(N);
    Eigen::MatrixXcd m = toeplitz_assemble(f, N, cfg, cfg.radial_panels, ntheta);
    if (cfg.verify) {
        Eigen::MatrixXcd m2 = toeplitz_assemble(f, N, cfg, 2 * cfg.radial_panels, 2 * ntheta);
        double diff = (m - m2).cwiseAbs().maxCoeff();
        if (diff > cfg.tol)
            throw QuadratureUnconverged("Toeplitz quadrature changed by " + std::to_string(diff) +
                                        " under polar-grid doubling");
    }
    FockMatrix out;
    out.entries = std::move(m);
    out.N = N;
    out.d = 1;
    out.method = Method::Toeplitz;
    return out;
}

double heat_toeplitz_residual(const SymbolExpr& f, int N, int M, const PolarQuadratureConfig& polar,
                              QuadratureConfig quad, const HeatConfig& heat) {
    if (M < 1 || 2 * M > N) throw InvalidConfig("restriction size M must satisfy 1 <= M <= N/2");
    FockMatrix T = toeplitz_matrix(f, N, polar);
    FockMatrix H;
    if (f.is_polynomial()) {
        SymbolExpr g = heat_transform_polynomial(f, kCalibratedHeatTime);
        H = quantize_kernel(g, N, quad);
    } else {
        HeatConfig hc = heat;
        hc.half_width = std::max(quad.resolved_box_x(N), quad.resolved_box_xi(N));
        hc.points = quad.xi_grid;
        SampledSymbol g = heat_transform(f, kCalibratedHeatTime, hc);
        H = quantize_kernel(g, N, quad);
    }
    return operator_norm(project_block(T, M) - project_block(H, M));
}

}  // namespace weyl

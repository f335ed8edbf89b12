#include "weyl/fock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>

#include "weyl/hermite.hpp"
#include "weyl/parallel.hpp"

namespace weyl {

namespace {

void check_basis_params(int N, int d, int k) {
    if (N < 2) throw InvalidConfig("per-mode cutoff N must be >= 2");
    if (d < 1 || d > 2) throw InvalidConfig("d must be 1 or 2");
    if (k < 1 || k > 8) throw InvalidConfig("coefficient dimension k must be in [1, 8]");
}

Eigen::Index pow_int(int base, int e) {
    Eigen::Index r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// mode-j operator embedded into the d-mode tensor basis (n_d fastest)
Eigen::MatrixXcd embed_mode(const Eigen::MatrixXcd& op, int mode, int N, int d) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (int j = 0; j < d; ++j) {
        if (j == mode)
            m = kron(m, op);
        else
            m = kron(m, Eigen::MatrixXcd::Identity(N, N));
    }
    return m;
}

double binom(int n, int r) {
    double v = 1.0;
    for (int i = 0; i < r; ++i) v = v * (n - i) / (i + 1);
    return v;
}

// Weyl-symmetrized single-mode op(x^a xi^b) = 2^{-a} sum_k C(a,k) Q^k P^b Q^{a-k}
Eigen::MatrixXcd monomial_1mode(int a, int b, int N) {
    Eigen::MatrixXcd Q = position_matrix(N);
    Eigen::MatrixXcd P = momentum_matrix(N);
    std::vector<Eigen::MatrixXcd> Qp(static_cast<size_t>(a) + 1);
    Qp[0] = Eigen::MatrixXcd::Identity(N, N);
    for (int i = 1; i <= a; ++i) Qp[static_cast<size_t>(i)] = Qp[static_cast<size_t>(i) - 1] * Q;
    Eigen::MatrixXcd Pb = Eigen::MatrixXcd::Identity(N, N);
    for (int i = 0; i < b; ++i) Pb = Pb * P;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(N, N);
    for (int k = 0; k <= a; ++k)
        acc += binom(a, k) * (Qp[static_cast<size_t>(k)] * Pb * Qp[static_cast<size_t>(a - k)]);
    return acc / std::pow(2.0, a);
}

struct KernelMode {
    std::vector<int> j;       // per-axis Fourier index
    std::vector<double> omega;
    Eigen::Index column;      // column in the coefficient matrix
};

// Shared kernel-quadrature driver. t-nodes and weights are per axis (all
// axes use the same rule); eval(t_idx, xi_idx) returns the symbol value at
// (t[t_idx[0]]..t[..d-1], xi[xi_idx[0]]..). Axes the symbol does not depend
// on carry a single exact omega = 0 mode instead of a transform, so the
// taper's own spectrum never smears constant directions.
FockMatrix kernel_driver(int N, int d, const QuadratureConfig& cfg,
                         const std::vector<double>& t_nodes, const std::vector<double>& t_weights,
                         double R_xi, int n_xi, const std::array<bool, 2>& transform_axis,
                         const std::function<Complex(const int*, const int*)>& eval) {
    const Eigen::Index side = pow_int(N, d);
    const int nt1 = static_cast<int>(t_nodes.size());
    Eigen::Index nt_total = pow_int(nt1, d);
    int modes_ax[2] = {1, 1};
    int samples_ax[2] = {1, 1};
    for (int ax = 0; ax < d; ++ax) {
        modes_ax[ax] = transform_axis[static_cast<size_t>(ax)] ? n_xi - 1 : 1;  // Nyquist dropped
        samples_ax[ax] = transform_axis[static_cast<size_t>(ax)] ? n_xi : 1;
    }
    const Eigen::Index modes_total =
        static_cast<Eigen::Index>(modes_ax[0]) * (d == 2 ? modes_ax[1] : 1);
    const Eigen::Index samples_total =
        static_cast<Eigen::Index>(samples_ax[0]) * (d == 2 ? samples_ax[1] : 1);

    const double dxi = 2.0 * R_xi / n_xi;
    std::vector<double> taper(static_cast<size_t>(n_xi));
    const double a = cfg.taper_fraction;
    for (int k = 0; k < n_xi; ++k) {
        double xi = -R_xi + dxi * k;
        double r = std::abs(xi) / R_xi;
        if (r <= a)
            taper[static_cast<size_t>(k)] = 1.0;
        else {
            double s = std::cos(0.5 * M_PI * (r - a) / (1.0 - a));
            taper[static_cast<size_t>(k)] = s * s;
        }
    }
    auto axis_taper = [&](int ax, int k) {
        return transform_axis[static_cast<size_t>(ax)] ? taper[static_cast<size_t>(k)] : 1.0;
    };

    // Fourier coefficients of the tapered symbol along the transformed xi
    // axes, per t-node.
    Eigen::MatrixXcd coeff(nt_total, modes_total);
    {
        const std::size_t chunk = 8;
        std::vector<std::exception_ptr> errs((static_cast<std::size_t>(nt_total) + chunk - 1) / chunk);
        parallel_chunks(static_cast<std::size_t>(nt_total), chunk, cfg.workers,
                        [&](std::size_t tb, std::size_t te) {
            std::size_t cidx = tb / chunk;
            try {
                Eigen::FFT<double> fft;
                std::vector<Complex> buf(static_cast<size_t>(samples_total));
                std::vector<Complex> line(static_cast<size_t>(n_xi)), lineF(static_cast<size_t>(n_xi));
                int tidx[2] = {0, 0};
                int xidx[2] = {0, 0};
                for (std::size_t t = tb; t < te; ++t) {
                    if (d == 1) {
                        tidx[0] = static_cast<int>(t);
                    } else {
                        tidx[0] = static_cast<int>(t) / nt1;
                        tidx[1] = static_cast<int>(t) % nt1;
                    }
                    for (int k0 = 0; k0 < samples_ax[0]; ++k0)
                        for (int k1 = 0; k1 < (d == 2 ? samples_ax[1] : 1); ++k1) {
                            xidx[0] = k0;
                            xidx[1] = k1;
                            buf[static_cast<size_t>(k0) * (d == 2 ? samples_ax[1] : 1) + k1] =
                                eval(tidx, xidx) * axis_taper(0, k0) *
                                (d == 2 ? axis_taper(1, k1) : 1.0);
                        }
                    // FFT along each transformed axis
                    if (transform_axis[1] && d == 2) {
                        for (int k0 = 0; k0 < samples_ax[0]; ++k0) {
                            std::copy_n(buf.begin() + static_cast<std::ptrdiff_t>(k0) * n_xi, n_xi,
                                        line.begin());
                            fft.fwd(lineF, line);
                            std::copy(lineF.begin(), lineF.end(),
                                      buf.begin() + static_cast<std::ptrdiff_t>(k0) * n_xi);
                        }
                    }
                    if (transform_axis[0]) {
                        int stride = d == 2 ? samples_ax[1] : 1;
                        for (int k1 = 0; k1 < stride; ++k1) {
                            for (int k0 = 0; k0 < n_xi; ++k0)
                                line[static_cast<size_t>(k0)] =
                                    buf[static_cast<size_t>(k0) * stride + k1];
                            fft.fwd(lineF, line);
                            for (int k0 = 0; k0 < n_xi; ++k0)
                                buf[static_cast<size_t>(k0) * stride + k1] =
                                    lineF[static_cast<size_t>(k0)];
                        }
                    }
                    // reorder: mode j in [-(n/2-1), n/2-1], DFT bin j mod n_xi;
                    // sampling offset -R contributes the (-1)^j phase
                    double norm = 1.0;
                    for (int ax = 0; ax < d; ++ax)
                        if (transform_axis[static_cast<size_t>(ax)]) norm /= n_xi;
                    for (Eigen::Index mcol = 0; mcol < modes_total; ++mcol) {
                        Complex v(norm, 0.0);
                        Eigen::Index flat = 0;
                        for (int ax = 0; ax < d; ++ax) {
                            Eigen::Index mr =
                                (d == 1) ? mcol : (ax == 0 ? mcol / modes_ax[1] : mcol % modes_ax[1]);
                            if (!transform_axis[static_cast<size_t>(ax)]) {
                                flat = flat * samples_ax[ax];
                                continue;
                            }
                            int j = static_cast<int>(mr) - (n_xi / 2 - 1);
                            int bin = j >= 0 ? j : j + n_xi;
                            flat = flat * samples_ax[ax] + bin;
                            if (j & 1) v = -v;
                        }
                        coeff(static_cast<Eigen::Index>(t), mcol) = v * buf[static_cast<size_t>(flat)];
                    }
                }
            } catch (...) {
                errs[cidx] = std::current_exception();
            }
        });
        for (const auto& ep : errs)
            if (ep) std::rethrow_exception(ep);
    }

    // prune modes: a mode at offset omega couples states only where both
    // shifted basis windows carry mass, which decays like a Gaussian in
    // (|omega|/2 - sqrt(2N+1)); combine with the coefficient magnitude
    const double t_max = *std::max_element(t_nodes.begin(), t_nodes.end(),
                                           [](double x, double y) { return std::abs(x) < std::abs(y); });
    const double hard_reach = std::abs(t_max) + std::sqrt(2.0 * N) + 8.0;
    const double support = std::sqrt(2.0 * N + 1.0);
    const double cmax = coeff.cwiseAbs().maxCoeff();
    std::vector<KernelMode> kept;
    for (Eigen::Index mcol = 0; mcol < modes_total; ++mcol) {
        KernelMode km;
        km.column = mcol;
        bool reachable = true;
        double overlap_bound = 1.0;
        for (int ax = 0; ax < d; ++ax) {
            Eigen::Index mr = (d == 1) ? mcol : (ax == 0 ? mcol / modes_ax[1] : mcol % modes_ax[1]);
            int j = transform_axis[static_cast<size_t>(ax)]
                        ? static_cast<int>(mr) - (n_xi / 2 - 1)
                        : 0;
            double omega = M_PI * j / R_xi;
            km.j.push_back(j);
            km.omega.push_back(omega);
            if (std::abs(omega) / 2.0 > hard_reach) reachable = false;
            double gap = std::abs(omega) / 2.0 - support;
            if (gap > 0.0) overlap_bound *= std::exp(-0.5 * gap * gap);
        }
        if (!reachable) continue;
        if (coeff.col(mcol).cwiseAbs().maxCoeff() * overlap_bound < 1e-16 * cmax) continue;
        kept.push_back(std::move(km));
    }

    const double gflops = 4.0 * static_cast<double>(side) * static_cast<double>(side) *
                          static_cast<double>(nt_total) * static_cast<double>(kept.size()) / 1e9;
    if (gflops > cfg.cost_guard_gflops)
        throw CostGuard("kernel quantization would need ~" + std::to_string(gflops) +
                        " GFLOP; reduce N or the xi grid, or use the monomial method");

    // per-axis basis values at shifted nodes, then rank-reduced accumulation
    std::vector<double> tw(static_cast<size_t>(nt_total), 1.0);
    for (Eigen::Index t = 0; t < nt_total; ++t) {
        Eigen::Index rest = t;
        for (int ax = d - 1; ax >= 0; --ax) {
            tw[static_cast<size_t>(t)] *= t_weights[static_cast<size_t>(rest % nt1)];
            rest /= nt1;
        }
    }

    auto basis_block = [&](const KernelMode& km, double sign, Eigen::MatrixXd& out) {
        // out(t_flat, column m) = prod_ax phi_{m_ax}(t_ax + sign * omega_ax / 2)
        std::vector<Eigen::MatrixXd> per_axis(static_cast<size_t>(d));
        std::vector<double> vals;
        for (int ax = 0; ax < d; ++ax) {
            Eigen::MatrixXd& blk = per_axis[static_cast<size_t>(ax)];
            blk.resize(nt1, N);
            double shift = sign * km.omega[static_cast<size_t>(ax)] / 2.0;
            for (int i = 0; i < nt1; ++i) {
                double y = t_nodes[static_cast<size_t>(i)] + shift;
                if (std::abs(y) > 36.0) {
                    blk.row(i).setZero();
                    continue;
                }
                hermite_all(N - 1, y, vals);
                for (int n = 0; n < N; ++n) blk(i, n) = vals[static_cast<size_t>(n)];
            }
        }
        if (d == 1) {
            out = per_axis[0];
            return;
        }
        out.resize(nt_total, side);
        for (int i0 = 0; i0 < nt1; ++i0)
            for (int i1 = 0; i1 < nt1; ++i1)
                for (int m0 = 0; m0 < N; ++m0)
                    for (int m1 = 0; m1 < N; ++m1)
                        out(i0 * nt1 + i1, m0 * N + m1) =
                            per_axis[0](i0, m0) * per_axis[1](i1, m1);
    };

    const std::size_t chunk = 8;
    std::size_t nchunks = (kept.size() + chunk - 1) / chunk;
    std::vector<Eigen::MatrixXd> partial_re(nchunks), partial_im(nchunks);
    parallel_chunks(kept.size(), chunk, cfg.workers, [&](std::size_t b, std::size_t e) {
        std::size_t cidx = b / chunk;
        Eigen::MatrixXd mr = Eigen::MatrixXd::Zero(side, side);
        Eigen::MatrixXd mi = Eigen::MatrixXd::Zero(side, side);
        Eigen::MatrixXd A, B;
        Eigen::VectorXd dr(nt_total), di(nt_total);
        for (std::size_t mk = b; mk < e; ++mk) {
            const KernelMode& km = kept[mk];
            basis_block(km, -1.0, A);
            basis_block(km, +1.0, B);
            for (Eigen::Index t = 0; t < nt_total; ++t) {
                Complex c = coeff(t, km.column) * tw[static_cast<size_t>(t)];
                dr[t] = c.real();
                di[t] = c.imag();
            }
            mr.noalias() += A.transpose() * (dr.asDiagonal() * B);
            mi.noalias() += A.transpose() * (di.asDiagonal() * B);
        }
        partial_re[cidx] = std::move(mr);
        partial_im[cidx] = std::move(mi);
    });

    FockMatrix out;
    out.N = N;
    out.d = d;
    out.k = 1;
    out.method = Method::KernelQuadrature;
    out.quadrature = cfg;
    Eigen::MatrixXd mr = Eigen::MatrixXd::Zero(side, side);
    Eigen::MatrixXd mi = Eigen::MatrixXd::Zero(side, side);
    for (std::size_t c = 0; c < nchunks; ++c) {
        mr += partial_re[c];
        mi += partial_im[c];
    }
    out.entries = mr.cast<Complex>() + Complex(0.0, 1.0) * mi.cast<Complex>();
    return out;
}

bool tree_uses_var_at_least(const NodePtr& n, int lo) {
    if (!n) return false;
    if (n->kind == NodeKind::Variable) return n->var >= lo;
    return tree_uses_var_at_least(n->a, lo) || tree_uses_var_at_least(n->b, lo);
}

bool tree_uses_var_below(const NodePtr& n, int hi) {
    if (!n) return false;
    if (n->kind == NodeKind::Variable) return n->var < hi;
    return tree_uses_var_below(n->a, hi) || tree_uses_var_below(n->b, hi);
}

// Multiplication-operator reduction: a symbol depending on the positions
// alone quantizes to <phi_m, g phi_n>; a symbol in the momenta alone is the
// same matrix conjugated by the Fourier transform, which is diagonal on this
// basis with phases i^{|m|} (-i)^{|n|}.
FockMatrix kernel_multiplication_path(const SymbolExpr& f, int N, const QuadratureConfig& cfg,
                                      bool momentum_side) {
    int d = f.dof();
    const int order = cfg.resolved_gh_order(N, d);
    GaussHermiteRule rule = gauss_hermite(order);
    const int nt1 = static_cast<int>(rule.nodes.size());
    Eigen::Index nt_total = pow_int(nt1, d);
    Eigen::Index side = pow_int(N, d);

    // per-axis basis values
    Eigen::MatrixXd phi(nt1, N);
    std::vector<double> vals;
    for (int i = 0; i < nt1; ++i) {
        hermite_all(N - 1, rule.nodes[static_cast<size_t>(i)], vals);
        for (int n = 0; n < N; ++n) phi(i, n) = vals[static_cast<size_t>(n)];
    }
    Eigen::MatrixXd big;
    if (d == 1) {
        big = phi;
    } else {
        big.resize(nt_total, side);
        for (int i0 = 0; i0 < nt1; ++i0)
            for (int i1 = 0; i1 < nt1; ++i1)
                for (int m0 = 0; m0 < N; ++m0)
                    for (int m1 = 0; m1 < N; ++m1)
                        big(i0 * nt1 + i1, m0 * N + m1) = phi(i0, m0) * phi(i1, m1);
    }

    Eigen::VectorXd wr(nt_total), wi(nt_total);
    PhasePoint z = PhasePoint::zero(d);
    for (Eigen::Index t = 0; t < nt_total; ++t) {
        double w = 1.0;
        Eigen::Index rest = t;
        for (int ax = d - 1; ax >= 0; --ax) {
            int idx = static_cast<int>(rest % nt1);
            rest /= nt1;
            // variable slot: positions for the x-only path, momenta otherwise
            int slot = momentum_side ? d + ax : ax;
            z.coords[static_cast<size_t>(slot)] = rule.nodes[static_cast<size_t>(idx)];
            w *= rule.weights[static_cast<size_t>(idx)];
        }
        Complex v = f.evaluate(z) * w;
        wr[t] = v.real();
        wi[t] = v.imag();
    }
    Eigen::MatrixXd mr = big.transpose() * (wr.asDiagonal() * big);
    Eigen::MatrixXd mi = big.transpose() * (wi.asDiagonal() * big);
    Eigen::MatrixXcd m = mr.cast<Complex>() + Complex(0.0, 1.0) * mi.cast<Complex>();

    if (momentum_side) {
        const Complex phases[4] = {Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};
        auto total_level = [&](Eigen::Index r) {
            int s = 0;
            for (int ax = 0; ax < d; ++ax) {
                s += static_cast<int>(r % N);
                r /= N;
            }
            return s;
        };
        for (Eigen::Index a = 0; a < side; ++a)
            for (Eigen::Index b = 0; b < side; ++b) {
                int p = ((total_level(a) - total_level(b)) % 4 + 4) % 4;
                m(a, b) *= phases[p];
            }
    }

    FockMatrix out;
    out.entries = std::move(m);
    out.N = N;
    out.d = d;
    out.k = 1;
    out.method = Method::KernelQuadrature;
    out.quadrature = cfg;
    return out;
}

FockMatrix kernel_quantize_expr(const SymbolExpr& f, int N, const QuadratureConfig& cfg,
                                bool allow_verify) {
    cfg.validate();
    int d = f.dof();
    check_basis_params(N, d, 1);

    const bool uses_x = tree_uses_var_below(f.root(), d);
    const bool uses_xi = tree_uses_var_at_least(f.root(), d);
    if (!uses_xi) return kernel_multiplication_path(f, N, cfg, false);
    if (!uses_x) return kernel_multiplication_path(f, N, cfg, true);

    const double R_xi = cfg.resolved_box_xi(N);
    const int order = cfg.resolved_gh_order(N, d);
    GaussHermiteRule rule = gauss_hermite(order);

    std::array<bool, 2> transform = {true, true};
    for (int ax = 0; ax < d; ++ax) {
        // a momentum variable the tree never mentions needs no transform
        bool depends = false;
        std::function<void(const NodePtr&)> walk = [&](const NodePtr& n) {
            if (!n || depends) return;
            if (n->kind == NodeKind::Variable && n->var == d + ax) depends = true;
            walk(n->a);
            walk(n->b);
        };
        walk(f.root());
        transform[static_cast<size_t>(ax)] = depends;
    }

    std::vector<double> xi_nodes(static_cast<size_t>(cfg.xi_grid));
    for (int k = 0; k < cfg.xi_grid; ++k)
        xi_nodes[static_cast<size_t>(k)] = -R_xi + 2.0 * R_xi / cfg.xi_grid * k;

    auto eval = [&](const int* tidx, const int* xidx) -> Complex {
        PhasePoint z = PhasePoint::zero(d);
        for (int ax = 0; ax < d; ++ax) {
            z.coords[static_cast<size_t>(ax)] = rule.nodes[static_cast<size_t>(tidx[ax])];
            z.coords[static_cast<size_t>(d + ax)] =
                transform[static_cast<size_t>(ax)] ? xi_nodes[static_cast<size_t>(xidx[ax])] : 0.0;
        }
        return f.evaluate(z);
    };

    FockMatrix m =
        kernel_driver(N, d, cfg, rule.nodes, rule.weights, R_xi, cfg.xi_grid, transform, eval);
    if (allow_verify && cfg.verify_grid) {
        QuadratureConfig finer = cfg;
        finer.xi_grid *= 2;
        finer.verify_grid = false;
        FockMatrix m2 = kernel_quantize_expr(f, N, finer, false);
        double diff = (m.entries - m2.entries).cwiseAbs().maxCoeff();
        if (diff > cfg.grid_tol)
            throw GridTooCoarse("kernel quantization changed by " + std::to_string(diff) +
                                " under xi-grid doubling (tol " + std::to_string(cfg.grid_tol) + ")");
    }
    return m;
}

}  // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::Monomial: return "MONOMIAL";
        case Method::KernelQuadrature: return "KERNEL_QUADRATURE";
        case Method::Exponential: return "EXPONENTIAL";
        case Method::Commutator: return "COMMUTATOR";
        case Method::Toeplitz: return "TOEPLITZ";
        case Method::ToeplitzSymbol: return "TOEPLITZ_SYMBOL";
    }
    return "?";
}

QuadratureConfig QuadratureConfig::defaults(int N) {
    QuadratureConfig cfg;
    cfg.box_x = cfg.resolved_box_x(N);
    cfg.box_xi = cfg.resolved_box_xi(N);
    cfg.gh_order = cfg.resolved_gh_order(N);
    return cfg;
}

void QuadratureConfig::validate() const {
    if (box_x < 0.0 || box_xi < 0.0) throw InvalidConfig("quadrature half-widths must be > 0");
    if (xi_grid < 64 || (xi_grid & (xi_grid - 1)) != 0)
        throw InvalidConfig("xi grid must be a power of two >= 64");
    if (taper_fraction <= 0.0 || taper_fraction >= 1.0)
        throw InvalidConfig("taper fraction must lie in (0, 1)");
    if (gh_order < 0) throw InvalidConfig("Gauss-Hermite order must be positive");
}

double QuadratureConfig::resolved_box_x(int N) const {
    return box_x > 0.0 ? box_x : std::max(8.0, 2.0 * std::sqrt(2.0 * N));
}

double QuadratureConfig::resolved_box_xi(int N) const {
    return box_xi > 0.0 ? box_xi : std::max(8.0, 2.0 * std::sqrt(2.0 * N));
}

int QuadratureConfig::resolved_gh_order(int N, int d) const {
    if (gh_order > 0) return gh_order;
    // tensor nodes square the cost at d = 2; the floor only helps tiny d = 1 runs
    return d == 1 ? std::max(2 * N, 48) : 2 * N + 8;
}

void FockMatrix::check_shape() const {
    Eigen::Index expect = pow_int(N, d) * k;
    if (entries.rows() != expect || entries.cols() != expect)
        throw DimensionMismatch("Fock matrix side must be N^d * k");
}

double FockMatrix::hermiticity_deviation() const {
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd position_matrix(int N) {
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(N, N);
    for (int n = 1; n < N; ++n) {
        double v = std::sqrt(n / 2.0);
        q(n - 1, n) = v;
        q(n, n - 1) = v;
    }
    return q;
}

Eigen::MatrixXcd momentum_matrix(int N) {
    // P = (a - a^dagger) / (i sqrt(2)): <phi_{n-1}, P phi_n> = -i sqrt(n/2)
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(N, N);
    for (int n = 1; n < N; ++n) {
        double v = std::sqrt(n / 2.0);
        p(n - 1, n) = Complex(0.0, -v);
        p(n, n - 1) = Complex(0.0, v);
    }
    return p;
}

LadderMatrices ladder_matrices(int N, int d) {
    check_basis_params(N, d, 1);
    LadderMatrices lm;
    Eigen::MatrixXcd q1 = position_matrix(N);
    Eigen::MatrixXcd p1 = momentum_matrix(N);
    for (int j = 0; j < d; ++j) {
        FockMatrix q;
        q.entries = embed_mode(q1, j, N, d);
        q.N = N;
        q.d = d;
        q.method = Method::Monomial;
        lm.Q.push_back(std::move(q));
        FockMatrix p;
        p.entries = embed_mode(p1, j, N, d);
        p.N = N;
        p.d = d;
        p.method = Method::Monomial;
        lm.P.push_back(std::move(p));
    }
    return lm;
}

FockMatrix quantize_monomial(const std::vector<int>& a, const std::vector<int>& b, int N, int d) {
    check_basis_params(N, d, 1);
    if (static_cast<int>(a.size()) != d || static_cast<int>(b.size()) != d)
        throw DimensionMismatch("monomial exponent vectors must have length d");
    int deg = 0;
    for (int v : a) deg += v;
    for (int v : b) deg += v;
    if (deg > 12) throw CostGuard("monomial degree exceeds the cap of 12");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (int j = 0; j < d; ++j)
        m = kron(m, monomial_1mode(a[static_cast<size_t>(j)], b[static_cast<size_t>(j)], N));
    FockMatrix out;
    out.entries = std::move(m);
    out.N = N;
    out.d = d;
    out.method = Method::Monomial;
    return out;
}

FockMatrix quantize_polynomial(const SymbolExpr& f, int N) {
    int d = f.dof();
    check_basis_params(N, d, 1);
    if (!f.is_polynomial()) throw MethodMismatch("monomial method requires a polynomial symbol");
    Eigen::Index side = pow_int(N, d);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(side, side);
    std::map<std::vector<int>, Eigen::MatrixXcd> mode_cache;
    for (const auto& [expvec, c] : f.monomials()) {
        int deg = std::accumulate(expvec.begin(), expvec.end(), 0);
        if (deg > 12) throw CostGuard("monomial degree exceeds the cap of 12");
        auto it = mode_cache.find(expvec);
        if (it == mode_cache.end()) {
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
            for (int j = 0; j < d; ++j)
                m = kron(m, monomial_1mode(expvec[static_cast<size_t>(j)],
                                           expvec[static_cast<size_t>(d + j)], N));
            it = mode_cache.emplace(expvec, std::move(m)).first;
        }
        acc += c * it->second;
    }
    FockMatrix out;
    out.entries = std::move(acc);
    out.N = N;
    out.d = d;
    out.method = Method::Monomial;
    return out;
}

FockMatrix quantize_kernel(const SymbolExpr& f, int N, const QuadratureConfig& cfg) {
    return kernel_quantize_expr(f, N, cfg, true);
}

FockMatrix quantize_kernel(const MatrixSymbol& f, int N, const QuadratureConfig& cfg) {
    int d = f.dof();
    int k = f.k();
    check_basis_params(N, d, k);
    Eigen::Index rank_count = pow_int(N, d);
    Eigen::Index side = rank_count * k;
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(side, side);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            FockMatrix blk = quantize_kernel(f.at(i, j), N, cfg);
            for (Eigen::Index rm = 0; rm < rank_count; ++rm)
                for (Eigen::Index rn = 0; rn < rank_count; ++rn)
                    full(rm * k + i, rn * k + j) = blk.entries(rm, rn);
        }
    FockMatrix out;
    out.entries = std::move(full);
    out.N = N;
    out.d = d;
    out.k = k;
    out.method = Method::KernelQuadrature;
    out.quadrature = cfg;
    return out;
}

FockMatrix quantize_kernel(const SampledSymbol& f, int N, const QuadratureConfig& cfg) {
    f.validate();
    cfg.validate();
    int d = f.d;
    check_basis_params(N, d, 1);
    const int n = f.points_per_axis;
    std::vector<double> nodes(static_cast<size_t>(n));
    std::vector<double> weights(static_cast<size_t>(n), f.spacing());
    for (int i = 0; i < n; ++i) nodes[static_cast<size_t>(i)] = f.node(i);

    auto eval = [&](const int* tidx, const int* xidx) -> Complex {
        std::size_t flat = 0;
        for (int ax = 0; ax < d; ++ax) flat = flat * n + static_cast<std::size_t>(tidx[ax]);
        for (int ax = 0; ax < d; ++ax) flat = flat * n + static_cast<std::size_t>(xidx[ax]);
        return f.values[flat];
    };
    QuadratureConfig used = cfg;
    used.xi_grid = n;
    used.verify_grid = false;  // the sample fixes the grid; no refinement possible
    return kernel_driver(N, d, used, nodes, weights, f.half_width, n, {true, true}, eval);
}

FockMatrix weyl_operator(const PhasePoint& z, int N, int d, double max_displacement) {
    check_basis_params(N, d, 1);
    if (z.dof() != d) throw DimensionMismatch("weyl_operator: phase point dimension mismatch");
    if (z.norm() > max_displacement)
        throw InvalidConfig("weyl_operator: |z| exceeds the configured maximum of " +
                            std::to_string(max_displacement));
    LadderMatrices lm = ladder_matrices(N, d);
    Eigen::Index side = pow_int(N, d);
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(side, side);
    for (int j = 0; j < d; ++j) {
        double xj = z.coords[static_cast<size_t>(j)];
        double xij = z.coords[static_cast<size_t>(d + j)];
        gen += xj * lm.P[static_cast<size_t>(j)].entries - xij * lm.Q[static_cast<size_t>(j)].entries;
    }
    Eigen::MatrixXcd ig = Complex(0.0, 1.0) * gen;
    FockMatrix out;
    out.entries = ig.exp();
    out.N = N;
    out.d = d;
    out.method = Method::Exponential;
    return out;
}

double operator_norm(const Eigen::MatrixXcd& m) {
    if (m.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double operator_norm(const FockMatrix& m) { return operator_norm(m.entries); }

FockMatrix quantize(const SymbolExpr& f, int N, Method method, const QuadratureConfig& cfg) {
    switch (method) {
        case Method::Monomial: return quantize_polynomial(f, N);
        case Method::KernelQuadrature: return quantize_kernel(f, N, cfg);
        default: throw InvalidConfig("quantize: method must be MONOMIAL or KERNEL_QUADRATURE");
    }
}

FockMatrix quantize(const MatrixSymbol& f, int N, Method method, const QuadratureConfig& cfg) {
    if (method == Method::KernelQuadrature) return quantize_kernel(f, N, cfg);
    if (method != Method::Monomial)
        throw InvalidConfig("quantize: method must be MONOMIAL or KERNEL_QUADRATURE");
    if (!f.is_polynomial()) throw MethodMismatch("monomial method requires polynomial entries");
    int d = f.dof();
    int k = f.k();
    check_basis_params(N, d, k);
    Eigen::Index rank_count = pow_int(N, d);
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(rank_count * k, rank_count * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            FockMatrix blk = quantize_polynomial(f.at(i, j), N);
            for (Eigen::Index rm = 0; rm < rank_count; ++rm)
                for (Eigen::Index rn = 0; rn < rank_count; ++rn)
                    full(rm * k + i, rn * k + j) = blk.entries(rm, rn);
        }
    FockMatrix out;
    out.entries = std::move(full);
    out.N = N;
    out.d = d;
    out.k = k;
    out.method = Method::Monomial;
    return out;
}

FockMatrix quantize_auto(const SymbolExpr& f, int N, const QuadratureConfig& cfg) {
    return f.is_polynomial() ? quantize_polynomial(f, N) : quantize_kernel(f, N, cfg);
}

FockMatrix quantize_auto(const MatrixSymbol& f, int N, const QuadratureConfig& cfg) {
    return quantize(f, N, f.is_polynomial() ? Method::Monomial : Method::KernelQuadrature, cfg);
}

Eigen::MatrixXcd project_block(const Eigen::MatrixXcd& entries, int N, int d, int k, int M) {
    if (M < 1 || M > N) throw InvalidConfig("projection size M must be in [1, N]");
    Eigen::Index rank_count = pow_int(N, d);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index r = 0; r < rank_count; ++r) {
        Eigen::Index rest = r;
        bool in_cube = true;
        for (int ax = 0; ax < d; ++ax) {
            Eigen::Index idx = rest % N;
            rest /= N;
            if (idx >= M) in_cube = false;
        }
        if (!in_cube) continue;
        for (int c = 0; c < k; ++c) keep.push_back(r * k + c);
    }
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i)
        for (size_t j = 0; j < keep.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                entries(keep[i], keep[j]);
    return out;
}

Eigen::MatrixXcd project_block(const FockMatrix& m, int M) {
    return project_block(m.entries, m.N, m.d, m.k, M);
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace weyl

#include <complex>
#include <cstdlib>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "weyl/bargmann.hpp"
#include "weyl/diagnostics.hpp"
#include "weyl/io.hpp"
#include "weyl/oracles.hpp"
#include "weyl/parallel.hpp"

namespace {

using namespace weyl;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitFail = 10;
constexpr int kExitInconclusive = 11;

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::Pass: return kExitOk;
        case Verdict::Fail: return kExitFail;
        default: return kExitInconclusive;
    }
}

std::vector<double> parse_csv_doubles(const std::string& s) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        out.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

PhasePoint parse_point(const std::string& s) { return PhasePoint(parse_csv_doubles(s)); }

// JSON config file: defaults < file < explicit flags. Unknown keys rejected.
struct ConfigFile {
    Json values;

    static ConfigFile load(const std::string& path, const std::vector<std::string>& known) {
        ConfigFile cf;
        cf.values = Json::parse(read_text_file(path));
        if (!cf.values.is_object()) throw InvalidConfig("config file must hold a JSON object");
        for (const auto& [key, v] : cf.values.items()) {
            if (std::find(known.begin(), known.end(), key) == known.end())
                throw InvalidConfig("unknown config key: " + key);
        }
        return cf;
    }

    template <typename T>
    void apply(const CLI::App& app, const char* flag, const char* key, T& target) const {
        if (app.count(flag) == 0 && values.contains(key)) target = values.at(key).get<T>();
    }
};

struct CommonOptions {
    std::string symbol;
    int d = 1;
    int N = 64;
    int M = 0;  // 0 = N/2
    std::string config_path;
    int workers = 0;
    unsigned seed = 12345;
    double box_x = 0.0, box_xi = 0.0;
    int xi_grid = 1024;
    int gh_order = 0;
    bool verify_grid = false;

    QuadratureConfig quadrature() const {
        QuadratureConfig q;
        q.box_x = box_x;
        q.box_xi = box_xi;
        q.xi_grid = xi_grid;
        q.gh_order = gh_order;
        q.verify_grid = verify_grid;
        q.workers = workers;
        return q;
    }

    // worker count is an execution detail, never part of the artifact:
    // outputs must be byte-identical for every --workers value
    Json effective(const char* command) const {
        Json j;
        j["command"] = command;
        j["symbol"] = symbol;
        j["d"] = d;
        j["N"] = N;
        j["M"] = M > 0 ? M : N / 2;
        j["seed"] = seed;
        j["box_x"] = box_x;
        j["box_xi"] = box_xi;
        j["xi_grid"] = xi_grid;
        j["gh_order"] = gh_order;
        j["verify_grid"] = verify_grid;
        return j;
    }
};

void resolve_workers(const CLI::App& app, const char* flag, int workers) {
    const CLI::Option* opt = app.get_option_no_throw(flag);
    if (!opt || opt->count() == 0) {
        const char* env = std::getenv("WEYL_LAB_WORKERS");
        if (env) workers = std::atoi(env);
    }
    set_default_workers(workers > 0 ? workers : 1);
}

int run_quantize(const CommonOptions& opt, const std::string& method, const std::string& format,
                 const std::string& out) {
    QuadratureConfig q = opt.quadrature();
    FockMatrix m;
    bool is_matrix = looks_like_matrix(opt.symbol);
    Method mth;
    if (method == "monomial") mth = Method::Monomial;
    else if (method == "kernel") mth = Method::KernelQuadrature;
    else mth = Method::Monomial;  // placeholder; auto resolved below

    if (is_matrix) {
        MatrixSymbol F = parse_matrix(opt.symbol, opt.d);
        m = (method == "auto") ? quantize_auto(F, opt.N, q) : quantize(F, opt.N, mth, q);
    } else {
        SymbolExpr f = parse(opt.symbol, opt.d);
        m = (method == "auto") ? quantize_auto(f, opt.N, q) : quantize(f, opt.N, mth, q);
    }

    double herm = m.hermiticity_deviation();
    double norm = operator_norm(m);
    std::cout << "hermiticity_deviation " << herm << "\n";
    std::cout << "operator_norm " << norm << "\n";
    std::cout << "workers " << default_workers() << "\n";

    Json cfg = opt.effective("quantize");
    cfg["method"] = method;
    cfg["format"] = format;
    std::cout << "config " << cfg.dump() << "\n";

    if (!out.empty()) {
        if (format == "bin") {
            write_fock_binary(m, out);
        } else {
            Json j = to_json(m);
            j["config"] = cfg;
            write_text_file(out, j.dump(2) + "\n");
        }
    }
    return kExitOk;
}

int run_check(const CommonOptions& opt, DiagnosticsConfig dcfg, const std::string& out) {
    dcfg.N = opt.N;
    dcfg.workers = default_workers();
    dcfg.quad = opt.quadrature();
    dcfg.quad.verify_grid = false;

    AnySymbol f = looks_like_matrix(opt.symbol)
                      ? AnySymbol(parse_matrix(opt.symbol, opt.d))
                      : AnySymbol(parse(opt.symbol, opt.d));
    DiagnosticsReport rep = build_report(f, dcfg);
    Json j = to_json(rep);
    j["config"] = opt.effective("check");
    std::string text = j.dump(2) + "\n";
    if (!out.empty()) write_text_file(out, text);
    std::cout << "overall " << to_string(rep.overall) << "\n";
    return verdict_exit(rep.overall);
}

int run_spectrum(const CommonOptions& opt, const std::string& method, int levels,
                 const std::string& out) {
    QuadratureConfig q = opt.quadrature();
    SymbolExpr f = parse(opt.symbol, opt.d);
    FockMatrix m;
    if (method == "monomial") m = quantize(f, opt.N, Method::Monomial, q);
    else if (method == "kernel") m = quantize(f, opt.N, Method::KernelQuadrature, q);
    else m = quantize_auto(f, opt.N, q);
    if (m.hermiticity_deviation() > 1e-8)
        throw NonFinite("spectrum requested for a non-hermitian quantization");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.entries, Eigen::EigenvaluesOnly);
    std::ostringstream os;
    os.precision(15);
    os << "# config: " << opt.effective("spectrum").dump() << "\n";
    os << "level,eigenvalue\n";
    for (int i = 0; i < levels && i < es.eigenvalues().size(); ++i)
        os << i << "," << es.eigenvalues()[i] << "\n";
    if (!out.empty()) write_text_file(out, os.str());
    else std::cout << os.str();
    return kExitOk;
}

int run_bc(const CommonOptions& opt, const std::string& Ls, int grid, int levels, bool verify,
           const std::string& out) {
    SymbolExpr V = parse(opt.symbol, 1);
    BCOptions bopts;
    bopts.verify_grid = verify;
    BCSpectrumTable t = bc_sensitivity(V, parse_csv_doubles(Ls), grid, levels, bopts);
    Json cfg = opt.effective("bc");
    cfg["L_schedule"] = parse_csv_doubles(Ls);
    cfg["grid"] = grid;
    cfg["levels"] = levels;
    std::string csv = bc_table_csv(t, cfg.dump());
    if (!out.empty()) write_text_file(out, csv);
    else std::cout << csv;
    std::cout << "verdict " << to_string(t.verdict) << "\n";
    return kExitOk;
}

int run_toeplitz(const CommonOptions& opt, bool verify_heat, double heat_tol,
                 const std::string& format, const std::string& out) {
    SymbolExpr f = parse(opt.symbol, 1);
    PolarQuadratureConfig polar;
    polar.workers = default_workers();
    FockMatrix T = toeplitz_matrix(f, opt.N, polar);
    std::cout << "operator_norm " << operator_norm(T) << "\n";
    Json cfg = opt.effective("toeplitz");
    if (!out.empty()) {
        if (format == "bin") {
            write_fock_binary(T, out);
        } else {
            Json j = to_json(T);
            j["config"] = cfg;
            write_text_file(out, j.dump(2) + "\n");
        }
    }
    if (verify_heat) {
        int M = opt.M > 0 ? opt.M : opt.N / 4;
        double r = heat_toeplitz_residual(f, opt.N, M, polar, opt.quadrature(), {});
        std::cout << "heat_toeplitz_residual " << r << "\n";
        if (!(r <= heat_tol))
            throw QuadratureUnconverged("heat/Toeplitz residual " + std::to_string(r) +
                                        " exceeds " + std::to_string(heat_tol));
    }
    return kExitOk;
}

int run_mnorm(const CommonOptions& opt, double window, double box, int grid,
              const std::string& out) {
    Json j;
    j["config"] = opt.effective("mnorm");
    if (looks_like_matrix(opt.symbol)) {
        MatrixSymbol F = parse_matrix(opt.symbol, 1);
        MInftyOneEstimate e = m_infty_one_norm(F, window, box, grid);
        j["estimate"] = e.estimate;
        j["converged"] = e.converged;
        j["grid_change"] = e.grid_change;
        j["box_change"] = e.box_change;
    } else {
        SymbolExpr f = parse(opt.symbol, 1);
        MInftyOneEstimate e = m_infty_one_norm(f, window, box, grid);
        j["estimate"] = e.estimate;
        j["converged"] = e.converged;
        j["grid_change"] = e.grid_change;
        j["box_change"] = e.box_change;
    }
    std::string text = j.dump(2) + "\n";
    if (!out.empty()) write_text_file(out, text);
    std::cout << text;
    return kExitOk;
}

void print_oracle_line(const std::string& name, std::complex<double> oracle,
                       std::complex<double> fast) {
    std::cout.precision(12);
    std::cout << name << " oracle " << oracle.real();
    if (oracle.imag() != 0.0) std::cout << (oracle.imag() > 0 ? "+" : "") << oracle.imag() << "i";
    std::cout << " fast " << fast.real();
    if (fast.imag() != 0.0) std::cout << (fast.imag() > 0 ? "+" : "") << fast.imag() << "i";
    std::cout << " difference " << std::abs(oracle - fast) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weyl-lab: truncated-basis quantization and self-adjointness diagnostics"};
    app.require_subcommand(1);

    const std::vector<std::string> known_keys = {
        "d", "N", "M", "workers", "seed", "box_x", "box_xi", "xi_grid", "gh_order",
        "verify_grid", "method", "format", "levels", "grid", "L_schedule", "window",
        "box", "heat_tol"};

    CommonOptions opt;
    std::string method = "auto", format = "json", out, Ls = "8,10,12";
    int levels = 5, grid = 4000, mgrid = 64;
    bool verify_heat = false, bc_verify = false, no_refine = false;
    double heat_tol = 1e-4, window = 1.0, mbox = 8.0;

    auto add_common = [&](CLI::App* sub, bool with_quadrature) {
        sub->add_option("--symbol", opt.symbol, "phase-space symbol text")->required();
        sub->add_option("--d", opt.d, "degrees of freedom");
        sub->add_option("--N", opt.N, "per-mode basis cutoff");
        sub->add_option("--M", opt.M, "trusted-block size (default N/2)");
        sub->add_option("--config", opt.config_path, "JSON config file");
        sub->add_option("--workers", opt.workers, "worker threads (or WEYL_LAB_WORKERS)");
        sub->add_option("--seed", opt.seed, "seed for sample grids");
        if (with_quadrature) {
            sub->add_option("--box-x", opt.box_x, "position box half-width (0 = auto)");
            sub->add_option("--box-xi", opt.box_xi, "momentum box half-width (0 = auto)");
            sub->add_option("--xi-grid", opt.xi_grid, "xi grid points (power of two)");
            sub->add_option("--gh-order", opt.gh_order, "Gauss-Hermite order (0 = auto)");
            sub->add_flag("--verify-grid", opt.verify_grid, "re-run at doubled xi grid");
        }
    };

    CLI::App* q = app.add_subcommand("quantize", "quantize a symbol to a Fock-basis matrix");
    add_common(q, true);
    q->add_option("--method", method, "monomial | kernel | auto");
    q->add_option("--format", format, "json | bin");
    q->add_option("--out", out, "output path");

    CLI::App* c = app.add_subcommand("check", "run the self-adjointness criteria");
    add_common(c, true);
    c->add_option("--out", out, "report path (JSON)");
    c->add_flag("--no-refine", no_refine, "skip the N-refinement pass");

    CLI::App* sp = app.add_subcommand("spectrum", "lowest eigenvalues of the quantization");
    add_common(sp, true);
    sp->add_option("--method", method, "monomial | kernel | auto");
    sp->add_option("--levels", levels, "number of eigenvalues");
    sp->add_option("--out", out, "CSV path");

    CLI::App* bc = app.add_subcommand("bc", "boundary-condition spectral sensitivity");
    bc->add_option("--potential", opt.symbol, "potential V(x)")->required();
    bc->add_option("--L", Ls, "comma-separated interval half-widths");
    bc->add_option("--grid", grid, "finite-difference intervals");
    bc->add_option("--levels", levels, "eigenvalues per (L, bc)");
    bc->add_flag("--verify-grid", bc_verify, "check stability under grid doubling");
    bc->add_option("--out", out, "CSV path");
    bc->add_option("--config", opt.config_path, "JSON config file");
    bc->add_option("--workers", opt.workers, "worker threads");

    CLI::App* tp = app.add_subcommand("toeplitz", "Toeplitz matrix and heat-transform check");
    add_common(tp, true);
    tp->add_flag("--verify-heat", verify_heat, "compare against op(heat f)");
    tp->add_option("--heat-tol", heat_tol, "residual tolerance for --verify-heat");
    tp->add_option("--format", format, "json | bin");
    tp->add_option("--out", out, "output path");

    CLI::App* mn = app.add_subcommand("mnorm", "modulation-space norm estimate");
    mn->add_option("--symbol", opt.symbol, "symbol text")->required();
    mn->add_option("--window", window, "Gaussian window width");
    mn->add_option("--box", mbox, "sampling box half-width");
    mn->add_option("--grid", mgrid, "grid points per axis");
    mn->add_option("--out", out, "JSON path");
    mn->add_option("--config", opt.config_path, "JSON config file");
    mn->add_option("--workers", opt.workers, "worker threads");

    CLI::App* orc = app.add_subcommand("oracle", "brute-force reference computations");
    orc->require_subcommand(1);
    int orow = 0, ocol = 1, omm = 0, onn = 0, on = 0;
    double ox = 1.0;
    std::string oz = "0.5,0.5", ow = "0,0", osym = "cos(x)";
    CLI::App* o_ladder = orc->add_subcommand("ladder-entry", "position/momentum matrix entries");
    o_ladder->add_option("--row", orow);
    o_ladder->add_option("--col", ocol);
    CLI::App* o_weyl = orc->add_subcommand("weyl-overlap", "vacuum overlap of a Weyl operator");
    o_weyl->add_option("--z", oz, "x,xi");
    o_weyl->add_option("--N", opt.N);
    CLI::App* o_kernel = orc->add_subcommand("kernel-element", "matrix element by direct quadrature");
    o_kernel->add_option("--symbol", osym);
    o_kernel->add_option("--m", omm);
    o_kernel->add_option("--n", onn);
    o_kernel->add_option("--N", opt.N);
    CLI::App* o_toe = orc->add_subcommand("toeplitz-diag", "harmonic Toeplitz diagonal");
    o_toe->add_option("--n", on);
    o_toe->add_option("--N", opt.N);
    CLI::App* o_heat = orc->add_subcommand("heat-x2", "heat transform of x^2 at a point");
    o_heat->add_option("--x", ox);
    CLI::App* o_coh = orc->add_subcommand("coherent-overlap", "coherent state overlap");
    o_coh->add_option("--z", oz, "x,xi");
    o_coh->add_option("--w", ow, "x,xi");
    o_coh->add_option("--N", opt.N);

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (!opt.config_path.empty()) {
            ConfigFile cf = ConfigFile::load(opt.config_path, known_keys);
            cf.apply(*sub, "--d", "d", opt.d);
            cf.apply(*sub, "--N", "N", opt.N);
            cf.apply(*sub, "--M", "M", opt.M);
            cf.apply(*sub, "--workers", "workers", opt.workers);
            cf.apply(*sub, "--seed", "seed", opt.seed);
            if (sub->get_option_no_throw("--box-x")) {
                cf.apply(*sub, "--box-x", "box_x", opt.box_x);
                cf.apply(*sub, "--box-xi", "box_xi", opt.box_xi);
                cf.apply(*sub, "--xi-grid", "xi_grid", opt.xi_grid);
                cf.apply(*sub, "--gh-order", "gh_order", opt.gh_order);
            }
            if (sub->get_option_no_throw("--method")) cf.apply(*sub, "--method", "method", method);
            if (sub->get_option_no_throw("--format")) cf.apply(*sub, "--format", "format", format);
            if (sub->get_option_no_throw("--levels")) cf.apply(*sub, "--levels", "levels", levels);
            if (sub->get_option_no_throw("--grid")) cf.apply(*sub, "--grid", "grid", grid);
            if (sub->get_option_no_throw("--L")) cf.apply(*sub, "--L", "L_schedule", Ls);
            if (sub->get_option_no_throw("--window")) cf.apply(*sub, "--window", "window", window);
            if (sub->get_option_no_throw("--box")) cf.apply(*sub, "--box", "box", mbox);
            if (sub->get_option_no_throw("--heat-tol"))
                cf.apply(*sub, "--heat-tol", "heat_tol", heat_tol);
        }
        resolve_workers(*sub, "--workers", opt.workers);

        if (sub == q) return run_quantize(opt, method, format, out);
        if (sub == c) {
            DiagnosticsConfig dcfg;
            dcfg.refine = !no_refine;
            return run_check(opt, dcfg, out);
        }
        if (sub == sp) return run_spectrum(opt, method, levels, out);
        if (sub == bc) return run_bc(opt, Ls, grid, levels, bc_verify, out);
        if (sub == tp) return run_toeplitz(opt, verify_heat, heat_tol, format, out);
        if (sub == mn) return run_mnorm(opt, window, mbox, mgrid, out);
        if (sub == orc) {
            CLI::App* osub = orc->get_subcommands().front();
            if (osub == o_ladder) {
                double oracle = oracle::ladder_q_entry(orow, ocol);
                int n = std::max(orow, ocol) + 2;
                double fast = position_matrix(n)(orow, ocol).real();
                print_oracle_line("ladder-entry", oracle, fast);
                Complex po = oracle::ladder_p_entry(orow, ocol);
                Complex pf = momentum_matrix(n)(orow, ocol);
                print_oracle_line("ladder-entry-momentum", po, pf);
            } else if (osub == o_weyl) {
                PhasePoint z = parse_point(oz);
                double oracle = oracle::weyl_vacuum_overlap(z.coords[0], z.coords[1]);
                FockMatrix W = weyl_operator(z, opt.N, 1);
                double fast = std::abs(W.entries(0, 0));
                print_oracle_line("weyl-overlap", oracle, fast);
            } else if (osub == o_kernel) {
                SymbolExpr f = parse(osym, 1);
                Complex oracle = oracle::kernel_matrix_element(f, omm, onn);
                FockMatrix m = quantize_kernel(f, opt.N, {});
                print_oracle_line("kernel-element", oracle, m.entries(omm, onn));
            } else if (osub == o_toe) {
                double oracle = oracle::harmonic_toeplitz_diagonal(on);
                FockMatrix T = toeplitz_matrix(parse("(x^2 + xi^2)/2", 1), opt.N, {});
                print_oracle_line("toeplitz-diag", oracle, T.entries(on, on));
            } else if (osub == o_heat) {
                double oracle = oracle::heat_of_x2(ox);
                SymbolExpr g = heat_transform_polynomial(parse("x^2", 1), kCalibratedHeatTime);
                double fast = g.evaluate(PhasePoint{ox, 0.0}).real();
                print_oracle_line("heat-x2", oracle, fast);
            } else if (osub == o_coh) {
                PhasePoint z = parse_point(oz), w = parse_point(ow);
                double oracle = oracle::coherent_overlap(z, w);
                Eigen::VectorXcd a = coherent_state(z, opt.N), b = coherent_state(w, opt.N);
                double fast = std::abs(a.dot(b));
                print_oracle_line("coherent-overlap", oracle, fast);
            }
            return kExitOk;
        }
        return kExitOk;
    } catch (const SyntaxError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const DimensionMismatch& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

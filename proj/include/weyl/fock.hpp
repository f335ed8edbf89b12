#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "weyl/expr.hpp"
#include "weyl/sampled.hpp"

namespace weyl {

enum class Method : unsigned {
    Monomial = 1,
    KernelQuadrature = 2,
    Exponential = 3,
    Commutator = 4,
    Toeplitz = 5,
    ToeplitzSymbol = 6,
};

std::string to_string(Method m);

/// Grid parameters for the kernel-quadrature quantization path.
struct QuadratureConfig {
    double box_x = 0.0;    // 0 = auto: max(8, 2*sqrt(2N))
    double box_xi = 0.0;   // 0 = auto, same rule
    int xi_grid = 1024;    // points per xi axis; power of two, >= 64
    int gh_order = 0;      // Gauss-Hermite order for matrix elements; 0 = auto: 2N
    double taper_fraction = 0.75;  // xi fraction left untouched by the edge taper
    bool verify_grid = false;      // recompute at doubled xi grid, compare
    double grid_tol = 1e-6;
    double cost_guard_gflops = 60.0;
    int workers = 0;

    static QuadratureConfig defaults(int N);
    void validate() const;
    double resolved_box_x(int N) const;
    double resolved_box_xi(int N) const;
    int resolved_gh_order(int N, int d = 1) const;
};

/// Complex square matrix on the truncated Hermite/Fock basis. Side is
/// N^d * k; row index = rank(n_1..n_d) * k + coefficient index, where the
/// rank is lexicographic in the Fock multi-index (n_d fastest).
struct FockMatrix {
    Eigen::MatrixXcd entries;
    int N = 0;
    int d = 1;
    int k = 1;
    Method method = Method::Monomial;
    std::optional<QuadratureConfig> quadrature;

    Eigen::Index side() const { return entries.rows(); }
    void check_shape() const;
    double hermiticity_deviation() const;  // max entrywise |A - A^dagger|
};

/// Position and momentum matrices Q_1..Q_d, P_1..P_d on the truncated basis.
struct LadderMatrices {
    std::vector<FockMatrix> Q;
    std::vector<FockMatrix> P;
};

LadderMatrices ladder_matrices(int N, int d);

/// Single-mode Q and P (N x N), the tensor factors of the above.
Eigen::MatrixXcd position_matrix(int N);
Eigen::MatrixXcd momentum_matrix(int N);

/// Weyl (fully symmetrized) quantization of the monomial x^a xi^b, a and b
/// multi-exponents of length d. Exact in the truncated basis apart from the
/// top |a|+|b| Fock levels.
FockMatrix quantize_monomial(const std::vector<int>& a, const std::vector<int>& b, int N, int d);

/// Monomial-calculus quantization of a polynomial symbol.
FockMatrix quantize_polynomial(const SymbolExpr& f, int N);

/// Kernel-quadrature quantization: the symbol is expanded over discrete
/// Fourier modes in xi on [-R_xi, R_xi) (the discretized partial Fourier
/// transform of the Schwartz kernel); each mode contributes a shifted-basis
/// overlap integral evaluated by Gauss-Hermite quadrature.
FockMatrix quantize_kernel(const SymbolExpr& f, int N, const QuadratureConfig& cfg);
FockMatrix quantize_kernel(const MatrixSymbol& f, int N, const QuadratureConfig& cfg);
FockMatrix quantize_kernel(const SampledSymbol& f, int N, const QuadratureConfig& cfg);

/// W_z = exp(i (x . P - xi . Q)) for z = (x, xi); exactly unitary up to
/// round-off since the generator is hermitian.
FockMatrix weyl_operator(const PhasePoint& z, int N, int d, double max_displacement = 10.0);

/// Largest singular value. For matrices born from truncation this is a lower
/// bound for the norm of the underlying quadratic form.
double operator_norm(const FockMatrix& m);
double operator_norm(const Eigen::MatrixXcd& m);

FockMatrix quantize(const SymbolExpr& f, int N, Method method, const QuadratureConfig& cfg);
FockMatrix quantize(const MatrixSymbol& f, int N, Method method, const QuadratureConfig& cfg);
/// Monomial calculus for polynomial symbols, kernel quadrature otherwise.
FockMatrix quantize_auto(const SymbolExpr& f, int N, const QuadratureConfig& cfg);
FockMatrix quantize_auto(const MatrixSymbol& f, int N, const QuadratureConfig& cfg);

/// Projection onto the trusted block: basis vectors whose Fock multi-index
/// lies in the cube {n_i < M for every mode}, coefficient indices kept.
Eigen::MatrixXcd project_block(const FockMatrix& m, int M);
Eigen::MatrixXcd project_block(const Eigen::MatrixXcd& entries, int N, int d, int k, int M);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace weyl

#pragma once

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "weyl/errors.hpp"

namespace weyl {

using Complex = std::complex<double>;

/// Point z = (x_1..x_d, xi_1..xi_d) in phase space R^{2d}.
struct PhasePoint {
    std::vector<double> coords;

    PhasePoint() = default;
    explicit PhasePoint(std::vector<double> c) : coords(std::move(c)) {}
    PhasePoint(std::initializer_list<double> c) : coords(c) {}

    int dof() const;  // d; throws DimensionMismatch on odd/empty length
    double norm() const;
    PhasePoint operator-() const;
    PhasePoint operator+(const PhasePoint& o) const;

    /// a * e_j in R^{2d}, j in [0, 2d).
    static PhasePoint axis(int j, double a, int d);
    static PhasePoint zero(int d);
};

/// Multi-index gamma in N_0^{2d}; order() = |gamma|.
struct MultiIndex {
    std::vector<int> entries;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> e) : entries(std::move(e)) {}
    MultiIndex(std::initializer_list<int> e) : entries(e) {}

    int order() const;
    int dof() const;  // d
    static MultiIndex unit(int j, int d);
};

enum class NodeKind {
    Constant,
    Variable,  // index: 0..d-1 = x_1..x_d, d..2d-1 = xi_1..xi_d
    Add,
    Sub,
    Mul,
    Div,
    Pow,  // integer exponent
    Neg,
    Sin,
    Cos,
    Exp,
    Sinh,
    Cosh,
    Tanh,
};

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    NodeKind kind;
    Complex value{0.0, 0.0};  // Constant
    int var = -1;             // Variable
    int exponent = 0;         // Pow
    NodePtr a, b;
};

/// Immutable closed-form phase-space symbol over x_1..x_d, xi_1..xi_d.
///
/// The node set is closed under differentiation, so derivative trees stay
/// in the same representation. Trees are shared; copies are cheap.
class SymbolExpr {
public:
    SymbolExpr() = default;
    SymbolExpr(NodePtr root, int d) : root_(std::move(root)), d_(d) {}

    static SymbolExpr constant(Complex c, int d);
    static SymbolExpr variable(int index, int d);
    /// x_j (j in [0,d))
    static SymbolExpr x(int j, int d);
    /// xi_j (j in [0,d))
    static SymbolExpr xi(int j, int d);

    bool valid() const { return root_ != nullptr; }
    int dof() const { return d_; }
    const NodePtr& root() const { return root_; }

    Complex evaluate(const PhasePoint& z) const;
    SymbolExpr differentiate(const MultiIndex& gamma) const;
    SymbolExpr derivative(int var) const;  // single first-order derivative
    /// g with g(w) = f(w + z).
    SymbolExpr shift(const PhasePoint& z) const;
    std::string to_string() const;

    bool is_polynomial() const;
    /// Expansion into monomials: exponent vector (length 2d) -> coefficient.
    /// Throws MethodMismatch if the tree is not polynomial.
    std::map<std::vector<int>, Complex> monomials() const;
    int polynomial_degree() const;  // total degree; throws if not polynomial

    bool is_zero_constant() const;

    SymbolExpr operator+(const SymbolExpr& o) const;
    SymbolExpr operator-(const SymbolExpr& o) const;
    SymbolExpr operator*(const SymbolExpr& o) const;
    SymbolExpr operator-() const;
    SymbolExpr pow(int k) const;

private:
    NodePtr root_;
    int d_ = 0;
};

/// k x k grid of scalar symbols sharing one d (operator-valued symbol with a
/// finite-dimensional coefficient space).
class MatrixSymbol {
public:
    MatrixSymbol() = default;
    MatrixSymbol(std::vector<SymbolExpr> entries, int k, int d);

    int k() const { return k_; }
    int dof() const { return d_; }
    const SymbolExpr& at(int i, int j) const;

    Eigen::MatrixXcd evaluate(const PhasePoint& z) const;
    MatrixSymbol differentiate(const MultiIndex& gamma) const;
    MatrixSymbol shift(const PhasePoint& z) const;
    std::string to_string() const;
    bool is_polynomial() const;

private:
    std::vector<SymbolExpr> entries_;  // row-major
    int k_ = 0;
    int d_ = 0;
};

/// Parses the scalar symbol grammar. Variables: "x", "xi" for d = 1 (the
/// indexed spellings "x1", "xi1" are also accepted), "x1".."xd" / "xi1".."xid"
/// for d > 1. Numbers may carry an "i" suffix for imaginary constants.
SymbolExpr parse(const std::string& text, int d);

/// Parses "[[e,e],[e,e]]" nesting into a square MatrixSymbol.
MatrixSymbol parse_matrix(const std::string& text, int d);

/// True if the text looks like a matrix symbol (leading '[').
bool looks_like_matrix(const std::string& text);

}  // namespace weyl

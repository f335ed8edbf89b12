#include "weyl/expr.hpp"

#include <cmath>
#include <sstream>

namespace weyl {

namespace {

bool is_const(const NodePtr& n, Complex c) {
    return n->kind == NodeKind::Constant && n->value == c;
}

bool is_any_const(const NodePtr& n) { return n->kind == NodeKind::Constant; }

NodePtr make_const(Complex c) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Constant;
    n->value = c;
    return n;
}

NodePtr make_var(int index) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Variable;
    n->var = index;
    return n;
}

NodePtr make_binary(NodeKind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_neg(NodePtr a);

// Smart constructors: constant folding plus zero/one pruning only, so that
// derivative trees stay predictable.
NodePtr make_add(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (is_any_const(a) && is_any_const(b)) return make_const(a->value + b->value);
    if (is_any_const(a) && b->kind == NodeKind::Add && is_any_const(b->b))
        return make_add(b->a, make_const(a->value + b->b->value));
    if (is_any_const(b) && a->kind == NodeKind::Add && is_any_const(a->b))
        return make_add(a->a, make_const(a->b->value + b->value));
    if (is_any_const(a)) return make_binary(NodeKind::Add, b, a);  // constants last
    return make_binary(NodeKind::Add, std::move(a), std::move(b));
}

NodePtr make_sub(NodePtr a, NodePtr b) {
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return make_neg(b);
    if (is_any_const(a) && is_any_const(b)) return make_const(a->value - b->value);
    return make_binary(NodeKind::Sub, std::move(a), std::move(b));
}

NodePtr make_mul(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (is_any_const(a) && is_any_const(b)) return make_const(a->value * b->value);
    if (is_any_const(b)) return make_mul(b, a);  // constants first
    if (is_any_const(a) && b->kind == NodeKind::Mul && is_any_const(b->a))
        return make_mul(make_const(a->value * b->a->value), b->b);
    if (is_any_const(a) && b->kind == NodeKind::Neg)
        return make_mul(make_const(-a->value), b->a);
    return make_binary(NodeKind::Mul, std::move(a), std::move(b));
}

NodePtr make_div(NodePtr a, NodePtr b) {
    if (is_const(b, 1.0)) return a;
    if (is_const(a, 0.0)) return make_const(0.0);
    if (is_any_const(a) && is_any_const(b) && b->value != Complex(0.0))
        return make_const(a->value / b->value);
    return make_binary(NodeKind::Div, std::move(a), std::move(b));
}

NodePtr make_pow(NodePtr a, int k) {
    if (k == 0) return make_const(1.0);
    if (k == 1) return a;
    if (is_any_const(a)) return make_const(std::pow(a->value, k));
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Pow;
    n->exponent = k;
    n->a = std::move(a);
    return n;
}

NodePtr make_neg(NodePtr a) {
    if (is_any_const(a)) return make_const(-a->value);
    if (a->kind == NodeKind::Neg) return a->a;
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Neg;
    n->a = std::move(a);
    return n;
}

NodePtr make_fun(NodeKind k, NodePtr a) {
    if (is_any_const(a)) {
        Complex c = a->value;
        switch (k) {
            case NodeKind::Sin: return make_const(std::sin(c));
            case NodeKind::Cos: return make_const(std::cos(c));
            case NodeKind::Exp: return make_const(std::exp(c));
            case NodeKind::Sinh: return make_const(std::sinh(c));
            case NodeKind::Cosh: return make_const(std::cosh(c));
            case NodeKind::Tanh: return make_const(std::tanh(c));
            default: break;
        }
    }
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    return n;
}

Complex eval_node(const ExprNode& n, const std::vector<double>& z) {
    switch (n.kind) {
        case NodeKind::Constant: return n.value;
        case NodeKind::Variable: return Complex(z[static_cast<size_t>(n.var)]);
        case NodeKind::Add: return eval_node(*n.a, z) + eval_node(*n.b, z);
        case NodeKind::Sub: return eval_node(*n.a, z) - eval_node(*n.b, z);
        case NodeKind::Mul: return eval_node(*n.a, z) * eval_node(*n.b, z);
        case NodeKind::Div: {
            Complex den = eval_node(*n.b, z);
            if (den == Complex(0.0)) {
                std::ostringstream os;
                os << "(";
                for (size_t i = 0; i < z.size(); ++i) os << (i ? ", " : "") << z[i];
                os << ")";
                throw DivisionByZero(os.str());
            }
            return eval_node(*n.a, z) / den;
        }
        case NodeKind::Pow: {
            Complex base = eval_node(*n.a, z);
            int k = n.exponent;
            if (k < 0) {
                if (base == Complex(0.0)) {
                    std::ostringstream os;
                    os << "(";
                    for (size_t i = 0; i < z.size(); ++i) os << (i ? ", " : "") << z[i];
                    os << ")";
                    throw DivisionByZero(os.str());
                }
                base = Complex(1.0) / base;
                k = -k;
            }
            // binary exponentiation keeps integer powers exact-ish
            Complex r(1.0);
            while (k > 0) {
                if (k & 1) r *= base;
                base *= base;
                k >>= 1;
            }
            return r;
        }
        case NodeKind::Neg: return -eval_node(*n.a, z);
        case NodeKind::Sin: return std::sin(eval_node(*n.a, z));
        case NodeKind::Cos: return std::cos(eval_node(*n.a, z));
        case NodeKind::Exp: return std::exp(eval_node(*n.a, z));
        case NodeKind::Sinh: return std::sinh(eval_node(*n.a, z));
        case NodeKind::Cosh: return std::cosh(eval_node(*n.a, z));
        case NodeKind::Tanh: return std::tanh(eval_node(*n.a, z));
    }
    throw std::logic_error("unreachable node kind");
}

NodePtr diff_node(const NodePtr& n, int v) {
    switch (n->kind) {
        case NodeKind::Constant: return make_const(0.0);
        case NodeKind::Variable: return make_const(n->var == v ? 1.0 : 0.0);
        case NodeKind::Add: return make_add(diff_node(n->a, v), diff_node(n->b, v));
        case NodeKind::Sub: return make_sub(diff_node(n->a, v), diff_node(n->b, v));
        case NodeKind::Mul:
            return make_add(make_mul(diff_node(n->a, v), n->b),
                            make_mul(n->a, diff_node(n->b, v)));
        case NodeKind::Div:
            // (a/b)' = a'/b - a b'/b^2
            return make_sub(make_div(diff_node(n->a, v), n->b),
                            make_div(make_mul(n->a, diff_node(n->b, v)),
                                     make_pow(n->b, 2)));
        case NodeKind::Pow:
            return make_mul(make_mul(make_const(static_cast<double>(n->exponent)),
                                     make_pow(n->a, n->exponent - 1)),
                            diff_node(n->a, v));
        case NodeKind::Neg: return make_neg(diff_node(n->a, v));
        case NodeKind::Sin:
            return make_mul(make_fun(NodeKind::Cos, n->a), diff_node(n->a, v));
        case NodeKind::Cos:
            return make_neg(make_mul(make_fun(NodeKind::Sin, n->a), diff_node(n->a, v)));
        case NodeKind::Exp:
            return make_mul(make_fun(NodeKind::Exp, n->a), diff_node(n->a, v));
        case NodeKind::Sinh:
            return make_mul(make_fun(NodeKind::Cosh, n->a), diff_node(n->a, v));
        case NodeKind::Cosh:
            return make_mul(make_fun(NodeKind::Sinh, n->a), diff_node(n->a, v));
        case NodeKind::Tanh:
            // tanh' = 1 - tanh^2
            return make_mul(make_sub(make_const(1.0), make_pow(make_fun(NodeKind::Tanh, n->a), 2)),
                            diff_node(n->a, v));
    }
    throw std::logic_error("unreachable node kind");
}

NodePtr shift_node(const NodePtr& n, const std::vector<double>& z) {
    switch (n->kind) {
        case NodeKind::Constant: return n;
        case NodeKind::Variable: {
            double off = z[static_cast<size_t>(n->var)];
            if (off == 0.0) return n;
            return make_add(make_var(n->var), make_const(off));
        }
        case NodeKind::Add: return make_add(shift_node(n->a, z), shift_node(n->b, z));
        case NodeKind::Sub: return make_sub(shift_node(n->a, z), shift_node(n->b, z));
        case NodeKind::Mul: return make_mul(shift_node(n->a, z), shift_node(n->b, z));
        case NodeKind::Div: return make_div(shift_node(n->a, z), shift_node(n->b, z));
        case NodeKind::Pow: return make_pow(shift_node(n->a, z), n->exponent);
        case NodeKind::Neg: return make_neg(shift_node(n->a, z));
        default: return make_fun(n->kind, shift_node(n->a, z));
    }
}

const char* fun_name(NodeKind k) {
    switch (k) {
        case NodeKind::Sin: return "sin";
        case NodeKind::Cos: return "cos";
        case NodeKind::Exp: return "exp";
        case NodeKind::Sinh: return "sinh";
        case NodeKind::Cosh: return "cosh";
        case NodeKind::Tanh: return "tanh";
        default: return "?";
    }
}

std::string format_real(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string format_const(Complex c) {
    if (c.imag() == 0.0) return format_real(c.real());
    if (c.real() == 0.0) return format_real(c.imag()) + "i";
    std::ostringstream os;
    os << "(" << format_real(c.real());
    if (c.imag() >= 0.0) os << "+";
    os << format_real(c.imag()) << "i)";
    return os.str();
}

std::string var_name(int index, int d) {
    bool is_xi = index >= d;
    int mode = is_xi ? index - d : index;
    std::string base = is_xi ? "xi" : "x";
    if (d == 1) return base;
    return base + std::to_string(mode + 1);
}

// precedence: Add/Sub 1, Mul/Div 2, Neg 2, Pow 3, atoms 4
int precedence(const ExprNode& n) {
    switch (n.kind) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div:
        case NodeKind::Neg: return 2;
        case NodeKind::Pow: return 3;
        default: return 4;
    }
}

std::string print_node(const ExprNode& n, int d, int parent_prec) {
    std::string s;
    int prec = precedence(n);
    switch (n.kind) {
        case NodeKind::Constant: {
            s = format_const(n.value);
            if ((n.value.imag() == 0.0 && n.value.real() < 0.0) && parent_prec > 1)
                s = "(" + s + ")";
            return s;
        }
        case NodeKind::Variable: return var_name(n.var, d);
        case NodeKind::Add:
            s = print_node(*n.a, d, 1) + " + " + print_node(*n.b, d, 1);
            break;
        case NodeKind::Sub:
            s = print_node(*n.a, d, 1) + " - " + print_node(*n.b, d, 2);
            break;
        case NodeKind::Mul:
            s = print_node(*n.a, d, 2) + "*" + print_node(*n.b, d, 3);
            break;
        case NodeKind::Div:
            s = print_node(*n.a, d, 2) + "/" + print_node(*n.b, d, 3);
            break;
        case NodeKind::Pow:
            s = print_node(*n.a, d, 4) + "^" + std::to_string(n.exponent);
            break;
        case NodeKind::Neg:
            s = "-" + print_node(*n.a, d, 3);
            break;
        default:
            return std::string(fun_name(n.kind)) + "(" + print_node(*n.a, d, 0) + ")";
    }
    if (prec < parent_prec) s = "(" + s + ")";
    return s;
}

bool poly_node(const ExprNode& n) {
    switch (n.kind) {
        case NodeKind::Constant:
        case NodeKind::Variable: return true;
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul: return poly_node(*n.a) && poly_node(*n.b);
        case NodeKind::Div: return poly_node(*n.a) && n.b->kind == NodeKind::Constant;
        case NodeKind::Pow: return n.exponent >= 0 && poly_node(*n.a);
        case NodeKind::Neg: return poly_node(*n.a);
        default: return false;
    }
}

using MonoMap = std::map<std::vector<int>, Complex>;

MonoMap mono_const(Complex c, int nvars) {
    MonoMap m;
    if (c != Complex(0.0)) m[std::vector<int>(static_cast<size_t>(nvars), 0)] = c;
    return m;
}

MonoMap mono_add(const MonoMap& a, const MonoMap& b, Complex sb) {
    MonoMap r = a;
    for (const auto& [e, c] : b) {
        auto it = r.find(e);
        if (it == r.end())
            r[e] = sb * c;
        else {
            it->second += sb * c;
            if (it->second == Complex(0.0)) r.erase(it);
        }
    }
    return r;
}

MonoMap mono_mul(const MonoMap& a, const MonoMap& b) {
    MonoMap r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            std::vector<int> e = ea;
            for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
            auto it = r.find(e);
            if (it == r.end())
                r[e] = ca * cb;
            else {
                it->second += ca * cb;
                if (it->second == Complex(0.0)) r.erase(it);
            }
        }
    return r;
}

MonoMap mono_expand(const ExprNode& n, int nvars) {
    switch (n.kind) {
        case NodeKind::Constant: return mono_const(n.value, nvars);
        case NodeKind::Variable: {
            MonoMap m;
            std::vector<int> e(static_cast<size_t>(nvars), 0);
            e[static_cast<size_t>(n.var)] = 1;
            m[e] = Complex(1.0);
            return m;
        }
        case NodeKind::Add:
            return mono_add(mono_expand(*n.a, nvars), mono_expand(*n.b, nvars), Complex(1.0));
        case NodeKind::Sub:
            return mono_add(mono_expand(*n.a, nvars), mono_expand(*n.b, nvars), Complex(-1.0));
        case NodeKind::Mul:
            return mono_mul(mono_expand(*n.a, nvars), mono_expand(*n.b, nvars));
        case NodeKind::Div: {
            if (n.b->kind != NodeKind::Constant || n.b->value == Complex(0.0))
                throw MethodMismatch("symbol is not a polynomial (symbol-dependent division)");
            MonoMap m = mono_expand(*n.a, nvars);
            for (auto& [e, c] : m) c /= n.b->value;
            return m;
        }
        case NodeKind::Pow: {
            if (n.exponent < 0)
                throw MethodMismatch("symbol is not a polynomial (negative power)");
            MonoMap base = mono_expand(*n.a, nvars);
            MonoMap r = mono_const(Complex(1.0), nvars);
            for (int i = 0; i < n.exponent; ++i) r = mono_mul(r, base);
            return r;
        }
        case NodeKind::Neg: {
            MonoMap m = mono_expand(*n.a, nvars);
            for (auto& [e, c] : m) c = -c;
            return m;
        }
        default:
            throw MethodMismatch("symbol is not a polynomial (transcendental node)");
    }
}

}  // namespace

int PhasePoint::dof() const {
    if (coords.empty() || coords.size() % 2 != 0)
        throw DimensionMismatch("phase point must have 2d coordinates, got " +
                                std::to_string(coords.size()));
    return static_cast<int>(coords.size() / 2);
}

double PhasePoint::norm() const {
    double s = 0.0;
    for (double c : coords) s += c * c;
    return std::sqrt(s);
}

PhasePoint PhasePoint::operator-() const {
    PhasePoint r = *this;
    for (double& c : r.coords) c = -c;
    return r;
}

PhasePoint PhasePoint::operator+(const PhasePoint& o) const {
    if (coords.size() != o.coords.size())
        throw DimensionMismatch("phase point length mismatch");
    PhasePoint r = *this;
    for (size_t i = 0; i < coords.size(); ++i) r.coords[i] += o.coords[i];
    return r;
}

PhasePoint PhasePoint::axis(int j, double a, int d) {
    PhasePoint z = zero(d);
    z.coords[static_cast<size_t>(j)] = a;
    return z;
}

PhasePoint PhasePoint::zero(int d) {
    return PhasePoint(std::vector<double>(static_cast<size_t>(2 * d), 0.0));
}

int MultiIndex::order() const {
    int s = 0;
    for (int e : entries) {
        if (e < 0) throw DimensionMismatch("multi-index entries must be non-negative");
        s += e;
    }
    return s;
}

int MultiIndex::dof() const {
    if (entries.empty() || entries.size() % 2 != 0)
        throw DimensionMismatch("multi-index must have 2d entries");
    return static_cast<int>(entries.size() / 2);
}

MultiIndex MultiIndex::unit(int j, int d) {
    MultiIndex g(std::vector<int>(static_cast<size_t>(2 * d), 0));
    g.entries[static_cast<size_t>(j)] = 1;
    return g;
}

SymbolExpr SymbolExpr::constant(Complex c, int d) { return SymbolExpr(make_const(c), d); }

SymbolExpr SymbolExpr::variable(int index, int d) {
    if (index < 0 || index >= 2 * d)
        throw DimensionMismatch("variable index " + std::to_string(index) +
                                " out of range for d=" + std::to_string(d));
    return SymbolExpr(make_var(index), d);
}

SymbolExpr SymbolExpr::x(int j, int d) { return variable(j, d); }
SymbolExpr SymbolExpr::xi(int j, int d) { return variable(d + j, d); }

Complex SymbolExpr::evaluate(const PhasePoint& z) const {
    if (z.dof() != d_)
        throw DimensionMismatch("phase point has d=" + std::to_string(z.dof()) +
                                ", symbol has d=" + std::to_string(d_));
    Complex v = eval_node(*root_, z.coords);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NonFinite("symbol evaluation produced a non-finite value");
    return v;
}

SymbolExpr SymbolExpr::derivative(int var) const {
    return SymbolExpr(diff_node(root_, var), d_);
}

SymbolExpr SymbolExpr::differentiate(const MultiIndex& gamma) const {
    if (gamma.dof() != d_)
        throw DimensionMismatch("multi-index has d=" + std::to_string(gamma.dof()) +
                                ", symbol has d=" + std::to_string(d_));
    NodePtr r = root_;
    for (int v = 0; v < 2 * d_; ++v)
        for (int rep = 0; rep < gamma.entries[static_cast<size_t>(v)]; ++rep)
            r = diff_node(r, v);
    return SymbolExpr(r, d_);
}

SymbolExpr SymbolExpr::shift(const PhasePoint& z) const {
    if (z.dof() != d_) throw DimensionMismatch("shift point dimension mismatch");
    return SymbolExpr(shift_node(root_, z.coords), d_);
}

std::string SymbolExpr::to_string() const { return print_node(*root_, d_, 0); }

bool SymbolExpr::is_polynomial() const { return poly_node(*root_); }

std::map<std::vector<int>, Complex> SymbolExpr::monomials() const {
    return mono_expand(*root_, 2 * d_);
}

int SymbolExpr::polynomial_degree() const {
    int deg = 0;
    for (const auto& [e, c] : monomials()) {
        int s = 0;
        for (int v : e) s += v;
        deg = std::max(deg, s);
    }
    return deg;
}

bool SymbolExpr::is_zero_constant() const {
    return root_->kind == NodeKind::Constant && root_->value == Complex(0.0);
}

SymbolExpr SymbolExpr::operator+(const SymbolExpr& o) const {
    if (d_ != o.d_) throw DimensionMismatch("operand dimension mismatch");
    return SymbolExpr(make_add(root_, o.root_), d_);
}

SymbolExpr SymbolExpr::operator-(const SymbolExpr& o) const {
    if (d_ != o.d_) throw DimensionMismatch("operand dimension mismatch");
    return SymbolExpr(make_sub(root_, o.root_), d_);
}

SymbolExpr SymbolExpr::operator*(const SymbolExpr& o) const {
    if (d_ != o.d_) throw DimensionMismatch("operand dimension mismatch");
    return SymbolExpr(make_mul(root_, o.root_), d_);
}

SymbolExpr SymbolExpr::operator-() const { return SymbolExpr(make_neg(root_), d_); }

SymbolExpr SymbolExpr::pow(int k) const { return SymbolExpr(make_pow(root_, k), d_); }

MatrixSymbol::MatrixSymbol(std::vector<SymbolExpr> entries, int k, int d)
    : entries_(std::move(entries)), k_(k), d_(d) {
    if (k_ <= 0 || entries_.size() != static_cast<size_t>(k_) * static_cast<size_t>(k_))
        throw DimensionMismatch("matrix symbol must be square k x k");
    for (const auto& e : entries_)
        if (e.dof() != d_) throw DimensionMismatch("matrix symbol entries must share one d");
}

const SymbolExpr& MatrixSymbol::at(int i, int j) const {
    return entries_[static_cast<size_t>(i) * static_cast<size_t>(k_) + static_cast<size_t>(j)];
}

Eigen::MatrixXcd MatrixSymbol::evaluate(const PhasePoint& z) const {
    Eigen::MatrixXcd m(k_, k_);
    for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j) m(i, j) = at(i, j).evaluate(z);
    return m;
}

MatrixSymbol MatrixSymbol::differentiate(const MultiIndex& gamma) const {
    std::vector<SymbolExpr> e;
    e.reserve(entries_.size());
    for (const auto& s : entries_) e.push_back(s.differentiate(gamma));
    return MatrixSymbol(std::move(e), k_, d_);
}

MatrixSymbol MatrixSymbol::shift(const PhasePoint& z) const {
    std::vector<SymbolExpr> e;
    e.reserve(entries_.size());
    for (const auto& s : entries_) e.push_back(s.shift(z));
    return MatrixSymbol(std::move(e), k_, d_);
}

std::string MatrixSymbol::to_string() const {
    std::string s = "[";
    for (int i = 0; i < k_; ++i) {
        s += "[";
        for (int j = 0; j < k_; ++j) {
            s += at(i, j).to_string();
            if (j + 1 < k_) s += ", ";
        }
        s += "]";
        if (i + 1 < k_) s += ", ";
    }
    return s + "]";
}

bool MatrixSymbol::is_polynomial() const {
    for (const auto& e : entries_)
        if (!e.is_polynomial()) return false;
    return true;
}

}  // namespace weyl

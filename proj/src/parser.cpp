#include <cctype>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "weyl/expr.hpp"

namespace weyl {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, LBracket, RBracket, Comma, End };

struct Token {
    Tok kind;
    std::string text;
    Complex value;  // Number
    size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        size_t start = pos_;
        if (pos_ >= s_.size()) return {Tok::End, "", 0.0, start};
        char c = s_[pos_];
        switch (c) {
            case '+': ++pos_; return {Tok::Plus, "+", 0.0, start};
            case '-': ++pos_; return {Tok::Minus, "-", 0.0, start};
            case '*': ++pos_; return {Tok::Star, "*", 0.0, start};
            case '/': ++pos_; return {Tok::Slash, "/", 0.0, start};
            case '^': ++pos_; return {Tok::Caret, "^", 0.0, start};
            case '(': ++pos_; return {Tok::LParen, "(", 0.0, start};
            case ')': ++pos_; return {Tok::RParen, ")", 0.0, start};
            case '[': ++pos_; return {Tok::LBracket, "[", 0.0, start};
            case ']': ++pos_; return {Tok::RBracket, "]", 0.0, start};
            case ',': ++pos_; return {Tok::Comma, ",", 0.0, start};
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t p = pos_;
            while (p < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[p])) || s_[p] == '_'))
                ++p;
            std::string name = s_.substr(pos_, p - pos_);
            pos_ = p;
            return {Tok::Ident, name, 0.0, start};
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", start);
    }

private:
    Token lex_number(size_t start) {
        size_t p = pos_;
        bool any_digit = false;
        while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
            ++p;
            any_digit = true;
        }
        if (p < s_.size() && s_[p] == '.') {
            ++p;
            while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
                ++p;
                any_digit = true;
            }
        }
        if (!any_digit) throw SyntaxError("malformed number", start);
        // scientific suffix; careful not to eat an identifier like "exp"
        if (p < s_.size() && (s_[p] == 'e' || s_[p] == 'E')) {
            size_t q = p + 1;
            if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
            size_t digits = q;
            while (digits < s_.size() && std::isdigit(static_cast<unsigned char>(s_[digits]))) ++digits;
            if (digits > q) p = digits;
        }
        double mag = std::strtod(s_.substr(pos_, p - pos_).c_str(), nullptr);
        bool imag = false;
        if (p < s_.size() && s_[p] == 'i' &&
            (p + 1 >= s_.size() || !(std::isalnum(static_cast<unsigned char>(s_[p + 1])) || s_[p + 1] == '_'))) {
            imag = true;
            ++p;
        }
        pos_ = p;
        Complex v = imag ? Complex(0.0, mag) : Complex(mag, 0.0);
        return {Tok::Number, s_.substr(start, p - start), v, start};
    }

    const std::string& s_;
    size_t pos_ = 0;
};

class Parser {
public:
    Parser(const std::string& text, int d) : lex_(text), d_(d) {
        if (d < 1) throw DimensionMismatch("d must be a positive integer");
        advance();
    }

    SymbolExpr parse_expression_to_end() {
        SymbolExpr e = parse_expr();
        expect(Tok::End, "trailing input after expression");
        return e;
    }

    MatrixSymbol parse_matrix_to_end() {
        expect(Tok::LBracket, "matrix symbol must start with '['");
        std::vector<std::vector<SymbolExpr>> rows;
        rows.push_back(parse_row());
        while (cur_.kind == Tok::Comma) {
            advance();
            rows.push_back(parse_row());
        }
        expect(Tok::RBracket, "expected ']' closing the matrix");
        expect(Tok::End, "trailing input after matrix");
        size_t k = rows.size();
        std::vector<SymbolExpr> flat;
        for (const auto& r : rows) {
            if (r.size() != k)
                throw DimensionMismatch("matrix symbol must be square: found row of length " +
                                        std::to_string(r.size()) + " in a " + std::to_string(k) +
                                        "-row matrix");
            for (const auto& e : r) flat.push_back(e);
        }
        return MatrixSymbol(std::move(flat), static_cast<int>(k), d_);
    }

private:
    std::vector<SymbolExpr> parse_row() {
        expect(Tok::LBracket, "expected '[' opening a matrix row");
        std::vector<SymbolExpr> row;
        row.push_back(parse_expr());
        while (cur_.kind == Tok::Comma) {
            advance();
            row.push_back(parse_expr());
        }
        expect(Tok::RBracket, "expected ']' closing a matrix row");
        return row;
    }

    void advance() { cur_ = lex_.next(); }

    void expect(Tok k, const std::string& msg) {
        if (cur_.kind != k) throw SyntaxError(msg, cur_.pos);
        advance();
    }

    // expr := term (('+'|'-') term)*
    SymbolExpr parse_expr() {
        SymbolExpr e = parse_term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            bool plus = cur_.kind == Tok::Plus;
            advance();
            SymbolExpr rhs = parse_term();
            e = plus ? e + rhs : e - rhs;
        }
        return e;
    }

    // term := factor (('*'|'/') factor)*
    SymbolExpr parse_term() {
        SymbolExpr e = parse_factor();
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
            bool mul = cur_.kind == Tok::Star;
            advance();
            SymbolExpr rhs = parse_factor();
            if (mul)
                e = e * rhs;
            else
                e = SymbolExpr(make_div_node(e, rhs), d_);
        }
        return e;
    }

    // factor := atom ('^' integer)? | '-' factor
    SymbolExpr parse_factor() {
        if (cur_.kind == Tok::Minus) {
            advance();
            return -parse_factor();
        }
        SymbolExpr a = parse_atom();
        if (cur_.kind == Tok::Caret) {
            advance();
            a = a.pow(parse_int_exponent());
        }
        return a;
    }

    int parse_int_exponent() {
        bool neg = false;
        if (cur_.kind == Tok::Minus) {
            neg = true;
            advance();
        }
        if (cur_.kind != Tok::Number) throw SyntaxError("expected integer exponent after '^'", cur_.pos);
        if (cur_.value.imag() != 0.0)
            throw SyntaxError("exponent must be a real integer", cur_.pos);
        double v = cur_.value.real();
        if (v != static_cast<double>(static_cast<long long>(v)))
            throw SyntaxError("exponent must be an integer", cur_.pos);
        advance();
        long long k = static_cast<long long>(v);
        if (k > 64 || -k > 64) throw SyntaxError("exponent magnitude exceeds 64", cur_.pos);
        return static_cast<int>(neg ? -k : k);
    }

    // atom := number | ident | func '(' expr ')' | '(' expr ')'
    SymbolExpr parse_atom() {
        switch (cur_.kind) {
            case Tok::Number: {
                SymbolExpr e = SymbolExpr::constant(cur_.value, d_);
                advance();
                return e;
            }
            case Tok::LParen: {
                advance();
                SymbolExpr e = parse_expr();
                expect(Tok::RParen, "expected ')'");
                return e;
            }
            case Tok::Ident: return parse_ident();
            default:
                throw SyntaxError("expected number, identifier, or '('", cur_.pos);
        }
    }

    SymbolExpr parse_ident() {
        std::string name = cur_.text;
        size_t pos = cur_.pos;
        advance();
        NodeKind fun;
        if (is_function(name, fun)) {
            if (cur_.kind != Tok::LParen)
                throw SyntaxError("function '" + name + "' must be followed by '('", cur_.pos);
            advance();
            SymbolExpr arg = parse_expr();
            expect(Tok::RParen, "expected ')' closing function argument");
            return SymbolExpr(make_fun_node(fun, arg), d_);
        }
        return resolve_variable(name, pos);
    }

    static bool is_function(const std::string& name, NodeKind& kind) {
        if (name == "sin") kind = NodeKind::Sin;
        else if (name == "cos") kind = NodeKind::Cos;
        else if (name == "exp") kind = NodeKind::Exp;
        else if (name == "sinh") kind = NodeKind::Sinh;
        else if (name == "cosh") kind = NodeKind::Cosh;
        else if (name == "tanh") kind = NodeKind::Tanh;
        else return false;
        return true;
    }

    SymbolExpr resolve_variable(const std::string& name, size_t pos) {
        std::string base;
        std::string digits;
        if (name.rfind("xi", 0) == 0) {
            base = "xi";
            digits = name.substr(2);
        } else if (name.rfind("x", 0) == 0) {
            base = "x";
            digits = name.substr(1);
        } else {
            throw UnknownIdentifier(name, pos);
        }
        for (char c : digits)
            if (!std::isdigit(static_cast<unsigned char>(c))) throw UnknownIdentifier(name, pos);
        int mode;
        if (digits.empty()) {
            if (d_ != 1)
                throw DimensionMismatch("'" + name + "' is ambiguous for d=" + std::to_string(d_) +
                                        "; use " + base + "1.." + base + std::to_string(d_));
            mode = 1;
        } else {
            mode = std::atoi(digits.c_str());
            if (mode < 1 || mode > d_)
                throw DimensionMismatch("variable '" + name + "' is out of range for d=" +
                                        std::to_string(d_));
        }
        int index = (base == "x") ? mode - 1 : d_ + mode - 1;
        return SymbolExpr::variable(index, d_);
    }

    // thin shims: operator overloads cover +,-,*, but not / and named functions
    static NodePtr make_div_node(const SymbolExpr& a, const SymbolExpr& b);
    static NodePtr make_fun_node(NodeKind k, const SymbolExpr& a);

    Lexer lex_;
    Token cur_{Tok::End, "", 0.0, 0};
    int d_;
};

}  // namespace

// The smart constructors live in expr.cpp's anonymous namespace; rebuild the
// two we need here from public pieces. Division: a * b^-1 would change the
// printed form, so construct the node directly.
namespace {

NodePtr raw_binary(NodeKind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr raw_unary(NodeKind k, NodePtr a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    return n;
}

}  // namespace

NodePtr Parser::make_div_node(const SymbolExpr& a, const SymbolExpr& b) {
    // fold constant/constant so parsed rationals behave like literals
    if (a.root()->kind == NodeKind::Constant && b.root()->kind == NodeKind::Constant &&
        b.root()->value != Complex(0.0)) {
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Constant;
        n->value = a.root()->value / b.root()->value;
        return n;
    }
    return raw_binary(NodeKind::Div, a.root(), b.root());
}

NodePtr Parser::make_fun_node(NodeKind k, const SymbolExpr& a) {
    if (a.root()->kind == NodeKind::Constant) {
        Complex c = a.root()->value;
        Complex v;
        switch (k) {
            case NodeKind::Sin: v = std::sin(c); break;
            case NodeKind::Cos: v = std::cos(c); break;
            case NodeKind::Exp: v = std::exp(c); break;
            case NodeKind::Sinh: v = std::sinh(c); break;
            case NodeKind::Cosh: v = std::cosh(c); break;
            case NodeKind::Tanh: v = std::tanh(c); break;
            default: v = c; break;
        }
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Constant;
        n->value = v;
        return n;
    }
    return raw_unary(k, a.root());
}

SymbolExpr parse(const std::string& text, int d) {
    Parser p(text, d);
    return p.parse_expression_to_end();
}

MatrixSymbol parse_matrix(const std::string& text, int d) {
    Parser p(text, d);
    return p.parse_matrix_to_end();
}

bool looks_like_matrix(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '[';
    }
    return false;
}

}  // namespace weyl

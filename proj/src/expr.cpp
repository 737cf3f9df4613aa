#include "poissonlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>

namespace poissonlab {

ExprPtr Expr::constant(double c) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Const;
    e->cval = c;
    return e;
}
ExprPtr Expr::coordinate(int k) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Coord;
    e->coord = k;
    return e;
}
ExprPtr Expr::unary(UnOp op, ExprPtr x) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Unary;
    e->uop = op;
    e->a = std::move(x);
    return e;
}
ExprPtr Expr::binary(BinOp op, ExprPtr x, ExprPtr y) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Binary;
    e->bop = op;
    e->a = std::move(x);
    e->b = std::move(y);
    return e;
}
ExprPtr Expr::power(ExprPtr base, double exponent) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Binary;
    e->bop = (exponent == std::floor(exponent) && std::fabs(exponent) < 1e9) ? BinOp::PowInt
                                                                             : BinOp::PowReal;
    e->cval = exponent;
    e->a = std::move(base);
    return e;
}

namespace {

struct Token {
    enum class Type { Number, Ident, Op, LParen, RParen, Comma, End } type;
    std::string text;
    double num = 0.0;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        std::size_t start = i_;
        if (i_ >= s_.size()) return {Token::Type::End, "", 0.0, start};
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + i_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) throw SyntaxError(start, "malformed number");
            i_ += static_cast<std::size_t>(end - begin);
            return {Token::Type::Number, s_.substr(start, i_ - start), v, start};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
                ++j;
            Token t{Token::Type::Ident, s_.substr(i_, j - i_), 0.0, start};
            i_ = j;
            return t;
        }
        switch (c) {
            case '(': ++i_; return {Token::Type::LParen, "(", 0.0, start};
            case ')': ++i_; return {Token::Type::RParen, ")", 0.0, start};
            case ',': ++i_; return {Token::Type::Comma, ",", 0.0, start};
            case '+': case '-': case '/': case '^':
                ++i_;
                return {Token::Type::Op, std::string(1, c), 0.0, start};
            case '*':
                ++i_;
                if (i_ < s_.size() && s_[i_] == '*') { ++i_; return {Token::Type::Op, "^", 0.0, start}; }
                return {Token::Type::Op, "*", 0.0, start};
            default:
                throw SyntaxError(start, std::string("unexpected character '") + c + "'");
        }
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;
};

std::optional<UnOp> function_op(const std::string& name) {
    if (name == "sin") return UnOp::Sin;
    if (name == "cos") return UnOp::Cos;
    if (name == "exp") return UnOp::Exp;
    if (name == "log") return UnOp::Log;
    if (name == "sqrt") return UnOp::Sqrt;
    if (name == "abs") return UnOp::Abs;
    return std::nullopt;
}

// Constant folding used for '^' exponents; returns nullopt when the subtree
// references a coordinate.
std::optional<double> fold(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Const: return e.cval;
        case Expr::Kind::Coord: return std::nullopt;
        case Expr::Kind::Unary: {
            auto u = fold(*e.a);
            if (!u) return std::nullopt;
            switch (e.uop) {
                case UnOp::Neg: return -*u;
                case UnOp::Sin: return std::sin(*u);
                case UnOp::Cos: return std::cos(*u);
                case UnOp::Exp: return std::exp(*u);
                case UnOp::Log: return log(*u);
                case UnOp::Sqrt: return sqrt(*u);
                case UnOp::Abs: return std::fabs(*u);
            }
            return std::nullopt;
        }
        case Expr::Kind::Binary: {
            auto u = fold(*e.a);
            if (!u) return std::nullopt;
            if (e.bop == BinOp::PowInt) return powi(*u, static_cast<long long>(e.cval));
            if (e.bop == BinOp::PowReal) return pow_real(*u, e.cval);
            auto v = fold(*e.b);
            if (!v) return std::nullopt;
            switch (e.bop) {
                case BinOp::Add: return *u + *v;
                case BinOp::Sub: return *u - *v;
                case BinOp::Mul: return *u * *v;
                case BinOp::Div:
                    if (*v == 0.0) throw DomainError("division by zero in constant expression");
                    return *u / *v;
                default: return std::nullopt;
            }
        }
    }
    return std::nullopt;
}

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& coords)
        : lex_(text), coords_(coords) {
        advance();
    }

    ExprPtr parse() {
        ExprPtr e = sum();
        if (cur_.type != Token::Type::End)
            throw SyntaxError(cur_.pos, "unexpected trailing input '" + cur_.text + "'");
        return e;
    }

private:
    Lexer lex_;
    Token cur_;
    const std::vector<std::string>& coords_;

    void advance() { cur_ = lex_.next(); }

    bool is_op(const char* s) const { return cur_.type == Token::Type::Op && cur_.text == s; }

    ExprPtr sum() {
        ExprPtr e = term();
        while (is_op("+") || is_op("-")) {
            BinOp op = is_op("+") ? BinOp::Add : BinOp::Sub;
            advance();
            e = Expr::binary(op, e, term());
        }
        return e;
    }

    ExprPtr term() {
        ExprPtr e = factor();
        while (is_op("*") || is_op("/")) {
            BinOp op = is_op("*") ? BinOp::Mul : BinOp::Div;
            advance();
            e = Expr::binary(op, e, factor());
        }
        return e;
    }

    ExprPtr factor() {
        if (is_op("-")) {
            advance();
            ExprPtr e = factor();
            if (e->kind == Expr::Kind::Const) return Expr::constant(-e->cval);
            return Expr::unary(UnOp::Neg, e);
        }
        if (is_op("+")) {
            advance();
            return factor();
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        if (is_op("^")) {
            std::size_t pos = cur_.pos;
            advance();
            // right-associative; the whole exponent must fold to a constant
            ExprPtr e = factor_for_exponent();
            auto c = fold(*e);
            if (!c) throw SyntaxError(pos, "exponent must be a constant expression");
            return Expr::power(base, *c);
        }
        return base;
    }

    ExprPtr factor_for_exponent() {
        if (is_op("-")) {
            advance();
            return Expr::unary(UnOp::Neg, factor_for_exponent());
        }
        ExprPtr base = atom();
        if (is_op("^")) {
            advance();
            ExprPtr e = factor_for_exponent();
            auto c = fold(*e);
            if (!c) throw SyntaxError(cur_.pos, "exponent must be a constant expression");
            return Expr::power(base, *c);
        }
        return base;
    }

    ExprPtr atom() {
        switch (cur_.type) {
            case Token::Type::Number: {
                double v = cur_.num;
                advance();
                return Expr::constant(v);
            }
            case Token::Type::Ident: {
                std::string name = cur_.text;
                std::size_t pos = cur_.pos;
                advance();
                if (cur_.type == Token::Type::LParen) {
                    auto op = function_op(name);
                    if (!op) throw UnknownSymbol(name, pos);
                    advance();
                    ExprPtr arg = sum();
                    if (cur_.type == Token::Type::Comma)
                        throw SyntaxError(cur_.pos, name + " takes exactly one argument");
                    if (cur_.type != Token::Type::RParen)
                        throw SyntaxError(cur_.pos, "expected ')'");
                    advance();
                    return Expr::unary(*op, arg);
                }
                for (std::size_t k = 0; k < coords_.size(); ++k)
                    if (coords_[k] == name) return Expr::coordinate(static_cast<int>(k));
                if (name == "pi") return Expr::constant(M_PI);
                throw UnknownSymbol(name, pos);
            }
            case Token::Type::LParen: {
                advance();
                ExprPtr e = sum();
                if (cur_.type != Token::Type::RParen)
                    throw SyntaxError(cur_.pos, "expected ')'");
                advance();
                return e;
            }
            default:
                throw SyntaxError(cur_.pos, "expected a value, got '" + cur_.text + "'");
        }
    }
};

const char* function_name(UnOp op) {
    switch (op) {
        case UnOp::Neg: return "-";
        case UnOp::Sin: return "sin";
        case UnOp::Cos: return "cos";
        case UnOp::Exp: return "exp";
        case UnOp::Log: return "log";
        case UnOp::Sqrt: return "sqrt";
        case UnOp::Abs: return "abs";
    }
    return "?";
}

int precedence(const Expr& e) {
    if (e.kind == Expr::Kind::Binary) {
        switch (e.bop) {
            case BinOp::Add: case BinOp::Sub: return 1;
            case BinOp::Mul: case BinOp::Div: return 2;
            case BinOp::PowInt: case BinOp::PowReal: return 4;
        }
    }
    if (e.kind == Expr::Kind::Unary && e.uop == UnOp::Neg) return 3;
    return 5;
}

std::string number_to_string(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void print_rec(const Expr& e, std::ostream& os, const std::vector<std::string>* names);

void print_child(const Expr& child, int parent_prec, bool tight, std::ostream& os,
                 const std::vector<std::string>* names) {
    bool parens = precedence(child) < parent_prec || (tight && precedence(child) == parent_prec);
    if (parens) os << '(';
    print_rec(child, os, names);
    if (parens) os << ')';
}

void print_rec(const Expr& e, std::ostream& os, const std::vector<std::string>* names) {
    switch (e.kind) {
        case Expr::Kind::Const: {
            if (e.cval < 0) {
                os << '(' << number_to_string(e.cval) << ')';
            } else {
                os << number_to_string(e.cval);
            }
            return;
        }
        case Expr::Kind::Coord:
            if (names) os << (*names)[static_cast<std::size_t>(e.coord)];
            else os << "x" << (e.coord + 1);
            return;
        case Expr::Kind::Unary:
            if (e.uop == UnOp::Neg) {
                os << '-';
                print_child(*e.a, 3, true, os, names);
            } else {
                os << function_name(e.uop) << '(';
                print_rec(*e.a, os, names);
                os << ')';
            }
            return;
        case Expr::Kind::Binary: {
            if (e.bop == BinOp::PowInt || e.bop == BinOp::PowReal) {
                print_child(*e.a, 5, false, os, names);
                os << '^';
                if (e.cval < 0) os << '(' << number_to_string(e.cval) << ')';
                else os << number_to_string(e.cval);
                return;
            }
            const char* op = e.bop == BinOp::Add ? "+" : e.bop == BinOp::Sub ? "-"
                           : e.bop == BinOp::Mul ? "*" : "/";
            int prec = precedence(e);
            print_child(*e.a, prec, false, os, names);
            os << op;
            print_child(*e.b, prec, e.bop == BinOp::Sub || e.bop == BinOp::Div, os, names);
            return;
        }
    }
}

}  // namespace

ExprPtr parse_expr(const std::string& text, const std::vector<std::string>& coords) {
    bool blank = true;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
    if (blank) throw SyntaxError(0, "empty expression");
    return Parser(text, coords).parse();
}

std::string print_expr(const Expr& e, const std::vector<std::string>* names) {
    std::ostringstream os;
    print_rec(e, os, names);
    return os.str();
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::Const: return a.cval == b.cval;
        case Expr::Kind::Coord: return a.coord == b.coord;
        case Expr::Kind::Unary: return a.uop == b.uop && expr_equal(*a.a, *b.a);
        case Expr::Kind::Binary:
            if (a.bop != b.bop || a.cval != b.cval) return false;
            if (!expr_equal(*a.a, *b.a)) return false;
            if (a.bop == BinOp::PowInt || a.bop == BinOp::PowReal) return true;
            return expr_equal(*a.b, *b.b);
    }
    return false;
}

double eval_value(const Expr& e, std::span<const double> p) {
    return eval_expr<double>(e, p);
}

Jet eval_jet(const Expr& e, std::span<const double> p) {
    std::vector<Jet> x;
    x.reserve(p.size());
    for (std::size_t k = 0; k < p.size(); ++k)
        x.push_back(Jet::coordinate(p[k], p.size(), k));
    return eval_expr<Jet>(e, std::span<const Jet>(x));
}

Jet2 eval_jet2(const Expr& e, std::span<const double> p) {
    const std::size_t n = p.size();
    std::vector<Jet2> x;
    x.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        x.push_back(Jet2::coordinate(Jet::coordinate(p[k], n, k), n, k));
    return eval_expr<Jet2>(e, std::span<const Jet2>(x));
}

}  // namespace poissonlab

namespace poissonlab {

ExprPtr e_const(double c) { return Expr::constant(c); }

bool e_is_const(const ExprPtr& e, double c) {
    return e && e->kind == Expr::Kind::Const && e->cval == c;
}

ExprPtr e_add(ExprPtr a, ExprPtr b) {
    if (e_is_const(a, 0.0)) return b;
    if (e_is_const(b, 0.0)) return a;
    if (a->kind == Expr::Kind::Const && b->kind == Expr::Kind::Const)
        return Expr::constant(a->cval + b->cval);
    return Expr::binary(BinOp::Add, std::move(a), std::move(b));
}

ExprPtr e_sub(ExprPtr a, ExprPtr b) {
    if (e_is_const(b, 0.0)) return a;
    if (a->kind == Expr::Kind::Const && b->kind == Expr::Kind::Const)
        return Expr::constant(a->cval - b->cval);
    if (e_is_const(a, 0.0)) return e_neg(std::move(b));
    return Expr::binary(BinOp::Sub, std::move(a), std::move(b));
}

ExprPtr e_mul(ExprPtr a, ExprPtr b) {
    if (e_is_const(a, 0.0) || e_is_const(b, 0.0)) return Expr::constant(0.0);
    if (e_is_const(a, 1.0)) return b;
    if (e_is_const(b, 1.0)) return a;
    if (a->kind == Expr::Kind::Const && b->kind == Expr::Kind::Const)
        return Expr::constant(a->cval * b->cval);
    return Expr::binary(BinOp::Mul, std::move(a), std::move(b));
}

ExprPtr e_div(ExprPtr a, ExprPtr b) {
    if (e_is_const(a, 0.0)) return a;
    if (e_is_const(b, 1.0)) return a;
    return Expr::binary(BinOp::Div, std::move(a), std::move(b));
}

ExprPtr e_neg(ExprPtr a) {
    if (a->kind == Expr::Kind::Const) return Expr::constant(-a->cval);
    if (a->kind == Expr::Kind::Unary && a->uop == UnOp::Neg) return a->a;
    return Expr::unary(UnOp::Neg, std::move(a));
}

ExprPtr expr_det(const std::vector<std::vector<ExprPtr>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    ExprPtr acc = Expr::constant(0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (e_is_const(m[0][j], 0.0)) continue;
        std::vector<std::vector<ExprPtr>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<ExprPtr> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        ExprPtr term = e_mul(m[0][j], expr_det(minor));
        acc = (j % 2 == 0) ? e_add(acc, term) : e_sub(acc, term);
    }
    return acc;
}

std::vector<std::vector<ExprPtr>> expr_inverse(const std::vector<std::vector<ExprPtr>>& m) {
    const std::size_t n = m.size();
    ExprPtr det = expr_det(m);
    if (e_is_const(det, 0.0)) throw DomainError("symbolic matrix is singular");
    std::vector<std::vector<ExprPtr>> inv(n, std::vector<ExprPtr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::vector<ExprPtr>> minor;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == i) continue;
                std::vector<ExprPtr> row;
                for (std::size_t c = 0; c < n; ++c)
                    if (c != j) row.push_back(m[r][c]);
                minor.push_back(std::move(row));
            }
            ExprPtr cof = n == 1 ? Expr::constant(1.0) : expr_det(minor);
            if ((i + j) % 2 == 1) cof = e_neg(cof);
            inv[j][i] = e_div(cof, det);  // adjugate transpose
        }
    return inv;
}

}  // namespace poissonlab

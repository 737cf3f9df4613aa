#pragma once
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "poissonlab/jet.hpp"

namespace poissonlab {

enum class UnOp { Neg, Sin, Cos, Exp, Log, Sqrt, Abs };
enum class BinOp { Add, Sub, Mul, Div, PowInt, PowReal };

// Parsed scalar expression over the coordinates of a chart.  Immutable; the
// same tree can be evaluated concurrently over plain or jet scalars.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Const, Coord, Unary, Binary } kind;
    double cval = 0.0;       // Const, and the folded exponent of PowInt/PowReal
    int coord = -1;          // Coord
    UnOp uop = UnOp::Neg;    // Unary
    BinOp bop = BinOp::Add;  // Binary
    ExprPtr a, b;

    static ExprPtr constant(double c);
    static ExprPtr coordinate(int k);
    static ExprPtr unary(UnOp op, ExprPtr x);
    static ExprPtr binary(BinOp op, ExprPtr x, ExprPtr y);
    static ExprPtr power(ExprPtr base, double exponent);
};

// Grammar: infix with standard precedence, '^' (or '**') right-associative
// with a constant exponent, implicit multiplication disallowed.
ExprPtr parse_expr(const std::string& text, const std::vector<std::string>& coords);

// Canonical printer; parse(print(e)) reproduces an equivalent tree.  With
// names, coordinates print under their chart names.
std::string print_expr(const Expr& e, const std::vector<std::string>* names = nullptr);

bool expr_equal(const Expr& a, const Expr& b);

// Simplifying builders (fold zeros/ones) used when assembling derived
// structures such as the cosymplectic lift.
ExprPtr e_const(double c);
ExprPtr e_add(ExprPtr a, ExprPtr b);
ExprPtr e_sub(ExprPtr a, ExprPtr b);
ExprPtr e_mul(ExprPtr a, ExprPtr b);
ExprPtr e_div(ExprPtr a, ExprPtr b);
ExprPtr e_neg(ExprPtr a);
bool e_is_const(const ExprPtr& e, double c);

// Determinant of a small Expr matrix by cofactor expansion.
ExprPtr expr_det(const std::vector<std::vector<ExprPtr>>& m);
// Inverse via adjugate/determinant; entries simplified where possible.
std::vector<std::vector<ExprPtr>> expr_inverse(const std::vector<std::vector<ExprPtr>>& m);

template <class S>
S eval_expr(const Expr& e, std::span<const S> x) {
    switch (e.kind) {
        case Expr::Kind::Const:
            return x[0] * 0.0 + e.cval;
        case Expr::Kind::Coord:
            return x[static_cast<std::size_t>(e.coord)];
        case Expr::Kind::Unary: {
            S u = eval_expr(*e.a, x);
            switch (e.uop) {
                case UnOp::Neg: return -u;
                case UnOp::Sin: return sin(u);
                case UnOp::Cos: return cos(u);
                case UnOp::Exp: return exp(u);
                case UnOp::Log: return log(u);
                case UnOp::Sqrt: return sqrt(u);
                case UnOp::Abs: return abs(u);
            }
            break;
        }
        case Expr::Kind::Binary: {
            S u = eval_expr(*e.a, x);
            if (e.bop == BinOp::PowInt) return powi(u, static_cast<long long>(e.cval));
            if (e.bop == BinOp::PowReal) return pow_real(u, e.cval);
            S v = eval_expr(*e.b, x);
            switch (e.bop) {
                case BinOp::Add: return u + v;
                case BinOp::Sub: return u - v;
                case BinOp::Mul: return u * v;
                case BinOp::Div: return u / v;
                default: break;
            }
            break;
        }
    }
    throw Error("corrupt expression tree");
}

double eval_value(const Expr& e, std::span<const double> p);

// Evaluate with the coordinates seeded as jet variables: exact value and
// exact first partial derivatives at p.
Jet eval_jet(const Expr& e, std::span<const double> p);

// Same, over a base of jets (exact second derivatives of the expression).
Jet2 eval_jet2(const Expr& e, std::span<const double> p);

}  // namespace poissonlab

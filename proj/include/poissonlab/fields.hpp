#pragma once
#include <functional>

#include "poissonlab/structure.hpp"

namespace poissonlab {

// Covector/vector fields evaluable to first order at a point.  Components of
// constructed fields (frames, projected bases) come out of the same jet
// machinery as expression-backed ones.
struct JetCoField {
    int n = 0;
    std::function<std::vector<Jet>(const Point&)> eval;

    static JetCoField from_exprs(const Structure& S, const std::vector<ExprPtr>& comps);
    static JetCoField constant(const Point& ref, const std::vector<double>& comps);
    static JetCoField coordinate(const Structure& S, int k);  // dx^k
};

struct JetVecField {
    int n = 0;
    std::function<std::vector<Jet>(const Point&)> eval;

    static JetVecField from_exprs(const Structure& S, const std::vector<ExprPtr>& comps);
    static JetVecField constant(const Point& ref, const std::vector<double>& comps);
};

// (pi# a)^j = a_i pi^{ij}(p)
std::vector<double> sharp_pi(const Structure& S, const Point& p, const std::vector<double>& alpha);

// X_f = pi#(df)
std::vector<double> hamiltonian_field(const Structure& S, const Expr& f, const Point& p);
JetVecField hamiltonian_field_field(const Structure& S, ExprPtr f);

// max_{i<j<k} |pi^{il} d_l pi^{jk} + pi^{jl} d_l pi^{ki} + pi^{kl} d_l pi^{ij}|
double jacobiator(const Structure& S, const Point& p);

// [a, b]_pi = L_{pi#a} b - L_{pi#b} a - d(pi(a,b))
std::vector<double> koszul_bracket(const Structure& S, const JetCoField& alpha,
                                   const JetCoField& beta, const Point& p);

// (L_X pi)^{ij} = X^l d_l pi^{ij} - pi^{lj} d_l X^i - pi^{il} d_l X^j
Mat lie_derivative_pi(const Structure& S, const JetVecField& X, const Point& p);

// (L_X b)_i = X^l d_l b_i + b_l d_i X^l, evaluated at p.
std::vector<double> lie_derivative_covector(const JetVecField& X, const JetCoField& beta,
                                            const Point& p);

// Lie derivative of a covariant 2-tensor field T given by a jet-valued matrix
// functor: (L_X T)_{ij} = X^l d_l T_{ij} + T_{lj} d_i X^l + T_{il} d_j X^l.
Mat lie_derivative_cov2(const JetVecField& X,
                        const std::function<DMat<Jet>(const Point&)>& T, const Point& p);

struct DivPiResult {
    std::vector<double> div;       // coordinate-form divergence, (div pi)(f) = div X_f
    std::vector<double> frame_sum; // splitting-frame sum, sign-fixed to the same convention
    double discrepancy;            // max component difference between the two
};

DivPiResult div_pi(const Structure& S, const Point& p);

}  // namespace poissonlab

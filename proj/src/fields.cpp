#include "poissonlab/fields.hpp"

#include "poissonlab/connections.hpp"

namespace poissonlab {

JetCoField JetCoField::from_exprs(const Structure& S, const std::vector<ExprPtr>& comps) {
    JetCoField f;
    f.n = S.n;
    f.eval = [&S, comps](const Point& p) {
        auto x = S.jet_coords(p);
        std::vector<Jet> out;
        out.reserve(comps.size());
        for (const auto& e : comps)
            out.push_back(e ? eval_expr<Jet>(*e, std::span<const Jet>(x))
                            : Jet::constant(0.0, p.size()));
        return out;
    };
    return f;
}

JetCoField JetCoField::constant(const Point& ref, const std::vector<double>& comps) {
    JetCoField f;
    f.n = static_cast<int>(ref.size());
    f.eval = [comps](const Point& p) {
        std::vector<Jet> out;
        out.reserve(comps.size());
        for (double c : comps) out.push_back(Jet::constant(c, p.size()));
        return out;
    };
    return f;
}

JetCoField JetCoField::coordinate(const Structure& S, int k) {
    std::vector<double> comps(static_cast<std::size_t>(S.n), 0.0);
    comps[static_cast<std::size_t>(k)] = 1.0;
    Point ref(static_cast<std::size_t>(S.n), 0.0);
    return constant(ref, comps);
}

JetVecField JetVecField::from_exprs(const Structure& S, const std::vector<ExprPtr>& comps) {
    JetVecField f;
    f.n = S.n;
    f.eval = [&S, comps](const Point& p) {
        auto x = S.jet_coords(p);
        std::vector<Jet> out;
        out.reserve(comps.size());
        for (const auto& e : comps)
            out.push_back(e ? eval_expr<Jet>(*e, std::span<const Jet>(x))
                            : Jet::constant(0.0, p.size()));
        return out;
    };
    return f;
}

JetVecField JetVecField::constant(const Point& ref, const std::vector<double>& comps) {
    JetVecField f;
    f.n = static_cast<int>(ref.size());
    f.eval = [comps](const Point& p) {
        std::vector<Jet> out;
        out.reserve(comps.size());
        for (double c : comps) out.push_back(Jet::constant(c, p.size()));
        return out;
    };
    return f;
}

std::vector<double> sharp_pi(const Structure& S, const Point& p, const std::vector<double>& alpha) {
    Mat Pi = S.pi_value(p);
    std::vector<double> v(static_cast<std::size_t>(S.n), 0.0);
    for (int j = 0; j < S.n; ++j)
        for (int i = 0; i < S.n; ++i)
            v[static_cast<std::size_t>(j)] += alpha[static_cast<std::size_t>(i)] * Pi(i, j);
    return v;
}

std::vector<double> hamiltonian_field(const Structure& S, const Expr& f, const Point& p) {
    Jet jf = eval_jet(f, p);
    return sharp_pi(S, p, jf.partials());
}

JetVecField hamiltonian_field_field(const Structure& S, ExprPtr f) {
    JetVecField X;
    X.n = S.n;
    X.eval = [&S, f](const Point& p) {
        // X_f^j = d_i f * pi^{ij}, with one extra derivative order so L_X
        // computations can differentiate the field: evaluate f to second
        // order and pi to first order.
        Jet2 f2 = eval_jet2(*f, p);
        DMat<Jet> Pi = S.pi_jet(p);
        std::vector<Jet> out(static_cast<std::size_t>(S.n), Jet::constant(0.0, p.size()));
        for (int j = 0; j < S.n; ++j)
            for (int i = 0; i < S.n; ++i)
                out[static_cast<std::size_t>(j)] += f2.partials()[static_cast<std::size_t>(i)] * Pi(i, j);
        return out;
    };
    return X;
}

double jacobiator(const Structure& S, const Point& p) {
    DMat<Jet> Pi = S.pi_jet(p);
    double worst = 0.0;
    for (int i = 0; i < S.n; ++i)
        for (int j = i + 1; j < S.n; ++j)
            for (int k = j + 1; k < S.n; ++k) {
                double acc = 0.0;
                for (int l = 0; l < S.n; ++l) {
                    acc += value_of(Pi(i, l)) * Pi(j, k).partials()[static_cast<std::size_t>(l)];
                    acc += value_of(Pi(j, l)) * Pi(k, i).partials()[static_cast<std::size_t>(l)];
                    acc += value_of(Pi(k, l)) * Pi(i, j).partials()[static_cast<std::size_t>(l)];
                }
                worst = std::max(worst, std::fabs(acc));
            }
    return worst;
}

namespace {

// pi# of a jet covector over the jet bivector: X^j = a_i pi^{ij}
std::vector<Jet> sharp_jet(const DMat<Jet>& Pi, const std::vector<Jet>& alpha) {
    const int n = Pi.rows;
    std::vector<Jet> v(static_cast<std::size_t>(n), Pi.a[0] * 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(j)] += alpha[static_cast<std::size_t>(i)] * Pi(i, j);
    return v;
}

}  // namespace

std::vector<double> koszul_bracket(const Structure& S, const JetCoField& alpha,
                                   const JetCoField& beta, const Point& p) {
    const int n = S.n;
    DMat<Jet> Pi = S.pi_jet(p);
    std::vector<Jet> a = alpha.eval(p);
    std::vector<Jet> b = beta.eval(p);
    std::vector<Jet> X = sharp_jet(Pi, a);  // pi# alpha
    std::vector<Jet> Y = sharp_jet(Pi, b);  // pi# beta

    // pi(alpha, beta) = a_i pi^{ij} b_j
    Jet pab = Pi.a[0] * 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) pab += a[static_cast<std::size_t>(i)] * Pi(i, j) * b[static_cast<std::size_t>(j)];

    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double lxb = 0.0, lya = 0.0;
        for (int l = 0; l < n; ++l) {
            lxb += value_of(X[static_cast<std::size_t>(l)]) * b[static_cast<std::size_t>(i)].partials()[static_cast<std::size_t>(l)] +
                   value_of(b[static_cast<std::size_t>(l)]) * X[static_cast<std::size_t>(l)].partials()[static_cast<std::size_t>(i)];
            lya += value_of(Y[static_cast<std::size_t>(l)]) * a[static_cast<std::size_t>(i)].partials()[static_cast<std::size_t>(l)] +
                   value_of(a[static_cast<std::size_t>(l)]) * Y[static_cast<std::size_t>(l)].partials()[static_cast<std::size_t>(i)];
        }
        out[static_cast<std::size_t>(i)] = lxb - lya - pab.partials()[static_cast<std::size_t>(i)];
    }
    return out;
}

Mat lie_derivative_pi(const Structure& S, const JetVecField& X, const Point& p) {
    const int n = S.n;
    DMat<Jet> Pi = S.pi_jet(p);
    std::vector<Jet> x = X.eval(p);
    Mat L(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int l = 0; l < n; ++l) {
                acc += value_of(x[static_cast<std::size_t>(l)]) * Pi(i, j).partials()[static_cast<std::size_t>(l)];
                acc -= value_of(Pi(l, j)) * x[static_cast<std::size_t>(i)].partials()[static_cast<std::size_t>(l)];
                acc -= value_of(Pi(i, l)) * x[static_cast<std::size_t>(j)].partials()[static_cast<std::size_t>(l)];
            }
            L(i, j) = acc;
        }
    return L;
}

std::vector<double> lie_derivative_covector(const JetVecField& X, const JetCoField& beta,
                                            const Point& p) {
    const std::size_t n = p.size();
    std::vector<Jet> x = X.eval(p);
    std::vector<Jet> b = beta.eval(p);
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
            acc += value_of(x[l]) * b[i].partials()[l];
            acc += value_of(b[l]) * x[l].partials()[i];
        }
        out[i] = acc;
    }
    return out;
}

Mat lie_derivative_cov2(const JetVecField& X,
                        const std::function<DMat<Jet>(const Point&)>& T, const Point& p) {
    const int n = X.n;
    std::vector<Jet> x = X.eval(p);
    DMat<Jet> t = T(p);
    Mat L(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int l = 0; l < n; ++l) {
                acc += value_of(x[static_cast<std::size_t>(l)]) * t(i, j).partials()[static_cast<std::size_t>(l)];
                acc += value_of(t(l, j)) * x[static_cast<std::size_t>(l)].partials()[static_cast<std::size_t>(i)];
                acc += value_of(t(i, l)) * x[static_cast<std::size_t>(l)].partials()[static_cast<std::size_t>(j)];
            }
            L(i, j) = acc;
        }
    return L;
}

DivPiResult div_pi(const Structure& S, const Point& p) {
    const int n = S.n;
    DMat<Jet> Pi = S.pi_jet(p);
    DMat<Jet> G = S.cometric_jet(p);

    // coordinate form: (div pi)^j = (1/h) d_i (h pi^{ji}), h = |det g_cov|^{1/2}
    // = |det G|^{-1/2}; fixed so that (div pi)(f) = div X_f.
    Jet detG = determinant(G);
    Jet h = pow_real(abs(detG), -0.5);
    DivPiResult r;
    r.div.assign(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            Jet hp = h * Pi(j, i);
            acc += hp.partials()[static_cast<std::size_t>(i)];
        }
        r.div[static_cast<std::size_t>(j)] = acc / value_of(h);
    }

    // frame sum over a splitting-adapted pseudo-orthonormal coframe
    // {alpha_u}: sum_u eps_u <nabla^{alpha_u} dx^a, alpha_u>.  Under the
    // artifact's conventions this evaluates to -(div pi)(x^a); the sign is
    // fixed here so both methods report the same vector.
    Mat Gv = S.cometric_value(p);
    Splitting sp = kernel_splitting(S.pi_value(p), Gv);
    ContravariantSymbols gam = contravariant_christoffels(S, p);
    std::vector<std::vector<double>> frame = sp.kernel_basis;
    std::vector<double> signs = sp.kernel_signs;
    frame.insert(frame.end(), sp.complement_basis.begin(), sp.complement_basis.end());
    signs.insert(signs.end(), sp.complement_signs.begin(), sp.complement_signs.end());

    r.frame_sum.assign(static_cast<std::size_t>(n), 0.0);
    for (int a = 0; a < n; ++a) {
        double acc = 0.0;
        for (std::size_t u = 0; u < frame.size(); ++u) {
            // (nabla^{alpha} dx^a)_k = alpha_i Gamma^{ia}_k
            for (int k = 0; k < n; ++k) {
                double nk = 0.0;
                for (int i = 0; i < n; ++i)
                    nk += frame[u][static_cast<std::size_t>(i)] * gam.at(i, a, k);
                for (int l = 0; l < n; ++l)
                    acc += signs[u] * nk * Gv(k, l) * frame[u][static_cast<std::size_t>(l)];
            }
        }
        r.frame_sum[static_cast<std::size_t>(a)] = -acc;
    }

    r.discrepancy = 0.0;
    for (int a = 0; a < n; ++a)
        r.discrepancy = std::max(r.discrepancy,
                                 std::fabs(r.div[static_cast<std::size_t>(a)] -
                                           r.frame_sum[static_cast<std::size_t>(a)]));
    return r;
}

}  // namespace poissonlab

#include "poissonlab/connections.hpp"

#include "poissonlab/fields.hpp"

namespace poissonlab {

CovariantSymbols covariant_christoffels(const Structure& S, const Point& p) {
    const int n = S.n;
    DMat<Jet> G = S.cometric_jet(p);
    DMat<Jet> gcov = inverse_gj(G);  // g_{ij} with exact partials

    CovariantSymbols cs;
    cs.n = n;
    cs.g.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double acc = 0.0;
                for (int m = 0; m < n; ++m) {
                    double d_i = gcov(m, j).partials()[static_cast<std::size_t>(i)];
                    double d_j = gcov(i, m).partials()[static_cast<std::size_t>(j)];
                    double d_m = gcov(i, j).partials()[static_cast<std::size_t>(m)];
                    acc += 0.5 * value_of(G(k, m)) * (d_i + d_j - d_m);
                }
                cs.at(k, i, j) = acc;
                cs.at(k, j, i) = acc;
            }
    return cs;
}

ContravariantSymbols contravariant_christoffels(const Structure& S, const Point& p) {
    const int n = S.n;
    DMat<Jet> Pi = S.pi_jet(p);
    DMat<Jet> Gm = S.cometric_jet(p);
    DMat<Jet> gcov = inverse_gj(Gm);

    auto dPi = [&](int i, int j, int l) { return Pi(i, j).partials()[static_cast<std::size_t>(l)]; };
    auto dG = [&](int i, int j, int l) { return Gm(i, j).partials()[static_cast<std::size_t>(l)]; };

    ContravariantSymbols cs;
    cs.n = n;
    cs.g.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int m = 0; m < n; ++m) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k) {
                    double rijk = 0.0;
                    for (int l = 0; l < n; ++l) {
                        rijk += value_of(Pi(i, l)) * dG(j, k, l);
                        rijk += value_of(Pi(j, l)) * dG(i, k, l);
                        rijk -= value_of(Pi(k, l)) * dG(i, j, l);
                        rijk += value_of(Gm(l, k)) * dPi(i, j, l);
                        rijk -= value_of(Gm(l, j)) * dPi(i, k, l);
                        rijk -= value_of(Gm(l, i)) * dPi(j, k, l);
                    }
                    acc += 0.5 * value_of(gcov(m, k)) * rijk;
                }
                cs.at(i, j, m) = acc;
            }
    return cs;
}

Tensor3 nabla_pi(const Structure& S, const Point& p) {
    const int n = S.n;
    DMat<Jet> Pi = S.pi_jet(p);
    ContravariantSymbols gam = contravariant_christoffels(S, p);
    Tensor3 t;
    t.n = n;
    t.a.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l) {
                    acc += value_of(Pi(i, l)) * Pi(j, k).partials()[static_cast<std::size_t>(l)];
                    acc -= gam.at(i, j, l) * value_of(Pi(l, k));
                    acc -= gam.at(i, k, l) * value_of(Pi(j, l));
                }
                t.at(i, j, k) = acc;
            }
    return t;
}

DMat<Jet> canonical_J_jet(const Structure& S, const Point& p) {
    DMat<Jet> G = S.cometric_jet(p);
    DMat<Jet> gcov = inverse_gj(G);
    DMat<Jet> Pi = S.pi_jet(p);
    return matmul(gcov, Pi);  // J_i^l = g_{ij} pi^{jl}
}

namespace {

double f_structure_defect_value(const DMat<Jet>& J) {
    // |J^3 + J| on values
    const int n = J.rows;
    Mat Jv(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Jv(i, j) = value_of(J(i, j));
    Mat J2 = matmul(Jv, Jv);
    Mat J3 = matmul(J2, Jv);
    double r = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r = std::max(r, std::fabs(J3(i, j) + Jv(i, j)));
    return r;
}

}  // namespace

Tensor3 nabla_J(const Structure& S, const Point& p, bool use_canonical, double f_tol) {
    const int n = S.n;
    DMat<Jet> J = [&] {
        if (S.Jfield && !use_canonical) return S.J_jet(p);
        if (!use_canonical) throw MissingJ();
        DMat<Jet> cj = canonical_J_jet(S, p);
        double d = f_structure_defect_value(cj);
        if (d > f_tol) throw NotFStructure(d);
        return cj;
    }();
    DMat<Jet> Pi = S.pi_jet(p);
    ContravariantSymbols gam = contravariant_christoffels(S, p);
    Tensor3 t;
    t.n = n;
    t.a.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    // component (i, k, j): (nabla^{dx^i} J)(dx^j) coefficient of dx^k
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l) {
                    acc += value_of(Pi(i, l)) * J(k, j).partials()[static_cast<std::size_t>(l)];
                    acc += gam.at(i, l, k) * value_of(J(l, j));
                    acc -= gam.at(i, j, l) * value_of(J(k, l));
                }
                t.at(i, k, j) = acc;
            }
    return t;
}

Tensor3 nijenhuis(const Structure& S, const Point& p) {
    const int n = S.n;
    if (!S.Jfield) throw MissingJ();
    DMat<Jet> Jj = S.J_jet(p);
    Mat Jv(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Jv(i, j) = value_of(Jj(i, j));

    // field J dx^j: components (J dx^j)_k = J_k^j(x)
    auto Jcol = [&](int j) {
        JetCoField f;
        f.n = n;
        f.eval = [&S, j](const Point& q) {
            DMat<Jet> Jq = S.J_jet(q);
            std::vector<Jet> out;
            out.reserve(static_cast<std::size_t>(Jq.rows));
            for (int k = 0; k < Jq.rows; ++k) out.push_back(Jq(k, j));
            return out;
        };
        return f;
    };

    auto applyJ = [&](const std::vector<double>& alpha) {
        std::vector<double> out(static_cast<std::size_t>(n), 0.0);
        for (int k = 0; k < n; ++k)
            for (int m = 0; m < n; ++m)
                out[static_cast<std::size_t>(k)] += Jv(k, m) * alpha[static_cast<std::size_t>(m)];
        return out;
    };

    Tensor3 t;
    t.n = n;
    t.a.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    for (int i = 0; i < n; ++i) {
        JetCoField dxi = JetCoField::coordinate(S, i);
        JetCoField Jdxi = Jcol(i);
        for (int j = 0; j < n; ++j) {
            JetCoField dxj = JetCoField::coordinate(S, j);
            JetCoField Jdxj = Jcol(j);
            auto b1 = koszul_bracket(S, Jdxi, Jdxj, p);        // [J a, J b]
            auto b2 = koszul_bracket(S, dxi, dxj, p);          // [a, b]
            auto b3 = koszul_bracket(S, dxi, Jdxj, p);         // [a, J b]
            auto b4 = koszul_bracket(S, Jdxi, dxj, p);         // [J a, b]
            auto jjb2 = applyJ(applyJ(b2));
            std::vector<double> sum34(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k)
                sum34[static_cast<std::size_t>(k)] = b3[static_cast<std::size_t>(k)] + b4[static_cast<std::size_t>(k)];
            auto jsum = applyJ(sum34);
            for (int k = 0; k < n; ++k)
                t.at(i, j, k) = b1[static_cast<std::size_t>(k)] + jjb2[static_cast<std::size_t>(k)] - jsum[static_cast<std::size_t>(k)];
        }
    }
    return t;
}

Tensor3 nabla_omega(const Structure& S, const Point& p) {
    const int n = S.n;
    DMat<Jet> Pi = S.pi_jet(p);
    if (std::fabs(value_of(determinant(Pi))) < 1e-12) throw DegeneratePi();
    DMat<Jet> Om = inverse_gj(Pi);
    for (auto& x : Om.a) x = -x;  // omega = -pi^{-1}
    CovariantSymbols gam = covariant_christoffels(S, p);
    Tensor3 t;
    t.n = n;
    t.a.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double acc = Om(j, k).partials()[static_cast<std::size_t>(i)];
                for (int m = 0; m < n; ++m) {
                    acc -= gam.at(m, i, j) * value_of(Om(m, k));
                    acc -= gam.at(m, i, k) * value_of(Om(j, m));
                }
                t.at(i, j, k) = acc;
            }
    return t;
}

ConnectionAxiomDefects connection_axiom_defects(const Structure& S, const Point& p) {
    const int n = S.n;
    DMat<Jet> Pi = S.pi_jet(p);
    DMat<Jet> G = S.cometric_jet(p);
    ContravariantSymbols gam = contravariant_christoffels(S, p);

    double met = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                // pi#(dx^i)<dx^j,dx^k> = pi^{il} d_l g^{jk}
                double lhs = 0.0;
                for (int l = 0; l < n; ++l)
                    lhs += value_of(Pi(i, l)) * G(j, k).partials()[static_cast<std::size_t>(l)];
                double rhs = 0.0;
                for (int m = 0; m < n; ++m)
                    rhs += gam.at(i, j, m) * value_of(G(m, k)) + gam.at(i, k, m) * value_of(G(j, m));
                met = std::max(met, std::fabs(lhs - rhs));
            }

    double tor = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int m = 0; m < n; ++m) {
                // [dx^i, dx^j]_pi = d_m pi^{ij} dx^m
                double br = Pi(i, j).partials()[static_cast<std::size_t>(m)];
                tor = std::max(tor, std::fabs(gam.at(i, j, m) - gam.at(j, i, m) - br));
            }
    return {met, tor};
}

}  // namespace poissonlab

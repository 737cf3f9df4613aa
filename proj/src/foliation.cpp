#include "poissonlab/foliation.hpp"

#include <sstream>

namespace poissonlab {

namespace {

template <class S>
S inner_g(const DMat<S>& g, const std::vector<S>& u, const std::vector<S>& v) {
    S acc = g.a[0] * 0.0;
    for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < g.cols; ++j) acc += u[static_cast<std::size_t>(i)] * g(i, j) * v[static_cast<std::size_t>(j)];
    return acc;
}

// Build the adapted frame generically.  Kernel covectors come from the
// frozen-pivot null space of Pi, tangent vectors from greedy Gram-Schmidt on
// pi# of the coordinate coframe, with the generating covectors carried along.
template <class S>
FrameT<S> build_frame(const Structure& St, std::span<const S> x, int expected_rank,
                      double eps_rank, const std::vector<int>* forced_pivots) {
    const int n = St.n;
    FrameT<S> F;
    DMat<S> Pi = St.pi_at(x);
    DMat<S> G = St.cometric_at(x);
    DMat<S> gcov = inverse_gj(G);

    NullPlan plan = plan_null_space(Pi, eps_rank);
    int rank = static_cast<int>(plan.pivot_rows.size());
    if (rank != expected_rank) {
        Point pv;
        for (const S& c : x) pv.push_back(value_of(c));
        throw RankDrop(pv);
    }

    auto ginner = [&gcov](const std::vector<S>& u, const std::vector<S>& v) {
        return inner_g(gcov, u, v);
    };
    auto Ginner = [&G](const std::vector<S>& u, const std::vector<S>& v) {
        return inner_g(G, u, v);
    };

    // kernel covectors, G-orthonormalized
    F.kernel = null_space_with_plan(Pi, plan);
    if (!F.kernel.empty()) gram_schmidt(F.kernel, Ginner, &F.kernel_signs);

    // normal frame: sharp of the kernel covectors, g_cov-orthonormalized
    for (const auto& k : F.kernel) {
        std::vector<S> N(static_cast<std::size_t>(n), Pi.a[0] * 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) N[static_cast<std::size_t>(i)] += G(i, j) * k[static_cast<std::size_t>(j)];
        F.normal.push_back(std::move(N));
    }
    if (!F.normal.empty()) gram_schmidt(F.normal, ginner, &F.normal_signs);

    // tangent frame: greedy largest-residual column of pi# on the coframe
    std::vector<std::vector<S>> cand_vec;
    std::vector<std::vector<S>> cand_cov;
    for (int c = 0; c < n; ++c) {
        std::vector<S> v(static_cast<std::size_t>(n), Pi.a[0] * 0.0);
        for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = Pi(c, j);  // (pi# dx^c)^j
        cand_vec.push_back(std::move(v));
        std::vector<S> b(static_cast<std::size_t>(n), Pi.a[0] * 0.0);
        b[static_cast<std::size_t>(c)] = Pi.a[0] * 0.0 + 1.0;
        cand_cov.push_back(std::move(b));
    }
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (int step = 0; step < rank; ++step) {
        int pick = -1;
        if (forced_pivots) {
            pick = (*forced_pivots)[static_cast<std::size_t>(step)];
        } else {
            double best = -1.0;
            for (int c = 0; c < n; ++c) {
                if (used[static_cast<std::size_t>(c)]) continue;
                std::vector<S> w = cand_vec[static_cast<std::size_t>(c)];
                for (std::size_t k = 0; k < F.tangent.size(); ++k) {
                    S proj = ginner(w, F.tangent[k]) * F.tangent_signs[k];
                    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] -= proj * F.tangent[k][static_cast<std::size_t>(i)];
                }
                double r2 = std::fabs(value_of(ginner(w, w)));
                if (r2 > best) { best = r2; pick = c; }
            }
        }
        used[static_cast<std::size_t>(pick)] = true;
        F.pivot_sequence.push_back(pick);
        std::vector<S> w = cand_vec[static_cast<std::size_t>(pick)];
        std::vector<S> b = cand_cov[static_cast<std::size_t>(pick)];
        for (std::size_t k = 0; k < F.tangent.size(); ++k) {
            S proj = ginner(w, F.tangent[k]) * F.tangent_signs[k];
            for (int i = 0; i < n; ++i) {
                w[static_cast<std::size_t>(i)] -= proj * F.tangent[k][static_cast<std::size_t>(i)];
                b[static_cast<std::size_t>(i)] -= proj * F.beta[k][static_cast<std::size_t>(i)];
            }
        }
        S n2 = ginner(w, w);
        double n2v = value_of(n2);
        if (n2v == 0.0) throw SingularG("degenerate leaf direction");
        double sign = n2v > 0.0 ? 1.0 : -1.0;
        S norm = sqrt(n2 * sign);
        for (int i = 0; i < n; ++i) {
            w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / norm;
            b[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] / norm;
        }
        F.tangent.push_back(std::move(w));
        F.beta.push_back(std::move(b));
        F.tangent_signs.push_back(sign);
    }
    return F;
}

}  // namespace

LeafFrame leaf_frame(const Structure& S, const Point& p, double eps_rank,
                     const std::vector<int>* forced_pivots) {
    LeafFrame lf;
    lf.p = p;
    lf.rank = S.base_rank;
    lf.frame = build_frame<double>(S, std::span<const double>(p), S.base_rank, eps_rank,
                                   forced_pivots);
    return lf;
}

FrameT<Jet> leaf_frame_jets(const Structure& S, const Point& p, double eps_rank) {
    auto x = S.jet_coords(p);
    return build_frame<Jet>(S, std::span<const Jet>(x), S.base_rank, eps_rank, nullptr);
}

namespace {

// Solve pi# beta = X with beta in (Ker pi#)^perp; returns beta.
std::vector<double> leaf_preimage(const Structure& S, const Point& p,
                                  const std::vector<double>& X, double eps_rank,
                                  const std::vector<int>* forced_pivots) {
    const int n = S.n;
    LeafFrame lf = leaf_frame(S, p, eps_rank, forced_pivots);
    const auto& F = lf.frame;
    Mat G = S.cometric_value(p);
    Mat gcov = inverse_gj(G);

    // coefficients of X in the tangent frame, and the projection residual
    std::vector<double> c(F.tangent.size(), 0.0);
    std::vector<double> resid = X;
    for (std::size_t a = 0; a < F.tangent.size(); ++a) {
        double ip = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                ip += X[static_cast<std::size_t>(i)] * gcov(i, j) * F.tangent[a][static_cast<std::size_t>(j)];
        c[a] = ip * F.tangent_signs[a];
        for (int i = 0; i < n; ++i) resid[static_cast<std::size_t>(i)] -= c[a] * F.tangent[a][static_cast<std::size_t>(i)];
    }
    double rnorm = 0.0;
    for (double r : resid) rnorm = std::max(rnorm, std::fabs(r));
    if (rnorm > 1e-8) throw NotLeafTangent(rnorm);

    std::vector<double> beta(static_cast<std::size_t>(n), 0.0);
    for (std::size_t a = 0; a < F.tangent.size(); ++a)
        for (int i = 0; i < n; ++i) beta[static_cast<std::size_t>(i)] += c[a] * F.beta[a][static_cast<std::size_t>(i)];

    // kill the kernel component so beta lies in the complement
    for (std::size_t w = 0; w < F.kernel.size(); ++w) {
        double ip = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                ip += beta[static_cast<std::size_t>(i)] * G(i, j) * F.kernel[w][static_cast<std::size_t>(j)];
        ip *= F.kernel_signs[w];
        for (int i = 0; i < n; ++i) beta[static_cast<std::size_t>(i)] -= ip * F.kernel[w][static_cast<std::size_t>(i)];
    }
    return beta;
}

}  // namespace

double leaf_metric_38(const Structure& S, const Point& p, const std::vector<double>& X,
                      const std::vector<double>& Y, double eps_rank,
                      const std::vector<int>* forced_pivots) {
    auto beta = leaf_preimage(S, p, X, eps_rank, forced_pivots);
    auto gamma = leaf_preimage(S, p, Y, eps_rank, forced_pivots);
    Mat G = S.cometric_value(p);
    double acc = 0.0;
    for (int i = 0; i < S.n; ++i)
        for (int j = 0; j < S.n; ++j)
            acc += beta[static_cast<std::size_t>(i)] * G(i, j) * gamma[static_cast<std::size_t>(j)];
    return acc;
}

double leaf_symplectic(const Structure& S, const Point& p, const std::vector<double>& X,
                       const std::vector<double>& Y, double eps_rank,
                       const std::vector<int>* forced_pivots) {
    auto beta = leaf_preimage(S, p, X, eps_rank, forced_pivots);
    auto gamma = leaf_preimage(S, p, Y, eps_rank, forced_pivots);
    Mat Pi = S.pi_value(p);
    double acc = 0.0;
    for (int i = 0; i < S.n; ++i)
        for (int j = 0; j < S.n; ++j)
            acc += beta[static_cast<std::size_t>(i)] * Pi(i, j) * gamma[static_cast<std::size_t>(j)];
    return acc;
}

LeafTrace trace_leaf(const Structure& S, const Point& p0,
                     const std::vector<std::pair<int, double>>& schedule, double h) {
    if (h <= 0.0) throw Error("step size must be positive");
    if (!S.point_admissible(p0)) throw LeftValidityBox(0.0);

    LeafTrace tr;
    tr.schedule = schedule;
    tr.step = h;
    std::vector<double> c0;
    for (const auto& ca : S.casimirs) c0.push_back(eval_value(*ca, p0));
    tr.max_drift.assign(S.casimirs.size(), 0.0);

    auto record = [&](double t, const Point& p) {
        tr.times.push_back(t);
        tr.points.push_back(p);
        std::vector<double> drifts;
        for (std::size_t c = 0; c < S.casimirs.size(); ++c) {
            double d = std::fabs(eval_value(*S.casimirs[c], p) - c0[c]);
            tr.max_drift[c] = std::max(tr.max_drift[c], d);
            drifts.push_back(d);
        }
        tr.casimir_drift.push_back(std::move(drifts));
    };

    auto deriv = [&](int c, const Point& x) {
        Mat Pi = S.pi_value(x);
        std::vector<double> f(static_cast<std::size_t>(S.n), 0.0);
        for (int j = 0; j < S.n; ++j) f[static_cast<std::size_t>(j)] = Pi(c, j);
        return f;
    };

    Point x = p0;
    double t = 0.0;
    record(t, x);
    for (const auto& [coord, duration] : schedule) {
        if (coord < 0 || coord >= S.n) throw Error("schedule coordinate index out of range");
        long nsteps = static_cast<long>(std::ceil(duration / h - 1e-12));
        for (long s = 0; s < nsteps; ++s) {
            double dt = std::min(h, duration - static_cast<double>(s) * h);
            Point k1 = deriv(coord, x);
            Point tmp(x);
            for (int i = 0; i < S.n; ++i) tmp[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + 0.5 * dt * k1[static_cast<std::size_t>(i)];
            Point k2 = deriv(coord, tmp);
            for (int i = 0; i < S.n; ++i) tmp[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + 0.5 * dt * k2[static_cast<std::size_t>(i)];
            Point k3 = deriv(coord, tmp);
            for (int i = 0; i < S.n; ++i) tmp[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + dt * k3[static_cast<std::size_t>(i)];
            Point k4 = deriv(coord, tmp);
            Point nx(x);
            for (int i = 0; i < S.n; ++i)
                nx[static_cast<std::size_t>(i)] += dt / 6.0 *
                    (k1[static_cast<std::size_t>(i)] + 2 * k2[static_cast<std::size_t>(i)] +
                     2 * k3[static_cast<std::size_t>(i)] + k4[static_cast<std::size_t>(i)]);
            double nt = t + dt;
            if (!S.point_admissible(nx)) {
                tr.truncated = true;
                tr.exit_time = nt;
                return tr;
            }
            x = nx;
            t = nt;
            record(t, x);
        }
    }
    return tr;
}

std::string trace_to_csv(const Structure& S, const LeafTrace& t) {
    std::ostringstream os;
    os.precision(17);
    os << "t";
    for (const auto& c : S.coords) os << "," << c;
    for (std::size_t k = 0; k < S.casimirs.size(); ++k) os << ",drift" << k + 1;
    os << "\n";
    for (std::size_t r = 0; r < t.times.size(); ++r) {
        os << t.times[r];
        for (double x : t.points[r]) os << "," << x;
        for (double d : t.casimir_drift[r]) os << "," << d;
        os << "\n";
    }
    return os.str();
}

}  // namespace poissonlab

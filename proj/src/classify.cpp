#include "poissonlab/classify.hpp"

#include <functional>

#include "poissonlab/connections.hpp"

namespace poissonlab {

std::vector<std::string> convention_notes() {
    return {
        "indices: (pi# a)^j = a_i pi^{ij}; (J a)_i = J_i^k a_k; compatibility pi^{ij} = g^{ik} J_k^j",
        "omega := -pi^{-1} (matrix level) for nondegenerate pi",
        "(div pi)(f) := div X_f; the splitting-frame sum is negated to this convention",
        "killing_poisson := casimir_invariance and div_free",
    };
}

namespace {

// Splitting-adapted covector field bases: project the coordinate coframe off
// the kernel and orthonormalize, value-pivoted (frozen at the queried point).
std::vector<std::vector<Jet>> complement_basis_at(const Structure& S, const Point& q,
                                                  double eps_rank) {
    FrameT<Jet> Fq = leaf_frame_jets(S, q, eps_rank);
    const int n = S.n;
    auto x = S.jet_coords(q);
    DMat<Jet> G = S.cometric_at(std::span<const Jet>(x));
    auto inner = [&G](const std::vector<Jet>& u, const std::vector<Jet>& v) {
        Jet acc = G.a[0] * 0.0;
        for (int i = 0; i < G.rows; ++i)
            for (int j = 0; j < G.cols; ++j) acc += u[static_cast<std::size_t>(i)] * G(i, j) * v[static_cast<std::size_t>(j)];
        return acc;
    };
    std::vector<std::vector<Jet>> cand;
    for (int c = 0; c < n; ++c) {
        std::vector<Jet> v(static_cast<std::size_t>(n), Jet::constant(0.0, q.size()));
        v[static_cast<std::size_t>(c)] = Jet::constant(1.0, q.size());
        for (std::size_t w = 0; w < Fq.kernel.size(); ++w) {
            Jet ip = inner(v, Fq.kernel[w]) * Fq.kernel_signs[w];
            for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= ip * Fq.kernel[w][static_cast<std::size_t>(i)];
        }
        cand.push_back(std::move(v));
    }
    std::vector<std::vector<Jet>> out;
    std::vector<double> signs;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    const int rank = static_cast<int>(Fq.tangent.size());
    for (int step = 0; step < rank; ++step) {
        int pick = -1;
        double best = -1.0;
        for (int c = 0; c < n; ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            std::vector<Jet> w = cand[static_cast<std::size_t>(c)];
            for (std::size_t k = 0; k < out.size(); ++k) {
                Jet ip = inner(w, out[k]) * signs[k];
                for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] -= ip * out[k][static_cast<std::size_t>(i)];
            }
            double r2 = std::fabs(value_of(inner(w, w)));
            if (r2 > best) { best = r2; pick = c; }
        }
        used[static_cast<std::size_t>(pick)] = true;
        std::vector<Jet> w = cand[static_cast<std::size_t>(pick)];
        for (std::size_t k = 0; k < out.size(); ++k) {
            Jet ip = inner(w, out[k]) * signs[k];
            for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] -= ip * out[k][static_cast<std::size_t>(i)];
        }
        Jet n2 = inner(w, w);
        double sign = value_of(n2) > 0.0 ? 1.0 : -1.0;
        Jet norm = sqrt(n2 * sign);
        for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / norm;
        out.push_back(std::move(w));
        signs.push_back(sign);
    }
    return out;
}

}  // namespace

JetCoField complement_cofield(const Structure& S, int which, double eps_rank) {
    JetCoField f;
    f.n = S.n;
    f.eval = [&S, which, eps_rank](const Point& q) {
        return complement_basis_at(S, q, eps_rank)[static_cast<std::size_t>(which)];
    };
    return f;
}

JetCoField kernel_cofield(const Structure& S, int which, double eps_rank) {
    JetCoField f;
    f.n = S.n;
    f.eval = [&S, which, eps_rank](const Point& q) {
        return leaf_frame_jets(S, q, eps_rank).kernel[static_cast<std::size_t>(which)];
    };
    return f;
}

double involutivity_defect(const Structure& S, const Point& p, double eps_rank) {
    const int n = S.n;
    FrameT<Jet> F = leaf_frame_jets(S, p, eps_rank);
    const int rank = static_cast<int>(F.tangent.size());
    if (rank == 0 || F.kernel.empty()) return 0.0;

    Mat G = S.cometric_value(p);

    double worst = 0.0;
    for (int u = 0; u < rank; ++u)
        for (int v = u + 1; v < rank; ++v) {
            auto br = koszul_bracket(S, complement_cofield(S, u, eps_rank),
                                     complement_cofield(S, v, eps_rank), p);
            // kernel component and its G-norm
            std::vector<double> comp(static_cast<std::size_t>(n), 0.0);
            for (std::size_t w = 0; w < F.kernel.size(); ++w) {
                double ip = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        ip += br[static_cast<std::size_t>(i)] * G(i, j) * value_of(F.kernel[w][static_cast<std::size_t>(j)]);
                ip *= F.kernel_signs[w];
                for (int i = 0; i < n; ++i)
                    comp[static_cast<std::size_t>(i)] += ip * value_of(F.kernel[w][static_cast<std::size_t>(i)]);
            }
            double n2 = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) n2 += comp[static_cast<std::size_t>(i)] * G(i, j) * comp[static_cast<std::size_t>(j)];
            worst = std::max(worst, std::sqrt(std::fabs(n2)));
        }
    return worst;
}

double strong_transversal_defect(const Structure& S, const Point& p, double eps_rank) {
    FrameT<Jet> F0 = leaf_frame_jets(S, p, eps_rank);
    double worst = 0.0;
    for (std::size_t b = 0; b < F0.normal.size(); ++b) {
        JetVecField N;
        N.n = S.n;
        N.eval = [&S, eps_rank, b](const Point& q) {
            FrameT<Jet> Fq = leaf_frame_jets(S, q, eps_rank);
            return Fq.normal[b];
        };
        Mat L = lie_derivative_pi(S, N, p);
        worst = std::max(worst, max_abs_value(L));
    }
    return worst;
}

std::vector<double> mean_curvature(const Structure& S, const Point& p, double eps_rank) {
    const int n = S.n;
    FrameT<Jet> F = leaf_frame_jets(S, p, eps_rank);
    for (double sg : F.tangent_signs)
        if (sg < 0.0) throw IndefiniteRestriction();
    CovariantSymbols gam = covariant_christoffels(S, p);
    Mat G = S.cometric_value(p);
    Mat gcov = inverse_gj(G);

    std::vector<double> H(static_cast<std::size_t>(n), 0.0);
    for (std::size_t a = 0; a < F.tangent.size(); ++a) {
        // v = nabla_E E, ambient components
        std::vector<double> v(static_cast<std::size_t>(n), 0.0);
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += value_of(F.tangent[a][static_cast<std::size_t>(i)]) *
                       F.tangent[a][static_cast<std::size_t>(k)].partials()[static_cast<std::size_t>(i)];
                for (int j = 0; j < n; ++j)
                    acc += gam.at(k, i, j) * value_of(F.tangent[a][static_cast<std::size_t>(i)]) *
                           value_of(F.tangent[a][static_cast<std::size_t>(j)]);
            }
            v[static_cast<std::size_t>(k)] = acc;
        }
        // normal projection
        for (std::size_t b = 0; b < F.normal.size(); ++b) {
            double ip = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    ip += v[static_cast<std::size_t>(i)] * gcov(i, j) * value_of(F.normal[b][static_cast<std::size_t>(j)]);
            ip *= F.normal_signs[b];
            for (int i = 0; i < n; ++i)
                H[static_cast<std::size_t>(i)] += ip * value_of(F.normal[b][static_cast<std::size_t>(i)]);
        }
    }
    return H;
}

double bundle_like_defect(const Structure& S, const Point& p, double eps_rank) {
    const int n = S.n;
    FrameT<Jet> F0 = leaf_frame_jets(S, p, eps_rank);
    if (F0.normal.empty()) return 0.0;

    // transverse metric block through the jet-differentiated projector:
    // T_{ij} = sum_b eps_b (g_cov N_b)_i (g_cov N_b)_j
    auto Tfun = [&S, eps_rank](const Point& q) {
        FrameT<Jet> Fq = leaf_frame_jets(S, q, eps_rank);
        auto x = S.jet_coords(q);
        DMat<Jet> G = S.cometric_at(std::span<const Jet>(x));
        DMat<Jet> gcov = inverse_gj(G);
        const int n = S.n;
        DMat<Jet> T = dmat_zero_like(G.a[0], n, n);
        for (std::size_t b = 0; b < Fq.normal.size(); ++b) {
            std::vector<Jet> w(static_cast<std::size_t>(n), G.a[0] * 0.0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(i)] += gcov(i, j) * Fq.normal[b][static_cast<std::size_t>(j)];
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    T(i, j) += Fq.normal_signs[b] * w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)];
        }
        return T;
    };

    double worst = 0.0;
    for (int f = 0; f < n; ++f) {
        // X_f = pi# dx^f
        JetVecField X;
        X.n = n;
        X.eval = [&S, f](const Point& q) {
            DMat<Jet> Pi = S.pi_jet(q);
            std::vector<Jet> out;
            out.reserve(static_cast<std::size_t>(Pi.rows));
            for (int j = 0; j < Pi.rows; ++j) out.push_back(Pi(f, j));
            return out;
        };
        Mat L = lie_derivative_cov2(X, Tfun, p);
        for (std::size_t a = 0; a < F0.normal.size(); ++a)
            for (std::size_t b = 0; b < F0.normal.size(); ++b) {
                double acc = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        acc += value_of(F0.normal[a][static_cast<std::size_t>(i)]) * L(i, j) *
                               value_of(F0.normal[b][static_cast<std::size_t>(j)]);
                worst = std::max(worst, std::fabs(acc));
            }
    }
    return worst;
}

double casimir_invariance_defect(const Structure& S, const Point& p) {
    if (S.casimirs.empty()) throw MissingJ("no casimirs declared");  // signalled, caught by classify
    double worst = 0.0;
    for (const auto& cas : S.casimirs) {
        JetVecField grad;
        grad.n = S.n;
        ExprPtr f = cas;
        grad.eval = [&S, f](const Point& q) {
            Jet2 f2 = eval_jet2(*f, q);
            auto x = S.jet_coords(q);
            DMat<Jet> G = S.cometric_at(std::span<const Jet>(x));
            std::vector<Jet> out(static_cast<std::size_t>(S.n), Jet::constant(0.0, q.size()));
            for (int i = 0; i < S.n; ++i)
                for (int j = 0; j < S.n; ++j)
                    out[static_cast<std::size_t>(i)] += G(i, j) * f2.partials()[static_cast<std::size_t>(j)];
            return out;
        };
        Mat L = lie_derivative_pi(S, grad, p);
        worst = std::max(worst, max_abs_value(L));
    }
    return worst;
}

double almost_kp_defect(const Structure& S, const Point& p) {
    if (!S.Jfield) throw MissingJ();
    Mat Pi = S.pi_value(p);
    Mat G = S.cometric_value(p);
    Mat J = S.J_value(p);
    Mat GJ = matmul(G, J);
    double r = 0.0;
    for (int i = 0; i < S.n; ++i)
        for (int j = 0; j < S.n; ++j) r = std::max(r, std::fabs(Pi(i, j) - GJ(i, j)));
    Mat J3 = matmul(matmul(J, J), J);
    for (int i = 0; i < S.n; ++i)
        for (int j = 0; j < S.n; ++j) r = std::max(r, std::fabs(J3(i, j) + J(i, j)));
    return r;
}

std::vector<std::string> all_check_ids() {
    return {"jacobi",         "almost_kp",     "riemann_poisson",   "kahler_poisson",
            "div_free",       "casimir_invariance", "involutivity", "strong_transversal",
            "nijenhuis",      "bundle_like",   "mean_curvature_minimality", "killing_poisson"};
}

DefectReport classify(const Structure& S, int samples, std::uint64_t seed, double tol,
                      const std::vector<std::string>* which) {
    DefectReport rep;
    rep.structure = S.name;
    rep.seed = seed;
    rep.samples = samples;
    rep.tolerance = tol;
    rep.conventions = convention_notes();

    auto wanted = [&](const std::string& id) {
        if (!which) return true;
        for (const auto& w : *which)
            if (w == id || w == "killing_poisson") {
                if (w == id) return true;
                // killing needs its two components
                if (id == "casimir_invariance" || id == "div_free") return true;
            }
        return false;
    };

    struct Acc {
        CheckRecord rec;
        std::function<double(const Point&)> fn;
        bool enabled = true;
    };
    std::vector<Acc> accs;
    auto add = [&](const std::string& id, std::function<double(const Point&)> fn,
                   const std::string& note = "") {
        if (!wanted(id)) return;
        Acc a;
        a.rec.id = id;
        a.rec.tolerance = tol;
        a.rec.note = note;
        a.fn = std::move(fn);
        accs.push_back(std::move(a));
    };

    add("jacobi", [&](const Point& p) { return jacobiator(S, p); });
    add("almost_kp", [&](const Point& p) { return almost_kp_defect(S, p); });
    add("riemann_poisson", [&](const Point& p) { return nabla_pi(S, p).max_abs(); });
    add("kahler_poisson", [&](const Point& p) { return nabla_J(S, p).max_abs(); });
    add("div_free", [&](const Point& p) {
        auto d = div_pi(S, p);
        double m = 0.0;
        for (double x : d.div) m = std::max(m, std::fabs(x));
        return m;
    });
    add("casimir_invariance", [&](const Point& p) { return casimir_invariance_defect(S, p); });
    add("involutivity", [&](const Point& p) { return involutivity_defect(S, p); });
    add("strong_transversal", [&](const Point& p) { return strong_transversal_defect(S, p); });
    add("nijenhuis", [&](const Point& p) { return nijenhuis(S, p).max_abs(); });
    add("bundle_like", [&](const Point& p) { return bundle_like_defect(S, p); });
    add("mean_curvature_minimality", [&](const Point& p) {
        auto H = mean_curvature(S, p);
        double m = 0.0;
        for (double x : H) m = std::max(m, std::fabs(x));
        return m;
    });

    Sampler sampler(S, seed);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) pts.push_back(sampler.next());

    for (auto& a : accs) {
        for (const auto& p : pts) {
            if (S.rank_at(p) != S.base_rank) {
                ++a.rec.points_skipped;
                continue;
            }
            try {
                double d = a.fn(p);
                if (d > a.rec.max_defect ||
                    (d == a.rec.max_defect && !a.rec.worst_point.empty() && p < a.rec.worst_point)) {
                    a.rec.max_defect = d;
                    a.rec.worst_point = p;
                }
                ++a.rec.points_evaluated;
            } catch (const MissingJ& e) {
                a.rec.status = S.casimirs.empty() && a.rec.id == "casimir_invariance"
                                   ? "skipped-no-casimirs"
                                   : "skipped-no-J";
                break;
            } catch (const NotFStructure&) {
                a.rec.status = "skipped-no-J";
                break;
            } catch (const RankDrop&) {
                ++a.rec.points_skipped;
            } catch (const DomainError&) {
                ++a.rec.points_skipped;
            } catch (const SingularG&) {
                ++a.rec.points_skipped;
            } catch (const IndefiniteRestriction&) {
                a.rec.status = "skipped-indefinite-leafwise";
                break;
            }
        }
        if (a.rec.status == "ran") a.rec.pass = a.rec.max_defect < a.rec.tolerance;
        rep.checks.push_back(a.rec);
    }

    // kahler_poisson additionally requires almost_kp to pass
    CheckRecord* kp = nullptr;
    const CheckRecord* akp = nullptr;
    for (auto& c : rep.checks) {
        if (c.id == "kahler_poisson") kp = &c;
        if (c.id == "almost_kp") akp = &c;
    }
    if (kp && akp && kp->status == "ran" && akp->status == "ran" && !akp->pass) {
        kp->pass = false;
        kp->note = "almost_kp prerequisite failed";
    }

    // derived killing verdict
    const CheckRecord* ci = rep.find("casimir_invariance");
    const CheckRecord* df = rep.find("div_free");
    if ((!which || wanted("killing_poisson")) && ci && df) {
        CheckRecord k;
        k.id = "killing_poisson";
        k.tolerance = tol;
        k.status = "derived";
        if (ci->status == "skipped-no-casimirs") {
            k.status = "skipped-no-casimirs";
        } else {
            k.max_defect = std::max(ci->max_defect, df->max_defect);
            k.worst_point = ci->max_defect > df->max_defect ? ci->worst_point : df->worst_point;
            k.pass = ci->pass && df->pass;
        }
        k.note = "casimir_invariance && div_free";
        rep.checks.push_back(k);
    }
    return rep;
}

}  // namespace poissonlab

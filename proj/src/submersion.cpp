#include "poissonlab/submersion.hpp"

#include <Eigen/Dense>
#include <sstream>

namespace poissonlab {

Mat SubmersionSpec::jacobian(const Point& p) const {
    const int nP = P.n, nM = M.n;
    Mat dt(nM, nP, 0.0);
    for (int a = 0; a < nM; ++a) {
        Jet j = eval_jet(*map[static_cast<std::size_t>(a)], p);
        for (int i = 0; i < nP; ++i) dt(a, i) = j.partials()[static_cast<std::size_t>(i)];
    }
    Eigen::MatrixXd D(nM, nP);
    for (int a = 0; a < nM; ++a)
        for (int i = 0; i < nP; ++i) D(a, i) = dt(a, i);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(D);
    if (svd.singularValues()(svd.singularValues().size() - 1) <
        1e-10 * std::max(1.0, svd.singularValues()(0)))
        throw RankDeficient();
    return dt;
}

Point SubmersionSpec::push(const Point& p) const {
    Point q;
    q.reserve(map.size());
    for (const auto& e : map) q.push_back(eval_value(*e, p));
    return q;
}

double poisson_map_defect(const SubmersionSpec& sub, const Point& p) {
    Mat dt = sub.jacobian(p);
    Mat PiP = sub.P.pi_value(p);
    Point q = sub.push(p);
    Mat PiM = sub.M.pi_value(q);
    Mat pushpi = matmul(matmul(dt, PiP), transpose(dt));
    double r = 0.0;
    for (int a = 0; a < sub.M.n; ++a)
        for (int b = a + 1; b < sub.M.n; ++b)
            r = std::max(r, std::fabs(pushpi(a, b) - PiM(a, b)));
    return r;
}

double riem_submersion_defect(const SubmersionSpec& sub, const Point& p) {
    Mat dt = sub.jacobian(p);
    Mat GP = sub.P.cometric_value(p);
    Point q = sub.push(p);
    Mat GM = sub.M.cometric_value(q);
    Mat pushg = matmul(matmul(dt, GP), transpose(dt));
    double r = 0.0;
    for (int a = 0; a < sub.M.n; ++a)
        for (int b = a; b < sub.M.n; ++b)
            r = std::max(r, std::fabs(pushg(a, b) - GM(a, b)));
    return r;
}

PullbackDefects pullback_identity_defects(const SubmersionSpec& sub, const Point& p) {
    const int nP = sub.P.n, nM = sub.M.n;
    Mat dt = sub.jacobian(p);
    Point q = sub.push(p);

    DMat<Jet> PiP = sub.P.pi_jet(p);
    Mat PiPv = sub.P.pi_value(p);
    Mat GP = sub.P.cometric_value(p);
    Mat GM = sub.M.cometric_value(q);
    Mat PiM = sub.M.pi_value(q);
    ContravariantSymbols gamP = contravariant_christoffels(sub.P, p);
    ContravariantSymbols gamM = contravariant_christoffels(sub.M, q);

    // second-order data of the map for the pulled-back coframe fields
    std::vector<Jet2> t2;
    t2.reserve(static_cast<std::size_t>(nM));
    for (int a = 0; a < nM; ++a) t2.push_back(eval_jet2(*sub.map[static_cast<std::size_t>(a)], p));

    // (nabla_P^{t*dy^a}(t*dy^b))_k = (t*dy^a)_i [pi_P^{il} d_l (t*dy^b)_k
    //                                + Gamma_P^{im}_k (t*dy^b)_m]
    auto nab = [&](int a, int b, int k) {
        double acc = 0.0;
        for (int i = 0; i < nP; ++i) {
            double mu = dt(a, i);
            double inner = 0.0;
            for (int l = 0; l < nP; ++l)
                inner += value_of(PiP(i, l)) *
                         t2[static_cast<std::size_t>(b)].partials()[static_cast<std::size_t>(k)]
                             .partials()[static_cast<std::size_t>(l)];
            for (int m = 0; m < nP; ++m) inner += gamP.at(i, m, k) * dt(b, m);
            acc += mu * inner;
        }
        return acc;
    };

    PullbackDefects d;
    for (int a = 0; a < nM; ++a)
        for (int b = 0; b < nM; ++b) {
            std::vector<double> nabv(static_cast<std::size_t>(nP), 0.0);
            for (int k = 0; k < nP; ++k) nabv[static_cast<std::size_t>(k)] = nab(a, b, k);
            for (int c = 0; c < nM; ++c) {
                double lhs42 = 0.0, lhs43 = 0.0;
                for (int k = 0; k < nP; ++k)
                    for (int l = 0; l < nP; ++l) {
                        lhs42 += nabv[static_cast<std::size_t>(k)] * GP(k, l) * dt(c, l);
                        lhs43 += nabv[static_cast<std::size_t>(k)] * PiPv(k, l) * dt(c, l);
                    }
                double rhs42 = 0.0, rhs43 = 0.0;
                for (int m = 0; m < nM; ++m) {
                    rhs42 += gamM.at(a, b, m) * GM(m, c);
                    rhs43 += gamM.at(a, b, m) * PiM(m, c);
                }
                d.eq42 = std::max(d.eq42, std::fabs(lhs42 - rhs42));
                d.eq43 = std::max(d.eq43, std::fabs(lhs43 - rhs43));
            }
        }

    // (4.1) when both structures declare J
    if (sub.P.Jfield && sub.M.Jfield) {
        Mat JP = sub.P.J_value(p);
        Mat JM = sub.M.J_value(q);
        d.eq41 = 0.0;
        for (int a = 0; a < nM; ++a)
            for (int b = 0; b < nM; ++b) {
                // lhs: <t*dy^a, J_P(t*dy^b)>_P
                double lhs = 0.0, rhs = 0.0;
                std::vector<double> Jtb(static_cast<std::size_t>(nP), 0.0);
                for (int k = 0; k < nP; ++k)
                    for (int m = 0; m < nP; ++m) Jtb[static_cast<std::size_t>(k)] += JP(k, m) * dt(b, m);
                lhs = 0.0;
                for (int i = 0; i < nP; ++i)
                    for (int k = 0; k < nP; ++k) lhs += dt(a, i) * GP(i, k) * Jtb[static_cast<std::size_t>(k)];
                std::vector<double> tJb(static_cast<std::size_t>(nP), 0.0);
                for (int i = 0; i < nP; ++i)
                    for (int m = 0; m < nM; ++m) tJb[static_cast<std::size_t>(i)] += JM(m, b) * dt(m, i);
                rhs = 0.0;
                for (int i = 0; i < nP; ++i)
                    for (int k = 0; k < nP; ++k) rhs += dt(a, i) * GP(i, k) * tJb[static_cast<std::size_t>(k)];
                d.eq41 = std::max(d.eq41, std::fabs(lhs - rhs));
            }
    }

    // Prop 4.5(ii): t*(Ker pi_M#) subset Ker pi_P#
    Splitting sM = kernel_splitting(PiM, GM);
    for (const auto& gam : sM.kernel_basis) {
        std::vector<double> tg(static_cast<std::size_t>(nP), 0.0);
        for (int i = 0; i < nP; ++i)
            for (int a = 0; a < nM; ++a) tg[static_cast<std::size_t>(i)] += gam[static_cast<std::size_t>(a)] * dt(a, i);
        for (int j = 0; j < nP; ++j) {
            double v = 0.0;
            for (int i = 0; i < nP; ++i) v += tg[static_cast<std::size_t>(i)] * PiPv(i, j);
            d.kernel_containment = std::max(d.kernel_containment, std::fabs(v));
        }
    }

    // Lemma 4.2(i): dt(grad_P(y^a o t)) = grad_M y^a
    for (int a = 0; a < nM; ++a) {
        std::vector<double> gradP(static_cast<std::size_t>(nP), 0.0);
        for (int i = 0; i < nP; ++i)
            for (int j = 0; j < nP; ++j) gradP[static_cast<std::size_t>(i)] += GP(i, j) * dt(a, j);
        for (int m = 0; m < nM; ++m) {
            double push = 0.0;
            for (int i = 0; i < nP; ++i) push += dt(m, i) * gradP[static_cast<std::size_t>(i)];
            d.gradient_related = std::max(d.gradient_related, std::fabs(push - GM(m, a)));
        }
    }
    return d;
}

Mat induced_J(const SubmersionSpec& sub, const Point& p) {
    if (!sub.P.Jfield) throw MissingJ("P declares no J field");
    const int nP = sub.P.n, nM = sub.M.n;
    Mat dt = sub.jacobian(p);
    Point q = sub.push(p);
    Mat JP = sub.P.J_value(p);
    Mat GP = sub.P.cometric_value(p);
    Mat GM = sub.M.cometric_value(q);
    // J_M = G_M^{-1} dt G_P J_P dt^T  (from -flat_M o dt o J'_P o sharp_P o dt*
    // with J'_P = -sharp_P o J_P o flat_P)
    Mat tmp = matmul(GP, matmul(JP, transpose(dt)));
    Mat push = matmul(dt, tmp);
    (void)nP;
    (void)nM;
    return matmul(inverse_gj(GM), push);
}

double horizontal_defect(const SubmersionSpec& sub, const Point& p) {
    const int nP = sub.P.n, nM = sub.M.n;
    Mat dt = sub.jacobian(p);
    Mat GP = sub.P.cometric_value(p);
    Mat gcovP = inverse_gj(GP);
    // Ker dt basis via SVD
    Eigen::MatrixXd D(nM, nP);
    for (int a = 0; a < nM; ++a)
        for (int i = 0; i < nP; ++i) D(a, i) = dt(a, i);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeFullV);
    double r = 0.0;
    for (int k = nM; k < nP; ++k) {
        // vertical vector Z
        std::vector<double> Z(static_cast<std::size_t>(nP));
        for (int i = 0; i < nP; ++i) Z[static_cast<std::size_t>(i)] = svd.matrixV()(i, k);
        for (int a = 0; a < nM; ++a) {
            // (t*dy^a)#_P = G_P dt(a,.)^T ; pair with Z through g_cov
            double acc = 0.0;
            for (int i = 0; i < nP; ++i) {
                double sharp_i = 0.0;
                for (int j = 0; j < nP; ++j) sharp_i += GP(i, j) * dt(a, j);
                for (int j = 0; j < nP; ++j)
                    acc += sharp_i * gcovP(i, j) * Z[static_cast<std::size_t>(j)];
            }
            r = std::max(r, std::fabs(acc));
        }
    }
    return r;
}

double basic_form_roundtrip_defect(const SubmersionSpec& sub, const Point& p) {
    if (!sub.P.Jfield) throw MissingJ("P declares no J field");
    const int nP = sub.P.n, nM = sub.M.n;
    Mat dt = sub.jacobian(p);
    Mat JP = sub.P.J_value(p);
    Mat JM = induced_J(sub, p);
    double r = 0.0;
    for (int a = 0; a < nM; ++a) {
        std::vector<double> lhs(static_cast<std::size_t>(nP), 0.0), rhs(static_cast<std::size_t>(nP), 0.0);
        for (int i = 0; i < nP; ++i)
            for (int k = 0; k < nP; ++k) lhs[static_cast<std::size_t>(i)] += JP(i, k) * dt(a, k);
        for (int i = 0; i < nP; ++i)
            for (int m = 0; m < nM; ++m) rhs[static_cast<std::size_t>(i)] += JM(m, a) * dt(m, i);
        for (int i = 0; i < nP; ++i)
            r = std::max(r, std::fabs(lhs[static_cast<std::size_t>(i)] - rhs[static_cast<std::size_t>(i)]));
    }
    return r;
}

CosymplecticLift cosymplectic_lift(const CosymplecticInput& in, int samples, std::uint64_t seed,
                                   double tol) {
    const int n = in.M.n;
    CosymplecticLift out{};

    // numeric closedness of omega and eta over sampled points
    Sampler sampler(in.M, seed);
    std::vector<Point> pts{in.M.base};
    for (int k = 0; k < samples; ++k) pts.push_back(sampler.next());
    double closed = 0.0;
    for (const auto& p : pts) {
        auto x = in.M.jet_coords(p);
        DMat<Jet> Om = dmat_zero_like(x[0], n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (in.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                    Om(i, j) = eval_expr<Jet>(*in.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                              std::span<const Jet>(x));
        std::vector<Jet> eta;
        for (int i = 0; i < n; ++i)
            eta.push_back(in.eta[static_cast<std::size_t>(i)]
                              ? eval_expr<Jet>(*in.eta[static_cast<std::size_t>(i)], std::span<const Jet>(x))
                              : Jet::constant(0.0, p.size()));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                for (int k = j + 1; k < n; ++k) {
                    double dw = Om(j, k).partials()[static_cast<std::size_t>(i)] -
                                Om(i, k).partials()[static_cast<std::size_t>(j)] +
                                Om(i, j).partials()[static_cast<std::size_t>(k)];
                    closed = std::max(closed, std::fabs(dw));
                }
                double de = eta[static_cast<std::size_t>(j)].partials()[static_cast<std::size_t>(i)] -
                            eta[static_cast<std::size_t>(i)].partials()[static_cast<std::size_t>(j)];
                closed = std::max(closed, std::fabs(de));
            }
    }
    out.closedness = closed;
    if (closed > tol) throw NotClosed("omega or eta fails numeric closedness");

    // omega-tilde on P = M x R, inverted symbolically
    std::vector<std::vector<ExprPtr>> Omt(static_cast<std::size_t>(n + 1),
                                          std::vector<ExprPtr>(static_cast<std::size_t>(n + 1)));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) Omt[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e_const(0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (in.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                Omt[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    in.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    for (int i = 0; i < n; ++i) {
        ExprPtr ei = in.eta[static_cast<std::size_t>(i)] ? in.eta[static_cast<std::size_t>(i)] : e_const(0.0);
        Omt[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] = ei;
        Omt[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)] = e_neg(ei);
    }

    // nondegeneracy at the base point
    {
        std::vector<double> pb(in.M.base);
        pb.push_back(0.0);
        DMat<double> O(n + 1, n + 1, 0.0);
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                O(i, j) = eval_expr<double>(*Omt[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                            std::span<const double>(pb));
        double det = determinant(O);
        if (std::fabs(det) < 1e-10)
            throw DegenerateCosymplectic("omega^n ^ eta vanishes at the base point");
    }

    std::vector<std::vector<ExprPtr>> inv = expr_inverse(Omt);

    // P structure text-free assembly
    Structure P;
    P.name = in.M.name + "_lift";
    P.n = n + 1;
    P.coords = in.M.coords;
    P.coords.push_back("s");
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            ExprPtr pij = e_neg(inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            if (!e_is_const(pij, 0.0)) P.pi_upper[{i, j}] = pij;
        }
    for (const auto& [ij, e] : in.M.metric_upper) P.metric_upper[ij] = e;
    P.metric_upper[{n, n}] = e_const(1.0);
    P.base = in.M.base;
    P.base.push_back(0.0);
    P.box = in.M.box;
    P.box.ranges.emplace_back(-1.0, 1.0);
    P.exclude = in.M.exclude;
    validate_structure(P, false);

    SubmersionSpec sub;
    sub.name = in.M.name + "_cosymplectic";
    sub.P = std::move(P);
    sub.M = in.M;
    for (int a = 0; a < n; ++a) sub.map.push_back(Expr::coordinate(a));

    // Prop 4.12 conditions for J_M = sharp_M o omega-flat (tangent level)
    double dim_ = 0.0, dsh = 0.0, dsq = 0.0;
    for (const auto& p : pts) {
        Mat GM = in.M.cometric_value(p);
        Mat Om(n, n, 0.0);
        std::vector<double> eta(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            if (in.eta[static_cast<std::size_t>(i)]) eta[static_cast<std::size_t>(i)] = eval_value(*in.eta[static_cast<std::size_t>(i)], p);
            for (int j = 0; j < n; ++j)
                if (in.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                    Om(i, j) = eval_value(*in.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], p);
        }
        // (J X)^i = g^{ik} omega_{lk} X^l  => J = G_M * Om^T
        Mat J = matmul(GM, transpose(Om));
        std::vector<double> sharpeta(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) sharpeta[static_cast<std::size_t>(i)] += GM(i, j) * eta[static_cast<std::size_t>(j)];
        for (int c = 0; c < n; ++c) {
            double etaJ = 0.0;
            for (int i = 0; i < n; ++i) etaJ += eta[static_cast<std::size_t>(i)] * J(i, c);
            dim_ = std::max(dim_, std::fabs(etaJ));
        }
        for (int i = 0; i < n; ++i) {
            double js = 0.0;
            for (int j = 0; j < n; ++j) js += J(i, j) * sharpeta[static_cast<std::size_t>(j)];
            dsh = std::max(dsh, std::fabs(js));
        }
        Mat J2 = matmul(J, J);
        for (int c = 0; c < n; ++c)
            for (int i = 0; i < n; ++i) {
                double lhs = J2(i, c) + (i == c ? 1.0 : 0.0);
                double rhs = eta[static_cast<std::size_t>(c)] * sharpeta[static_cast<std::size_t>(i)];
                dsq = std::max(dsq, std::fabs(lhs - rhs));
            }
    }
    out.prop412_im = dim_;
    out.prop412_sharp = dsh;
    out.prop412_square = dsq;
    out.sub = std::move(sub);
    return out;
}

namespace {

std::string strip_line(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

SubmersionSpec parse_submersion(const std::string& text, const GalleryResolver& resolver) {
    SubmersionSpec sub;
    std::istringstream is(text);
    std::string line;
    std::string which;
    std::string block;
    bool haveP = false, haveM = false;
    std::vector<std::pair<int, std::string>> map_lines;

    while (std::getline(is, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        std::string t = strip_line(line);
        if (t.empty()) continue;
        if (!which.empty()) {
            if (t == "}") {
                Structure s = load_structure(block);
                if (which == "P") { sub.P = std::move(s); haveP = true; }
                else { sub.M = std::move(s); haveM = true; }
                which.clear();
                block.clear();
            } else {
                block += line + "\n";
            }
            continue;
        }
        std::istringstream ls(t);
        std::string key;
        ls >> key;
        if (key == "name") {
            ls >> sub.name;
        } else if (key == "P" || key == "M") {
            std::string rest;
            std::getline(ls, rest);
            rest = strip_line(rest);
            if (rest == "{") {
                which = key;
            } else if (rest.rfind("gallery", 0) == 0) {
                std::string id = strip_line(rest.substr(7));
                if (!resolver) throw ParseError("no gallery resolver for '" + t + "'");
                Structure s = resolver(id);
                if (key == "P") { sub.P = std::move(s); haveP = true; }
                else { sub.M = std::move(s); haveM = true; }
            } else {
                throw ParseError("expected '" + key + " {' or '" + key + " gallery <id>'");
            }
        } else if (key == "map") {
            int idx;
            ls >> idx;
            std::string rest;
            std::getline(ls, rest);
            auto eq = rest.find('=');
            if (eq == std::string::npos) throw ParseError("map line needs '='");
            map_lines.emplace_back(idx, strip_line(rest.substr(eq + 1)));
        } else {
            throw ParseError("unknown submersion keyword '" + key + "'");
        }
    }
    if (!haveP || !haveM) throw ParseError("submersion needs both P and M blocks");
    sub.map.resize(static_cast<std::size_t>(sub.M.n));
    for (auto& [idx, body] : map_lines) {
        if (idx < 1 || idx > sub.M.n) throw ParseError("map index out of range");
        sub.map[static_cast<std::size_t>(idx - 1)] = parse_expr(body, sub.P.coords);
    }
    for (const auto& e : sub.map)
        if (!e) throw ParseError("missing map component");
    return sub;
}

}  // namespace poissonlab

#include "poissonlab/structure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <sstream>

#include "poissonlab/fields.hpp"

namespace poissonlab {

std::vector<Jet> Structure::jet_coords(const Point& p) const {
    std::vector<Jet> x;
    x.reserve(p.size());
    for (std::size_t k = 0; k < p.size(); ++k)
        x.push_back(Jet::coordinate(p[k], p.size(), k));
    return x;
}

Mat Structure::pi_value(const Point& p) const { return pi_at(std::span<const double>(p)); }
Mat Structure::cometric_value(const Point& p) const { return cometric_at(std::span<const double>(p)); }
Mat Structure::J_value(const Point& p) const { return J_at(std::span<const double>(p)); }

DMat<Jet> Structure::pi_jet(const Point& p) const {
    auto x = jet_coords(p);
    return pi_at(std::span<const Jet>(x));
}
DMat<Jet> Structure::cometric_jet(const Point& p) const {
    auto x = jet_coords(p);
    return cometric_at(std::span<const Jet>(x));
}
DMat<Jet> Structure::J_jet(const Point& p) const {
    auto x = jet_coords(p);
    return J_at(std::span<const Jet>(x));
}

bool Structure::point_admissible(const Point& p) const {
    if (!box.contains(p)) return false;
    if (exclude) {
        try {
            if (eval_value(*exclude, p) <= 0.0) return false;
        } catch (const DomainError&) {
            return false;
        }
    }
    return true;
}

int Structure::rank_at(const Point& p, double eps_rank) const {
    Mat P = pi_value(p);
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = P(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    double tol = eps_rank * (smax == 0.0 ? 1.0 : smax);
    int r = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()(k) > tol) ++r;
    return r;
}

Point Sampler::next() {
    for (int tries = 0; tries < 100000; ++tries) {
        Point p(static_cast<std::size_t>(S.n));
        for (int i = 0; i < S.n; ++i)
            p[static_cast<std::size_t>(i)] =
                rng.uniform(S.box.ranges[static_cast<std::size_t>(i)].first,
                            S.box.ranges[static_cast<std::size_t>(i)].second);
        if (S.point_admissible(p)) return p;
    }
    throw Error("sampler failed to find an admissible point (excluded locus too large?)");
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_point(const std::string& s, int n) {
    std::string t = s;
    std::replace(t.begin(), t.end(), ',', ' ');
    auto parts = split_ws(t);
    if (static_cast<int>(parts.size()) != n)
        throw ParseError("point needs " + std::to_string(n) + " components, got '" + s + "'");
    std::vector<double> p;
    for (auto& x : parts) p.push_back(std::stod(x));
    return p;
}

Box parse_box(const std::string& s, int n) {
    Box b;
    std::size_t i = 0;
    while (true) {
        std::size_t lb = s.find('[', i);
        if (lb == std::string::npos) break;
        std::size_t rb = s.find(']', lb);
        if (rb == std::string::npos) throw ParseError("unterminated box interval in '" + s + "'");
        std::string inner = s.substr(lb + 1, rb - lb - 1);
        std::replace(inner.begin(), inner.end(), ',', ' ');
        auto parts = split_ws(inner);
        if (parts.size() != 2) throw ParseError("box interval needs two bounds: '" + inner + "'");
        double lo = std::stod(parts[0]), hi = std::stod(parts[1]);
        if (lo > hi) throw ParseError("empty box interval in '" + s + "'");
        b.ranges.emplace_back(lo, hi);
        i = rb + 1;
    }
    if (static_cast<int>(b.ranges.size()) != n)
        throw ParseError("box needs " + std::to_string(n) + " intervals");
    return b;
}

}  // namespace

Structure load_structure(const std::string& text, bool allow_non_poisson) {
    Structure S;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    std::vector<std::tuple<std::string, int, int, std::string>> expr_lines;  // key, i, j, rhs
    std::vector<std::string> casimir_texts;
    std::string base_text, box_text, exclude_text;
    std::optional<std::pair<int, int>> declared_sig;

    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw;
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        line = strip(line);
        if (line.empty()) continue;

        std::string lhs = line, rhs;
        if (auto eq = line.find('='); eq != std::string::npos) {
            lhs = strip(line.substr(0, eq));
            rhs = strip(line.substr(eq + 1));
        }
        auto head = split_ws(lhs);
        if (head.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty head");
        const std::string& key = head[0];

        if (key == "name") {
            S.name = head.size() > 1 ? head[1] : rhs;
        } else if (key == "dim") {
            S.n = std::stoi(head.size() > 1 ? head[1] : rhs);
        } else if (key == "coords") {
            S.coords.assign(head.begin() + 1, head.end());
            if (!rhs.empty()) for (auto& c : split_ws(rhs)) S.coords.push_back(c);
        } else if (key == "signature") {
            auto parts = head.size() > 2 ? std::vector<std::string>(head.begin() + 1, head.end())
                                         : split_ws(rhs);
            if (parts.size() != 2) throw ParseError("signature needs two integers");
            declared_sig = {std::stoi(parts[0]), std::stoi(parts[1])};
        } else if (key == "pi" || key == "metric" || key == "J") {
            if (head.size() != 3) throw ParseError("line " + std::to_string(lineno) + ": '" + key +
                                                   " i j = expr' expected");
            expr_lines.emplace_back(key, std::stoi(head[1]), std::stoi(head[2]), rhs);
        } else if (key == "casimir") {
            casimir_texts.push_back(rhs);
        } else if (key == "base") {
            base_text = rhs;
        } else if (key == "box") {
            box_text = rhs;
        } else if (key == "exclude") {
            exclude_text = rhs;
        } else if (key == "allow_non_poisson") {
            S.allow_non_poisson = true;
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown keyword '" + key + "'");
        }
    }

    if (S.n <= 0) throw ParseError("missing or invalid 'dim'");
    if (static_cast<int>(S.coords.size()) != S.n)
        throw ParseError("'coords' must name exactly dim coordinates");

    for (auto& [key, i1, j1, rhs] : expr_lines) {
        int i = i1 - 1, j = j1 - 1;
        if (i < 0 || j < 0 || i >= S.n || j >= S.n)
            throw ParseError(key + " indices out of range: " + std::to_string(i1) + " " +
                             std::to_string(j1));
        ExprPtr e;
        try {
            e = parse_expr(rhs, S.coords);
        } catch (const Error& err) {
            throw ParseError(key + " " + std::to_string(i1) + " " + std::to_string(j1) + ": " +
                             err.what());
        }
        if (key == "pi") {
            if (i >= j) throw ParseError("pi entries must be strict upper triangle (i < j)");
            S.pi_upper[{i, j}] = e;
        } else if (key == "metric") {
            if (i > j) throw ParseError("metric entries must be upper triangle (i <= j)");
            S.metric_upper[{i, j}] = e;
        } else {
            if (!S.Jfield)
                S.Jfield.emplace(static_cast<std::size_t>(S.n),
                                 std::vector<ExprPtr>(static_cast<std::size_t>(S.n)));
            (*S.Jfield)[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
        }
    }

    for (auto& c : casimir_texts) {
        try {
            S.casimirs.push_back(parse_expr(c, S.coords));
        } catch (const Error& err) {
            throw ParseError(std::string("casimir: ") + err.what());
        }
    }

    S.box = box_text.empty() ? Box{std::vector<std::pair<double, double>>(
                                   static_cast<std::size_t>(S.n), {-1.0, 1.0})}
                             : parse_box(box_text, S.n);
    if (base_text.empty()) {
        S.base.resize(static_cast<std::size_t>(S.n));
        for (int i = 0; i < S.n; ++i)
            S.base[static_cast<std::size_t>(i)] =
                0.5 * (S.box.ranges[static_cast<std::size_t>(i)].first +
                       S.box.ranges[static_cast<std::size_t>(i)].second);
    } else {
        S.base = parse_point(base_text, S.n);
    }
    if (!exclude_text.empty()) {
        std::string body = exclude_text;
        if (auto le = body.find("<="); le != std::string::npos) {
            std::string rhs = strip(body.substr(le + 2));
            if (rhs != "0") throw ParseError("exclude must be of the form '<expr> <= 0'");
            body = strip(body.substr(0, le));
        }
        try {
            S.exclude = parse_expr(body, S.coords);
        } catch (const Error& err) {
            throw ParseError(std::string("exclude: ") + err.what());
        }
    }
    if (declared_sig) S.signature = *declared_sig;

    validate_structure(S, allow_non_poisson || S.allow_non_poisson);
    return S;
}

void validate_structure(Structure& S, bool allow_non_poisson) {
    const double tol = 1e-8;
    if (!S.box.contains(S.base))
        throw ValidationError("base_in_box", S.base, 0.0, "base point outside the validity box");
    if (S.exclude && eval_value(*S.exclude, S.base) <= 0.0)
        throw ValidationError("base_in_box", S.base, 0.0, "base point lies in the excluded locus");

    // cometric invertibility and signature at the base point
    Mat G = S.cometric_value(S.base);
    Eigen::MatrixXd Ge(S.n, S.n);
    for (int i = 0; i < S.n; ++i)
        for (int j = 0; j < S.n; ++j) Ge(i, j) = G(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ge);
    int pos = 0, neg = 0;
    double lmin = 1e300, lmax = 0.0;
    for (int k = 0; k < S.n; ++k) {
        double l = es.eigenvalues()(k);
        if (l > 0) ++pos;
        if (l < 0) ++neg;
        lmin = std::min(lmin, std::fabs(l));
        lmax = std::max(lmax, std::fabs(l));
    }
    if (pos + neg < S.n || lmin == 0.0 || lmax / lmin > 1e14)
        throw ValidationError("cometric_invertible", S.base, lmin, "cometric singular at base");
    S.g_condition_at_base = lmax / lmin;
    if (S.signature == std::pair<int, int>{0, 0}) {
        S.signature = {pos, neg};
    } else if (S.signature != std::pair<int, int>{pos, neg}) {
        throw ValidationError("signature", S.base, 0.0,
                              "declared signature does not match the cometric at base");
    }
    S.base_rank = S.rank_at(S.base);

    // jacobi + casimirs at base and 32 pseudorandom points
    Sampler sampler(S, 0x9e3779b9u);
    std::vector<Point> pts{S.base};
    for (int k = 0; k < 32; ++k) pts.push_back(sampler.next());

    double worst_jac = 0.0;
    Point worst_jac_p = S.base;
    for (const auto& p : pts) {
        double j = jacobiator(S, p);
        if (j > worst_jac) { worst_jac = j; worst_jac_p = p; }
    }
    if (!allow_non_poisson && worst_jac > tol)
        throw ValidationError("jacobi", worst_jac_p, worst_jac,
                              "bivector is not Poisson (pass allow-non-poisson to override)");

    for (std::size_t c = 0; c < S.casimirs.size(); ++c) {
        double worst = 0.0;
        Point worst_p = S.base;
        for (const auto& p : pts) {
            Jet f = eval_jet(*S.casimirs[c], p);
            std::vector<double> df = f.partials();
            auto v = sharp_pi(S, p, df);
            double m = 0.0;
            for (double x : v) m = std::max(m, std::fabs(x));
            if (m > worst) { worst = m; worst_p = p; }
        }
        if (worst > tol)
            throw ValidationError("casimir", worst_p, worst,
                                  "declared casimir #" + std::to_string(c + 1) +
                                      " is not annihilated by pi#");
    }
}

std::string structure_to_text(const Structure& S) {
    std::ostringstream os;
    os.precision(17);
    os << "name " << S.name << "\n";
    os << "dim " << S.n << "\n";
    os << "coords";
    for (auto& c : S.coords) os << " " << c;
    os << "\n";
    os << "signature " << S.signature.first << " " << S.signature.second << "\n";
    for (const auto& [ij, e] : S.pi_upper)
        os << "pi " << ij.first + 1 << " " << ij.second + 1 << " = "
           << print_expr(*e, &S.coords) << "\n";
    for (const auto& [ij, e] : S.metric_upper)
        os << "metric " << ij.first + 1 << " " << ij.second + 1 << " = " << print_expr(*e, &S.coords) << "\n";
    if (S.Jfield)
        for (int i = 0; i < S.n; ++i)
            for (int j = 0; j < S.n; ++j)
                if ((*S.Jfield)[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                    os << "J " << i + 1 << " " << j + 1 << " = "
                       << print_expr(*(*S.Jfield)[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], &S.coords) << "\n";
    for (auto& c : S.casimirs) os << "casimir = " << print_expr(*c, &S.coords) << "\n";
    os << "base =";
    for (double x : S.base) os << " " << x;
    os << "\n";
    os << "box =";
    for (std::size_t i = 0; i < S.box.ranges.size(); ++i)
        os << (i ? " x [" : " [") << S.box.ranges[i].first << ", " << S.box.ranges[i].second << "]";
    os << "\n";
    if (S.exclude) os << "exclude = " << print_expr(*S.exclude, &S.coords) << " <= 0\n";
    if (S.allow_non_poisson) os << "allow_non_poisson\n";
    return os.str();
}

}  // namespace poissonlab

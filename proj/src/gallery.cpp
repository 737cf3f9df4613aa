#include "poissonlab/gallery.hpp"

#include <sstream>

namespace poissonlab {

namespace {

std::string euclid_text(int n, int r, int s) {
    std::ostringstream os;
    os << "name euclid_r" << n << "_" << r << s << "\n";
    os << "dim " << n << "\ncoords";
    for (int i = 1; i <= n; ++i) os << " x" << i;
    os << "\n";
    os << "pi " << r << " " << s << " = 1\n";
    for (int i = 1; i <= n; ++i) os << "metric " << i << " " << i << " = 1\n";
    os << "J " << r << " " << s << " = 1\n";
    os << "J " << s << " " << r << " = -1\n";
    for (int i = 1; i <= n; ++i)
        if (i != r && i != s) os << "casimir = x" << i << "\n";
    os << "base =";
    for (int i = 0; i < n; ++i) os << " 0.25";
    os << "\nbox =";
    for (int i = 0; i < n; ++i) os << (i ? " x [-2, 2]" : " [-2, 2]");
    os << "\n";
    return os.str();
}

std::map<std::string, std::string> all_pass_table() {
    std::map<std::string, std::string> t;
    for (const char* id :
         {"jacobi", "almost_kp", "riemann_poisson", "kahler_poisson", "div_free",
          "casimir_invariance", "involutivity", "strong_transversal", "nijenhuis",
          "bundle_like", "mean_curvature_minimality", "killing_poisson"})
        t[id] = "pass";
    return t;
}

std::vector<GalleryEntry> build() {
    std::vector<GalleryEntry> g;

    {
        GalleryEntry e;
        e.id = "euclid_rn_rs";
        e.text = euclid_text(3, 1, 2);
        e.expected = all_pass_table();
        e.reference = "constant rank-2 bivector d_r ^ d_s on R^n with the Euclidean cometric and "
                      "its constant compatible f-structure; leaves are parallel planes";
        g.push_back(e);
    }
    {
        GalleryEntry e;
        e.id = "so3_euclid";
        e.text = R"(name so3_euclid
dim 3
coords x y z
pi 1 2 = z
pi 1 3 = -y
pi 2 3 = x
metric 1 1 = 1
metric 2 2 = 1
metric 3 3 = 1
casimir = x^2+y^2+z^2
base = 0, 0, 1
box = [-2, 2] x [-2, 2] x [-2, 2]
exclude = sqrt(x^2+y^2+z^2) - 0.1 <= 0
)";
        e.expected = {{"jacobi", "pass"},
                      {"almost_kp", "skip"},
                      {"riemann_poisson", "pass"},
                      {"kahler_poisson", "skip"},
                      {"div_free", "pass"},
                      {"casimir_invariance", "fail"},
                      {"involutivity", "fail"},
                      {"strong_transversal", "fail"},
                      {"nijenhuis", "skip"},
                      {"bundle_like", "measure"},
                      {"mean_curvature_minimality", "fail"},
                      {"killing_poisson", "fail"}};
        e.contested = {"riemann_poisson"};
        e.reference = "dual of so(3): linear cross-product bivector with the Euclidean metric; "
                      "leaves are concentric spheres (singular at the origin, excluded)";
        g.push_back(e);
    }
    {
        GalleryEntry e;
        e.id = "so3_rescaled";
        e.text = R"(name so3_rescaled
dim 3
coords x y z
pi 1 2 = sqrt(x^2+y^2+z^2)*z
pi 1 3 = -sqrt(x^2+y^2+z^2)*y
pi 2 3 = sqrt(x^2+y^2+z^2)*x
metric 1 1 = 1
metric 2 2 = 1
metric 3 3 = 1
casimir = x^2+y^2+z^2
base = 0, 0, 1
box = [-2, 2] x [-2, 2] x [-2, 2]
exclude = sqrt(x^2+y^2+z^2) - 0.1 <= 0
)";
        e.expected = {{"jacobi", "pass"},
                      {"almost_kp", "skip"},
                      {"riemann_poisson", "pass"},
                      {"kahler_poisson", "skip"},
                      {"div_free", "pass"},
                      {"casimir_invariance", "pass"},
                      {"involutivity", "pass"},
                      {"strong_transversal", "pass"},
                      {"nijenhuis", "skip"},
                      {"bundle_like", "pass"},
                      {"mean_curvature_minimality", "fail"},
                      {"killing_poisson", "pass"}};
        e.reference = "radius-rescaled so(3)* bivector r*pi with the Euclidean metric: "
                      "transversally invariant, divergence free, and contravariantly parallel; "
                      "its sphere leaves are still not minimal";
        g.push_back(e);
    }
    {
        GalleryEntry e;
        e.id = "sl2_lorentz";
        e.text = R"(name sl2_lorentz
dim 3
coords x y z
signature 2 1
pi 1 2 = -z
pi 1 3 = -y
pi 2 3 = x
metric 1 1 = 1
metric 2 2 = 1
metric 3 3 = -1
casimir = x^2+y^2-z^2
base = 1.5, 0, 0
box = [-2, 2] x [-2, 2] x [-2, 2]
exclude = abs(x^2+y^2-z^2) - 0.1 <= 0
)";
        e.expected = {{"jacobi", "pass"},
                      {"almost_kp", "skip"},
                      {"riemann_poisson", "pass"},
                      {"kahler_poisson", "skip"},
                      {"div_free", "pass"},
                      {"casimir_invariance", "fail"},
                      {"involutivity", "fail"},
                      {"strong_transversal", "fail"},
                      {"nijenhuis", "skip"},
                      {"bundle_like", "measure"},
                      {"mean_curvature_minimality", "skip"},
                      {"killing_poisson", "fail"}};
        e.contested = {"riemann_poisson"};
        e.reference = "dual of sl(2): linear bivector with the flat Lorentzian metric "
                      "dx^2+dy^2-dz^2; leaves are coaxial hyperboloids, light cone excluded";
        g.push_back(e);
    }
    {
        GalleryEntry e;
        e.id = "sl2_rescaled";
        e.text = R"(name sl2_rescaled
dim 3
coords x y z
signature 2 1
pi 1 2 = -sqrt(abs(x^2+y^2-z^2))*z
pi 1 3 = -sqrt(abs(x^2+y^2-z^2))*y
pi 2 3 = sqrt(abs(x^2+y^2-z^2))*x
metric 1 1 = 1
metric 2 2 = 1
metric 3 3 = -1
casimir = x^2+y^2-z^2
base = 1.5, 0, 0
box = [-2, 2] x [-2, 2] x [-2, 2]
exclude = abs(x^2+y^2-z^2) - 0.1 <= 0
)";
        e.expected = {{"jacobi", "pass"},
                      {"almost_kp", "skip"},
                      {"riemann_poisson", "pass"},
                      {"kahler_poisson", "skip"},
                      {"div_free", "pass"},
                      {"casimir_invariance", "pass"},
                      {"involutivity", "pass"},
                      {"strong_transversal", "pass"},
                      {"nijenhuis", "skip"},
                      {"bundle_like", "measure"},
                      {"mean_curvature_minimality", "skip"},
                      {"killing_poisson", "pass"}};
        e.reference = "rescaled sl(2)* bivector rho*pi on the Lorentzian chart: the rescaling "
                      "that makes the linear structure Killing and contravariantly parallel";
        g.push_back(e);
    }
    {
        GalleryEntry e;
        e.id = "so3_reg_conformal";
        auto txt = [](const char* name, const char* scale, bool rescaled, const char* jscale) {
            std::ostringstream os;
            os << "name " << name << "\ndim 3\ncoords x y z\n";
            std::string r = "sqrt(x^2+y^2+z^2)";
            std::string pre = rescaled ? r + "*" : "";
            os << "pi 1 2 = " << pre << "z\n";
            os << "pi 1 3 = -" << (rescaled ? "(" + r + "*y)" : std::string("y")) << "\n";
            os << "pi 2 3 = " << pre << "x\n";
            for (int i = 1; i <= 3; ++i) os << "metric " << i << " " << i << " = " << scale << "\n";
            // canonical J = g_cov * Pi
            os << "J 1 2 = " << jscale << "*(" << pre << "z)\n";
            os << "J 1 3 = -(" << jscale << "*(" << pre << "y))\n";
            os << "J 2 1 = -(" << jscale << "*(" << pre << "z))\n";
            os << "J 2 3 = " << jscale << "*(" << pre << "x)\n";
            os << "J 3 1 = " << jscale << "*(" << pre << "y)\n";
            os << "J 3 2 = -(" << jscale << "*(" << pre << "x))\n";
            os << "casimir = x^2+y^2+z^2\n";
            os << "base = 0, 0, 1\n";
            os << "box = [-2, 2] x [-2, 2] x [-2, 2]\n";
            os << "exclude = sqrt(x^2+y^2+z^2) - 0.3 <= 0\n";
            return os.str();
        };
        // cometric r*delta  <-> metric r^{-1}*delta (the literal dual reading)
        e.text = txt("so3_reg_conformal", "sqrt(x^2+y^2+z^2)", false, "1/sqrt(x^2+y^2+z^2)");
        e.variants = {
            {"pi_cometric_r", e.text},
            {"pi_cometric_rinv",
             txt("so3_reg_conformal_b", "1/sqrt(x^2+y^2+z^2)", false, "sqrt(x^2+y^2+z^2)")},
            {"rpi_cometric_r", txt("so3_reg_conformal_c", "sqrt(x^2+y^2+z^2)", true, "1/sqrt(x^2+y^2+z^2)")},
            {"rpi_cometric_rinv",
             txt("so3_reg_conformal_d", "1/sqrt(x^2+y^2+z^2)", true, "sqrt(x^2+y^2+z^2)")},
        };
        e.expected = {{"jacobi", "pass"},
                      {"almost_kp", "measure"},
                      {"riemann_poisson", "measure"},
                      {"kahler_poisson", "measure"},
                      {"div_free", "measure"},
                      {"casimir_invariance", "measure"},
                      {"killing_poisson", "measure"},
                      {"involutivity", "measure"},
                      {"strong_transversal", "measure"},
                      {"nijenhuis", "measure"},
                      {"bundle_like", "measure"},
                      {"mean_curvature_minimality", "measure"}};
        e.reference = "regular part of so(3)* with conformally Euclidean metrics; the claimed "
                      "Killing/Kaehler properties are measured under all four bivector/cometric "
                      "readings, never asserted (see the report ledger)";
        g.push_back(e);
    }
    {
        GalleryEntry e;
        e.id = "sl2_reg_conformal";
        auto txt = [](const char* name, bool inv_scale, bool rescaled) {
            std::ostringstream os;
            std::string rho = "sqrt(abs(x^2+y^2-z^2))";
            std::string scale = inv_scale ? "1/" + rho : rho;       // cometric factor
            std::string jscale = inv_scale ? rho : "1/" + rho;      // g_cov factor
            std::string pre = rescaled ? rho + "*" : "";
            os << "name " << name << "\ndim 3\ncoords x y z\nsignature 2 1\n";
            os << "pi 1 2 = -(" << pre << "z)\n";
            os << "pi 1 3 = -(" << pre << "y)\n";
            os << "pi 2 3 = " << pre << "x\n";
            os << "metric 1 1 = " << scale << "\n";
            os << "metric 2 2 = " << scale << "\n";
            os << "metric 3 3 = -(" << scale << ")\n";
            // canonical J = g_cov * Pi with g_cov = jscale * diag(1,1,-1)
            os << "J 1 2 = -(" << jscale << "*(" << pre << "z))\n";
            os << "J 1 3 = -(" << jscale << "*(" << pre << "y))\n";
            os << "J 2 1 = " << jscale << "*(" << pre << "z)\n";
            os << "J 2 3 = " << jscale << "*(" << pre << "x)\n";
            os << "J 3 1 = -(" << jscale << "*(" << pre << "y))\n";
            os << "J 3 2 = " << jscale << "*(" << pre << "x)\n";
            os << "casimir = x^2+y^2-z^2\n";
            os << "base = 0, 0, 1.5\n";
            os << "box = [-1, 1] x [-1, 1] x [-2, 2]\n";
            os << "exclude = -(x^2+y^2-z^2) - 0.1 <= 0\n";
            return os.str();
        };
        e.text = txt("sl2_reg_conformal", false, false);
        e.variants = {
            {"pi_cometric_rho", e.text},
            {"pi_cometric_rhoinv", txt("sl2_reg_conformal_b", true, false)},
            {"rhopi_cometric_rho", txt("sl2_reg_conformal_c", false, true)},
            {"rhopi_cometric_rhoinv", txt("sl2_reg_conformal_d", true, true)},
        };
        e.expected = {{"jacobi", "pass"},
                      {"almost_kp", "measure"},
                      {"riemann_poisson", "measure"},
                      {"kahler_poisson", "measure"},
                      {"div_free", "measure"},
                      {"casimir_invariance", "measure"},
                      {"killing_poisson", "measure"},
                      {"involutivity", "measure"},
                      {"strong_transversal", "measure"},
                      {"nijenhuis", "measure"},
                      {"bundle_like", "measure"},
                      {"mean_curvature_minimality", "measure"}};
        e.reference = "regular sl(2)* on the two-sheeted region with conformally Lorentzian "
                      "metrics; measured under all four bivector/cometric readings";
        g.push_back(e);
    }
    {
        GalleryEntry e;
        e.id = "symplectic_r2_conformal";
        e.text = R"(name symplectic_r2_conformal
dim 2
coords x y
pi 1 2 = 1
metric 1 1 = exp(-x)
metric 2 2 = exp(-x)
base = 0, 0
box = [-1, 1] x [-1, 1]
)";
        e.expected = {{"jacobi", "pass"},
                      {"almost_kp", "skip"},
                      {"riemann_poisson", "fail"},
                      {"kahler_poisson", "skip"},
                      {"div_free", "fail"},
                      {"casimir_invariance", "skip"},
                      {"involutivity", "pass"},
                      {"strong_transversal", "pass"},
                      {"nijenhuis", "skip"},
                      {"bundle_like", "pass"},
                      {"mean_curvature_minimality", "pass"},
                      {"killing_poisson", "skip"}};
        e.reference = "invertible bivector on R^2 with a conformally flat metric of volume "
                      "density e^x: the single-leaf case where parallelism fails";
        g.push_back(e);
    }
    {
        GalleryEntry e;
        e.id = "zero_pi_curved";
        e.text = R"(name zero_pi_curved
dim 3
coords x y z
metric 1 1 = 1+x^2
metric 2 2 = 1
metric 3 3 = 1+z^2
J 1 1 = 0
casimir = x
casimir = y
casimir = z
base = 0.2, 0, -0.1
box = [-1, 1] x [-1, 1] x [-1, 1]
)";
        e.expected = all_pass_table();
        e.reference = "zero bivector on a curved metric: the trivial compatible triple with "
                      "0-dimensional leaves";
        g.push_back(e);
    }
    {
        GalleryEntry e;
        e.id = "nonpoisson_demo";
        e.text = R"(name nonpoisson_demo
dim 3
coords x y z
pi 1 2 = 1
pi 1 3 = x
metric 1 1 = 1
metric 2 2 = 1
metric 3 3 = 1
base = 0.5, 0, 0
box = [-1, 1] x [-1, 1] x [-1, 1]
allow_non_poisson
)";
        e.expected = {{"jacobi", "fail"}};
        e.reference = "bivector d_x^d_y + x d_x^d_z with unit jacobiator: loads only under the "
                      "non-Poisson override, for negative tests";
        g.push_back(e);
    }

    // submersion specs
    {
        GalleryEntry e;
        e.id = "r4_to_r3";
        e.is_submersion = true;
        e.text = R"(name r4_to_r3
P {
name r4_kahler
dim 4
coords x1 x2 x3 x4
pi 1 2 = 1
pi 3 4 = 1
metric 1 1 = 1
metric 2 2 = 1
metric 3 3 = 1
metric 4 4 = 1
J 1 2 = 1
J 2 1 = -1
J 3 4 = 1
J 4 3 = -1
base = 0.25, 0.25, 0.25, 0.25
box = [-2, 2] x [-2, 2] x [-2, 2] x [-2, 2]
}
M {
name r3_pi12
dim 3
coords y1 y2 y3
pi 1 2 = 1
metric 1 1 = 1
metric 2 2 = 1
metric 3 3 = 1
J 1 2 = 1
J 2 1 = -1
casimir = y3
base = 0.25, 0.25, 0.25
box = [-2, 2] x [-2, 2] x [-2, 2]
}
map 1 = x1
map 2 = x2
map 3 = x3
)";
        e.expected = {{"poisson_map", "pass"}, {"riem_submersion", "pass"}, {"eq41", "pass"},
                      {"eq42", "pass"},        {"eq43", "pass"},            {"kernel_containment", "pass"},
                      {"gradient_related", "pass"}, {"horizontal", "pass"}, {"roundtrip", "pass"},
                      {"transport_riemann", "pass"}};
        e.reference = "projection of flat Kaehler R^4 onto R^3 with the rank-2 bivector: a "
                      "Poisson map and Riemannian submersion";
        g.push_back(e);
    }
    {
        GalleryEntry e;
        e.id = "product_proj";
        e.is_submersion = true;
        e.text = R"(name product_proj
P {
name r5_product
dim 5
coords x1 x2 x3 x4 x5
pi 1 2 = 1
pi 4 5 = 1
metric 1 1 = 1
metric 2 2 = 1
metric 3 3 = 1
metric 4 4 = 1
metric 5 5 = 1
casimir = x3
base = 0.2, 0.2, 0.2, 0.2, 0.2
box = [-2, 2] x [-2, 2] x [-2, 2] x [-2, 2] x [-2, 2]
}
M {
name r3_pi12_factor
dim 3
coords y1 y2 y3
pi 1 2 = 1
metric 1 1 = 1
metric 2 2 = 1
metric 3 3 = 1
casimir = y3
base = 0.2, 0.2, 0.2
box = [-2, 2] x [-2, 2] x [-2, 2]
}
map 1 = x1
map 2 = x2
map 3 = x3
)";
        e.expected = {{"poisson_map", "pass"}, {"riem_submersion", "pass"},
                      {"eq42", "pass"},        {"eq43", "pass"},
                      {"kernel_containment", "pass"}, {"gradient_related", "pass"},
                      {"horizontal", "pass"}, {"transport_riemann", "pass"}};
        e.reference = "product Poisson structure projected onto its first factor; satisfies the "
                      "kernel-containment condition for transversal-invariance transport";
        g.push_back(e);
    }
    {
        GalleryEntry e;
        e.id = "translation_quotient";
        e.is_submersion = true;
        e.text = R"(name translation_quotient
P {
name r4_pi12
dim 4
coords x1 x2 x3 x4
pi 1 2 = 1
metric 1 1 = 1
metric 2 2 = 1
metric 3 3 = 1
metric 4 4 = 1
J 1 2 = 1
J 2 1 = -1
casimir = x3
casimir = x4
base = 0.25, 0.25, 0.25, 0.25
box = [-2, 2] x [-2, 2] x [-2, 2] x [-2, 2]
}
M {
name r3_quotient
dim 3
coords y1 y2 y3
pi 1 2 = 1
metric 1 1 = 1
metric 2 2 = 1
metric 3 3 = 1
J 1 2 = 1
J 2 1 = -1
casimir = y3
base = 0.25, 0.25, 0.25
box = [-2, 2] x [-2, 2] x [-2, 2]
}
map 1 = x1
map 2 = x2
map 3 = x4
)";
        e.expected = {{"poisson_map", "pass"}, {"riem_submersion", "pass"}, {"eq41", "pass"},
                      {"eq42", "pass"},        {"eq43", "pass"},            {"kernel_containment", "pass"},
                      {"gradient_related", "pass"}, {"horizontal", "pass"}, {"roundtrip", "pass"},
                      {"transport_riemann", "pass"}};
        e.reference = "quotient of R^4 by translations along x3, written as the explicit "
                      "coordinate projection (x1, x2, x4): an isometric Poisson quotient";
        g.push_back(e);
    }
    {
        GalleryEntry e;
        e.id = "cosymplectic_r3";
        e.is_submersion = true;
        e.text = "";  // built programmatically by gallery_submersion
        e.expected = {{"poisson_map", "pass"},   {"riem_submersion", "pass"},
                      {"eq42", "pass"},          {"eq43", "pass"},
                      {"kernel_containment", "pass"}, {"gradient_related", "pass"},
                      {"horizontal", "pass"},    {"transport_riemann", "pass"},
                      {"prop412", "pass"}};
        e.reference = "lift of (R^3, dx^dy, dz) to the symplectic product R^3 x R and its "
                      "projection; the basic cosymplectic example";
        g.push_back(e);
    }
    return g;
}

}  // namespace

const std::vector<GalleryEntry>& gallery_entries() {
    static const std::vector<GalleryEntry> g = build();
    return g;
}

std::vector<std::string> gallery_ids() {
    std::vector<std::string> ids;
    for (const auto& e : gallery_entries()) ids.push_back(e.id);
    return ids;
}

GalleryEntry gallery_get(const std::string& id) {
    std::string base = id;
    std::string param;
    if (auto c = id.find(':'); c != std::string::npos) {
        base = id.substr(0, c);
        param = id.substr(c + 1);
    }
    if (auto s = base.find('/'); s != std::string::npos) base = base.substr(0, s);
    for (const auto& e : gallery_entries()) {
        if (e.id != base) continue;
        if (base == "euclid_rn_rs" && !param.empty()) {
            std::istringstream is(param);
            int n = 0, r = 0, s = 0;
            char comma;
            is >> n >> comma >> r >> comma >> s;
            if (n < 2 || r < 1 || s <= r || s > n)
                throw UnknownEntry(id + " (need n >= 2, 1 <= r < s <= n)");
            GalleryEntry pe = e;
            pe.text = euclid_text(n, r, s);
            return pe;
        }
        return e;
    }
    throw UnknownEntry(id);
}

Structure gallery_structure(const std::string& id) {
    GalleryEntry e = gallery_get(id);
    if (e.is_submersion) throw UnknownEntry(id + " is a submersion spec, not a structure");
    if (auto s = id.find('/'); s != std::string::npos) {
        std::string label = id.substr(s + 1);
        for (const auto& [l, text] : e.variants)
            if (l == label) return load_structure(text);
        throw UnknownEntry(id);
    }
    return load_structure(e.text);
}

SubmersionSpec gallery_submersion(const std::string& id) {
    GalleryEntry e = gallery_get(id);
    if (!e.is_submersion) throw UnknownEntry(id + " is a structure, not a submersion spec");
    if (e.id == "cosymplectic_r3") {
        CosymplecticInput in;
        in.M = load_structure(R"(name r3_cosymplectic
dim 3
coords x y z
pi 1 2 = 1
metric 1 1 = 1
metric 2 2 = 1
metric 3 3 = 1
J 1 2 = 1
J 2 1 = -1
casimir = z
base = 0.25, 0.25, 0.25
box = [-2, 2] x [-2, 2] x [-2, 2]
)");
        const int n = 3;
        in.omega.assign(n, std::vector<ExprPtr>(n));
        in.omega[0][1] = e_const(1.0);
        in.omega[1][0] = e_const(-1.0);
        in.eta.assign(n, nullptr);
        in.eta[2] = e_const(1.0);
        return cosymplectic_lift(in).sub;
    }
    return parse_submersion(e.text, [](const std::string& gid) { return gallery_structure(gid); });
}

}  // namespace poissonlab

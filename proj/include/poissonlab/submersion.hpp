#pragma once
#include <functional>

#include "poissonlab/connections.hpp"

namespace poissonlab {

// A structure-preserving surjective submersion candidate t: P -> M given by
// expression map components over the P chart.
struct SubmersionSpec {
    std::string name;
    Structure P;
    Structure M;
    std::vector<ExprPtr> map;  // n_M components

    // Jacobian (dt)^a_i = d_i t^a at p, full-rank checked against eps.
    Mat jacobian(const Point& p) const;
    Point push(const Point& p) const;
};

using GalleryResolver = std::function<Structure(const std::string&)>;
SubmersionSpec parse_submersion(const std::string& text, const GalleryResolver& resolver);

// max_{a<b} |pi_P(t*dy^a, t*dy^b)(p) - pi_M^{ab}(t(p))|
double poisson_map_defect(const SubmersionSpec& sub, const Point& p);

// max_{a<=b} |<t*dy^a, t*dy^b>_P(p) - g_M^{ab}(t(p))| (dual form of Def 4.1)
double riem_submersion_defect(const SubmersionSpec& sub, const Point& p);

struct PullbackDefects {
    double eq42 = 0.0;            // <nabla^{t*a}(t*b), t*c>_P = t*<nabla^a b, c>_M
    double eq43 = 0.0;            // pi_P(nabla^{t*a}(t*b), t*c) = t* pi_M(nabla^a b, c)
    double eq41 = -1.0;           // J slot; -1 when either J is missing
    double kernel_containment = 0.0;  // max |pi_P#(t* gamma)| over Ker pi_M# basis
    double gradient_related = 0.0;    // |dt(grad_P(f o t)) - grad_M f| for f in coords
};
PullbackDefects pullback_identity_defects(const SubmersionSpec& sub, const Point& p);

// J_M = -flat_M o dt o J'_P o sharp_P o dt* with the tangent-level
// J'_P = -sharp o J_P o flat; acts on M-covectors.
Mat induced_J(const SubmersionSpec& sub, const Point& p);

// <(t*dy^a)#_P, Z>_P over a basis Z of Ker dt (Lemma 4.2(ii) residual).
double horizontal_defect(const SubmersionSpec& sub, const Point& p);

// |J_P(t*dy^a) - t*(J_M dy^a)| componentwise (Prop 4.4 round trip).
double basic_form_roundtrip_defect(const SubmersionSpec& sub, const Point& p);

struct CosymplecticInput {
    Structure M;                              // carries pi_M, cometric, optional J
    std::vector<std::vector<ExprPtr>> omega;  // full skew matrix of the 2-form
    std::vector<ExprPtr> eta;                 // the 1-form
};

struct CosymplecticLift {
    SubmersionSpec sub;      // projection P = M x R -> M
    double closedness;       // max |d omega|, |d eta| defect over samples
    double prop412_im;       // Im(J_M) subset Ker(eta)
    double prop412_sharp;    // J_M(sharp eta) = 0
    double prop412_square;   // (J_M^2 + Id)X = eta(X) sharp eta
};

CosymplecticLift cosymplectic_lift(const CosymplecticInput& in, int samples = 16,
                                   std::uint64_t seed = 1, double tol = 1e-8);

}  // namespace poissonlab

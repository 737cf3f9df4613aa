#pragma once
#include <cstdint>
#include <string>

#include "poissonlab/foliation.hpp"

namespace poissonlab {

struct CheckRecord {
    std::string id;
    double max_defect = 0.0;
    Point worst_point;
    double tolerance = 0.0;
    bool pass = false;
    std::string status = "ran";  // ran | skipped-no-casimirs | skipped-no-J | derived | error
    int points_evaluated = 0;
    int points_skipped = 0;
    std::string note;
};

struct DefectReport {
    std::string structure;
    std::uint64_t seed = 0;
    int samples = 0;
    double tolerance = 0.0;
    std::vector<CheckRecord> checks;
    std::vector<std::string> conventions;

    const CheckRecord* find(const std::string& id) const {
        for (const auto& c : checks)
            if (c.id == id) return &c;
        return nullptr;
    }
};

// Conventions block shared by every report.
std::vector<std::string> convention_notes();

// Runs the named checks (all when which is null) over `samples` admissible
// points; deterministic for fixed (structure, seed, samples, tol).
DefectReport classify(const Structure& S, int samples, std::uint64_t seed, double tol,
                      const std::vector<std::string>* which = nullptr);

// Pivot-frozen orthonormal covector field bases adapted to the splitting:
// the G-orthocomplement of Ker pi# (index 0..rank-1) and the kernel itself
// (index 0..corank-1).  Fields re-evaluate the construction at any point.
JetCoField complement_cofield(const Structure& S, int which,
                              double eps_rank = kDefaultEpsRank);
JetCoField kernel_cofield(const Structure& S, int which, double eps_rank = kDefaultEpsRank);

// Max G-norm of the Ker pi#-component of Koszul brackets of the
// pivot-frozen complement coframe basis.
double involutivity_defect(const Structure& S, const Point& p,
                           double eps_rank = kDefaultEpsRank);

// Max componentwise |L_{N_b} pi| over the pivot-frozen orthonormal normal
// frame.
double strong_transversal_defect(const Structure& S, const Point& p,
                                 double eps_rank = kDefaultEpsRank);

// H = sum_a pr_perp(nabla_{E_a} E_a) over the orthonormal leaf frame.
std::vector<double> mean_curvature(const Structure& S, const Point& p,
                                   double eps_rank = kDefaultEpsRank);

// Max over coordinate Hamiltonian fields X_f of |(L_{X_f} g_perp)(N_a, N_b)|,
// with g_perp the normal block of g_cov through the jet-differentiated
// orthogonal projector.
double bundle_like_defect(const Structure& S, const Point& p,
                          double eps_rank = kDefaultEpsRank);

// Componentwise max |L_{grad f} pi| over declared casimirs.
double casimir_invariance_defect(const Structure& S, const Point& p);

// Compatibility + f-structure defect of the declared J at p.
double almost_kp_defect(const Structure& S, const Point& p);

std::vector<std::string> all_check_ids();

}  // namespace poissonlab

#pragma once
#include "poissonlab/classify.hpp"
#include "poissonlab/gallery.hpp"

namespace poissonlab {

struct IdentityResult {
    std::string id;
    double max_defect = 0.0;
    Point worst_point;
    double tolerance = 0.0;
    bool pass = false;
    bool assertive = true;  // false: report-only consistency line
    std::string note;
};

// Identity suites: the coordinate-free relations every structure must
// satisfy (Lie-derivative lemmas, connection axioms, parallelism bridges),
// evaluated with seeded random fields over sampled points.
std::vector<IdentityResult> run_identities(const Structure& S, int samples, std::uint64_t seed,
                                           double tol);

struct SubmersionReport {
    std::string name;
    std::uint64_t seed = 0;
    int samples = 0;
    std::vector<IdentityResult> defects;
};

SubmersionReport run_submersion_suite(const SubmersionSpec& sub, int samples, std::uint64_t seed,
                                      double tol);

// JSON serialization (deterministic field order; wall time omitted when
// reproducible).
std::string report_to_json(const DefectReport& rep, const std::string& command,
                           bool reproducible, double wall_ms);
std::string identities_to_json(const std::string& structure, const std::vector<IdentityResult>& rs,
                               const std::string& command, std::uint64_t seed, int samples,
                               bool reproducible, double wall_ms);
std::string submersion_to_json(const SubmersionReport& rep, const std::string& command,
                               bool reproducible, double wall_ms);

// Static SVG: orthographic projection of a trace onto a coordinate plane.
std::string trace_to_svg(const Structure& S, const LeafTrace& tr, int axis_x, int axis_y,
                         const std::string& title);

}  // namespace poissonlab

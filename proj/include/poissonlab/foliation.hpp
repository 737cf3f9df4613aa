#pragma once
#include "poissonlab/fields.hpp"

namespace poissonlab {

// Orthonormal frames adapted to the symplectic foliation at a point, built
// over any scalar so the same code yields the frame's derivatives when run
// on jets.  Pivot choices compare underlying values (frozen at the point).
template <class S>
struct FrameT {
    std::vector<std::vector<S>> tangent;    // E_a, g_cov-orthonormal, span Im pi#
    std::vector<double> tangent_signs;      // <E_a, E_a>
    std::vector<std::vector<S>> normal;     // N_b
    std::vector<double> normal_signs;
    std::vector<std::vector<S>> beta;       // covectors with pi# beta_a = E_a
    std::vector<std::vector<S>> kernel;     // orthonormalized kernel covectors
    std::vector<double> kernel_signs;
    std::vector<int> pivot_sequence;        // coframe columns picked for the tangent frame
};

struct LeafFrame {
    Point p;
    FrameT<double> frame;
    int rank = 0;
};

// forced_pivots (test hook): coframe column order to use for the tangent
// frame instead of the greedy largest-residual choice.
LeafFrame leaf_frame(const Structure& S, const Point& p, double eps_rank = kDefaultEpsRank,
                     const std::vector<int>* forced_pivots = nullptr);

FrameT<Jet> leaf_frame_jets(const Structure& S, const Point& p,
                            double eps_rank = kDefaultEpsRank);

// Leaf metric of the symplectic foliation: <(pi_F#)^{-1} X, (pi_F#)^{-1} Y>
// with the preimages taken in (Ker pi#)^perp.
double leaf_metric_38(const Structure& S, const Point& p, const std::vector<double>& X,
                      const std::vector<double>& Y, double eps_rank = kDefaultEpsRank,
                      const std::vector<int>* forced_pivots = nullptr);

// Leaf symplectic form omega(pi# a, pi# b) = pi(a, b) on leaf-tangent vectors.
double leaf_symplectic(const Structure& S, const Point& p, const std::vector<double>& X,
                       const std::vector<double>& Y, double eps_rank = kDefaultEpsRank,
                       const std::vector<int>* forced_pivots = nullptr);

struct LeafTrace {
    std::vector<double> times;
    std::vector<Point> points;
    std::vector<std::pair<int, double>> schedule;  // (coordinate index, duration)
    std::vector<std::vector<double>> casimir_drift; // per sample row, per casimir
    std::vector<double> max_drift;                  // per casimir
    double step = 0.0;
    std::string method = "rk4";
    bool truncated = false;
    double exit_time = 0.0;
};

// Integrate the piecewise coordinate-Hamiltonian flow dx/dt = X_{x_c}(x)
// with the classical fixed-step 4th-order method; drift is reported, never
// corrected.
LeafTrace trace_leaf(const Structure& S, const Point& p0,
                     const std::vector<std::pair<int, double>>& schedule, double h);

std::string trace_to_csv(const Structure& S, const LeafTrace& t);

}  // namespace poissonlab

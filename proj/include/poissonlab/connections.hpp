#pragma once
#include "poissonlab/structure.hpp"

namespace poissonlab {

// Christoffel symbols of the covariant Levi-Civita connection of
// g_cov = (cometric)^{-1}: Gamma^k_{ij}, symmetric in (i,j).
struct CovariantSymbols {
    int n = 0;
    std::vector<double> g;
    double& at(int k, int i, int j) { return g[(static_cast<std::size_t>(k) * n + i) * n + j]; }
    double at(int k, int i, int j) const { return g[(static_cast<std::size_t>(k) * n + i) * n + j]; }
};

// Symbols of the contravariant Levi-Civita connection:
// nabla^{dx^i} dx^j = Gamma^{ij}_k dx^k.
struct ContravariantSymbols {
    int n = 0;
    std::vector<double> g;
    double& at(int i, int j, int k) { return g[(static_cast<std::size_t>(i) * n + j) * n + k]; }
    double at(int i, int j, int k) const { return g[(static_cast<std::size_t>(i) * n + j) * n + k]; }
};

// Dense 3-index defect tensors, first index the derivative direction.
struct Tensor3 {
    int n = 0;
    std::vector<double> a;
    double& at(int i, int j, int k) { return a[(static_cast<std::size_t>(i) * n + j) * n + k]; }
    double at(int i, int j, int k) const { return a[(static_cast<std::size_t>(i) * n + j) * n + k]; }
    double max_abs() const {
        double r = 0.0;
        for (double x : a) r = std::max(r, std::fabs(x));
        return r;
    }
};

CovariantSymbols covariant_christoffels(const Structure& S, const Point& p);
ContravariantSymbols contravariant_christoffels(const Structure& S, const Point& p);

// (nabla pi)^{i,jk} = pi^{il} d_l pi^{jk} - Gamma^{ij}_m pi^{mk} - Gamma^{ik}_m pi^{jm}
Tensor3 nabla_pi(const Structure& S, const Point& p);

// (nabla J)^{i}_k^{j} = pi^{il} d_l J_k^j + Gamma^{im}_k J_m^j - Gamma^{ij}_m J_k^m.
// With use_canonical, J = g_{ij} pi^{jl} is admitted when it is an
// f-structure at p (|J^3+J| below f_tol), else NotFStructure.
Tensor3 nabla_J(const Structure& S, const Point& p, bool use_canonical = false,
                double f_tol = 1e-8);

// Contravariant Nijenhuis tensor on the coordinate coframe, via the Koszul
// bracket; component (i,j,k) is the k-th component of N(dx^i, dx^j).
Tensor3 nijenhuis(const Structure& S, const Point& p);

// Covariant derivative of omega = -pi^{-1}: (nabla omega)_{i,jk}.
Tensor3 nabla_omega(const Structure& S, const Point& p);

// Canonical J = g_{ij} pi^{jl} over jets (value + derivatives), used by the
// canonical-J path of nabla_J and by gallery construction.
DMat<Jet> canonical_J_jet(const Structure& S, const Point& p);

// Axiom defects of the contravariant connection at p, evaluated on the
// coordinate coframe: metricity and torsion against the Koszul bracket.
struct ConnectionAxiomDefects {
    double metricity;
    double torsion;
};
ConnectionAxiomDefects connection_axiom_defects(const Structure& S, const Point& p);

}  // namespace poissonlab

#pragma once
#include <optional>
#include <vector>

#include "poissonlab/linalg.hpp"

namespace poissonlab {

using Mat = DMat<double>;

// Compatible structures on a single cotangent fibre.  Pi holds pi^{ij},
// G the cometric g^{ij}; Jmat acts on covectors as (J a)_i = J_i^k a_k.
struct LinearTriple {
    int dim = 0;
    Mat Pi;
    Mat G;
    std::optional<Mat> Jmat;
    double g_condition = 0.0;  // estimated condition number of G

    LinearTriple(Mat pi, Mat g, std::optional<Mat> j = std::nullopt);
};

struct Splitting {
    std::vector<std::vector<double>> kernel_basis;      // covectors spanning Ker pi#
    std::vector<std::vector<double>> complement_basis;  // G-orthogonal complement
    std::vector<double> kernel_signs;                   // <k,k>_G of the orthonormalized kernel basis
    std::vector<double> complement_signs;
    int rank = 0;
};

constexpr double kDefaultEpsRank = 1e-10;

// max_{ij} |pi^{ij} - g^{ik} J_k^j|
double compat_defect(const LinearTriple& t);

// A_k^l = (G^{-1})_{km} pi^{ml}; the G-skew map with pi(a,b) = <a, A b>.
Mat canonical_endomorphism(const Mat& Pi, const Mat& G);

struct PolarResult {
    Mat J;    // f-structure, J^3 + J = 0
    Mat G_A;  // cometric for which (Pi, G_A, J) is compatible and J is skew
};

// The Theorem 3.3(iii) construction: polar-decompose the canonical map on the
// complement of Ker pi#, keep G on the kernel, zero the cross blocks.
PolarResult polar_f_structure(const Mat& Pi, const Mat& G, double eps_rank = kDefaultEpsRank);

Splitting kernel_splitting(const Mat& Pi, const Mat& G, double eps_rank = kDefaultEpsRank);

// Cometric with the given blocks in the splitting basis and zero cross
// blocks, expressed in ambient coordinates.
Mat assemble_block_cometric(const Mat& leaf_block, const Mat& transverse_block,
                            const Splitting& s);

double sym_defect(const Mat& m);   // max |m + m^T| (skewness residual)
double asym_defect(const Mat& m);  // max |m - m^T|

}  // namespace poissonlab

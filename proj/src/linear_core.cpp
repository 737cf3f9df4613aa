#include "poissonlab/linear_core.hpp"

#include <Eigen/Dense>

namespace poissonlab {

namespace {

Eigen::MatrixXd to_eigen(const Mat& m) {
    Eigen::MatrixXd r(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r(i, j) = m(i, j);
    return r;
}

Mat from_eigen(const Eigen::MatrixXd& m) {
    Mat r(static_cast<int>(m.rows()), static_cast<int>(m.cols()), 0.0);
    for (int i = 0; i < r.rows; ++i)
        for (int j = 0; j < r.cols; ++j) r(i, j) = m(i, j);
    return r;
}

}  // namespace

double sym_defect(const Mat& m) {
    double r = 0.0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r = std::max(r, std::fabs(m(i, j) + m(j, i)));
    return r;
}

double asym_defect(const Mat& m) {
    double r = 0.0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r = std::max(r, std::fabs(m(i, j) - m(j, i)));
    return r;
}

LinearTriple::LinearTriple(Mat pi, Mat g, std::optional<Mat> j)
    : dim(pi.rows), Pi(std::move(pi)), G(std::move(g)), Jmat(std::move(j)) {
    double scale = std::max(max_abs_value(Pi), 1.0);
    if (sym_defect(Pi) > 1e-12 * scale)
        throw ValidationError("pi_skew", {}, sym_defect(Pi), "Pi is not skew-symmetric");
    if (asym_defect(G) > 1e-12 * std::max(max_abs_value(G), 1.0))
        throw ValidationError("g_sym", {}, asym_defect(G), "G is not symmetric");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(G));
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    double smax = svd.singularValues()(0);
    if (smin <= 0.0 || smax / smin > 1e14) throw SingularG("cometric not invertible");
    g_condition = smax / smin;
}

double compat_defect(const LinearTriple& t) {
    if (!t.Jmat) throw MissingJ();
    Mat gj = matmul(t.G, *t.Jmat);
    double r = 0.0;
    for (int i = 0; i < t.dim; ++i)
        for (int j = 0; j < t.dim; ++j) r = std::max(r, std::fabs(t.Pi(i, j) - gj(i, j)));
    return r;
}

Mat canonical_endomorphism(const Mat& Pi, const Mat& G) {
    return matmul(inverse_gj(G), Pi);
}

Splitting kernel_splitting(const Mat& Pi, const Mat& G, double eps_rank) {
    const int n = Pi.rows;
    Eigen::MatrixXd P = to_eigen(Pi);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeFullV);
    double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    double tol = eps_rank * (smax == 0.0 ? 1.0 : smax);

    Splitting s;
    std::vector<std::vector<double>> kernel;
    for (int k = 0; k < n; ++k) {
        double sv = k < svd.singularValues().size() ? svd.singularValues()(k) : 0.0;
        if (sv <= tol) {
            std::vector<double> v(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = svd.matrixV()(i, k);
            kernel.push_back(std::move(v));
        }
    }
    s.rank = n - static_cast<int>(kernel.size());

    auto inner = [&G](const std::vector<double>& u, const std::vector<double>& v) {
        double acc = 0.0;
        for (int i = 0; i < G.rows; ++i)
            for (int j = 0; j < G.cols; ++j)
                acc += u[static_cast<std::size_t>(i)] * G(i, j) * v[static_cast<std::size_t>(j)];
        return acc;
    };

    if (!kernel.empty()) gram_schmidt(kernel, inner, &s.kernel_signs);
    s.kernel_basis = kernel;

    // complement = G-orthocomplement of the kernel: project the coordinate
    // coframe and orthonormalize, picking the largest residual first.
    std::vector<std::vector<double>> cand;
    for (int c = 0; c < n; ++c) {
        std::vector<double> v(static_cast<std::size_t>(n), 0.0);
        v[static_cast<std::size_t>(c)] = 1.0;
        for (std::size_t k = 0; k < kernel.size(); ++k) {
            double proj = inner(v, kernel[k]) * s.kernel_signs[k];
            for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= proj * kernel[k][static_cast<std::size_t>(i)];
        }
        cand.push_back(std::move(v));
    }
    // greedy selection of s.rank independent residuals
    std::vector<std::vector<double>> comp;
    std::vector<double> comp_signs;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (int step = 0; step < s.rank; ++step) {
        int pick = -1;
        double best = -1.0;
        std::vector<double> bestw;
        for (int c = 0; c < n; ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            std::vector<double> w = cand[static_cast<std::size_t>(c)];
            for (std::size_t k = 0; k < comp.size(); ++k) {
                double proj = inner(w, comp[k]) * comp_signs[k];
                for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] -= proj * comp[k][static_cast<std::size_t>(i)];
            }
            double n2 = std::fabs(inner(w, w));
            if (n2 > best) { best = n2; pick = c; bestw = std::move(w); }
        }
        if (pick < 0 || best == 0.0) throw SingularG("complement construction degenerate");
        used[static_cast<std::size_t>(pick)] = true;
        double n2 = inner(bestw, bestw);
        double sign = n2 > 0.0 ? 1.0 : -1.0;
        double norm = std::sqrt(std::fabs(n2));
        for (double& x : bestw) x /= norm;
        comp.push_back(std::move(bestw));
        comp_signs.push_back(sign);
    }
    s.complement_basis = std::move(comp);
    s.complement_signs = std::move(comp_signs);
    return s;
}

PolarResult polar_f_structure(const Mat& Pi, const Mat& G, double eps_rank) {
    const int n = Pi.rows;
    Splitting s = kernel_splitting(Pi, G, eps_rank);
    const int r = s.rank;
    const int l = n - r;
    for (double sg : s.complement_signs)
        if (sg < 0.0) throw IndefiniteRestriction();

    Mat A = canonical_endomorphism(Pi, G);

    // basis matrix B = [kernel | complement], columns are covectors
    Eigen::MatrixXd B(n, n);
    for (int k = 0; k < l; ++k)
        for (int i = 0; i < n; ++i) B(i, k) = s.kernel_basis[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
    for (int k = 0; k < r; ++k)
        for (int i = 0; i < n; ++i) B(i, l + k) = s.complement_basis[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];

    Eigen::MatrixXd Ae = to_eigen(A);
    Eigen::MatrixXd Ge = to_eigen(G);
    Eigen::MatrixXd Binv = B.inverse();

    // A in the splitting basis; the complement block is r x r
    Eigen::MatrixXd Ab = Binv * Ae * B;
    Eigen::MatrixXd A1 = Ab.bottomRightCorner(r, r);

    Eigen::MatrixXd J1(r, r), absA1(r, r);
    if (r > 0) {
        // |A1| via the eigendecomposition of the self-adjoint, positive -A1^2
        Eigen::MatrixXd S = -(A1 * A1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
        for (int k = 0; k < r; ++k)
            if (es.eigenvalues()(k) <= 0.0)
                throw IndefiniteRestriction("-A1^2 is not positive definite on the complement");
        Eigen::VectorXd root = es.eigenvalues().cwiseSqrt();
        absA1 = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
        J1 = absA1.inverse() * A1;
    }

    Eigen::MatrixXd Jb = Eigen::MatrixXd::Zero(n, n);
    if (r > 0) Jb.bottomRightCorner(r, r) = J1;
    Eigen::MatrixXd J = B * Jb * Binv;

    // G_A as a bilinear form on covectors: G on the kernel block, <.,|A1|.>
    // on the complement, zero cross blocks.
    Eigen::MatrixXd GA_b = Eigen::MatrixXd::Zero(n, n);
    for (int p = 0; p < l; ++p)
        for (int q = 0; q < l; ++q) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    acc += B(i, p) * Ge(i, j) * B(j, q);
            GA_b(p, q) = acc;
        }
    if (r > 0) {
        // complement basis is G-orthonormal, so <c_p, |A1| c_q> = |A1|_{pq}
        GA_b.bottomRightCorner(r, r) = absA1;
    }
    Eigen::MatrixXd GA = Binv.transpose() * GA_b * Binv;

    PolarResult res;
    res.J = from_eigen(J);
    res.G_A = from_eigen(0.5 * (GA + GA.transpose()));
    return res;
}

Mat assemble_block_cometric(const Mat& leaf_block, const Mat& transverse_block,
                            const Splitting& s) {
    const int r = s.rank;
    const int l = static_cast<int>(s.kernel_basis.size());
    const int n = r + l;
    if (leaf_block.rows != r || leaf_block.cols != r)
        throw DimensionMismatch("leaf block must be rank x rank");
    if (transverse_block.rows != l || transverse_block.cols != l)
        throw DimensionMismatch("transverse block must be corank x corank");
    if (asym_defect(leaf_block) > 1e-12 * std::max(1.0, max_abs_value(leaf_block)) ||
        asym_defect(transverse_block) > 1e-12 * std::max(1.0, max_abs_value(transverse_block)))
        throw ValidationError("block_sym", {}, 0.0, "blocks must be symmetric");

    Eigen::MatrixXd B(n, n);
    for (int k = 0; k < l; ++k)
        for (int i = 0; i < n; ++i) B(i, k) = s.kernel_basis[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
    for (int k = 0; k < r; ++k)
        for (int i = 0; i < n; ++i) B(i, l + k) = s.complement_basis[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
    Eigen::MatrixXd blocks = Eigen::MatrixXd::Zero(n, n);
    for (int p = 0; p < l; ++p)
        for (int q = 0; q < l; ++q) blocks(p, q) = transverse_block(p, q);
    for (int p = 0; p < r; ++p)
        for (int q = 0; q < r; ++q) blocks(l + p, l + q) = leaf_block(p, q);
    Eigen::MatrixXd Binv = B.inverse();
    Eigen::MatrixXd GM = Binv.transpose() * blocks * Binv;
    return from_eigen(0.5 * (GM + GM.transpose()));
}

}  // namespace poissonlab

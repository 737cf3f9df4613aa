#pragma once
#include <cassert>
#include <cstddef>
#include <vector>

#include "poissonlab/jet.hpp"

namespace poissonlab {

// Dense row-major matrix over an arbitrary differentiable scalar.  Pointwise
// constructions (frames, projectors, inverse metrics) run over Jet entries so
// their derivatives come out of the same code path; pivot choices always
// compare the underlying double values, which freezes the pivot sequence at
// the evaluation point.
template <class S>
struct DMat {
    int rows = 0, cols = 0;
    std::vector<S> a;

    DMat() = default;
    DMat(int r, int c, S fill) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, fill) {}

    S& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const S& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

template <class S>
DMat<S> dmat_zero_like(const S& proto, int r, int c) {
    return DMat<S>(r, c, proto * 0.0);
}

template <class S>
DMat<S> dmat_identity_like(const S& proto, int n) {
    DMat<S> m = dmat_zero_like(proto, n, n);
    for (int i = 0; i < n; ++i) m(i, i) = proto * 0.0 + 1.0;
    return m;
}

template <class S>
DMat<S> matmul(const DMat<S>& x, const DMat<S>& y) {
    assert(x.cols == y.rows);
    DMat<S> r = dmat_zero_like(x.a[0], x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const S& xik = x(i, k);
            for (int j = 0; j < y.cols; ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

template <class S>
DMat<S> transpose(const DMat<S>& x) {
    DMat<S> r = dmat_zero_like(x.a[0], x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r(j, i) = x(i, j);
    return r;
}

template <class S>
std::vector<S> matvec(const DMat<S>& x, const std::vector<S>& v) {
    assert(static_cast<int>(v.size()) == x.cols);
    std::vector<S> r(static_cast<std::size_t>(x.rows), x.a[0] * 0.0);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r[static_cast<std::size_t>(i)] += x(i, j) * v[static_cast<std::size_t>(j)];
    return r;
}

template <class S>
S dot(const std::vector<S>& u, const DMat<S>& m, const std::vector<S>& v) {
    S acc = m.a[0] * 0.0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) acc += u[static_cast<std::size_t>(i)] * m(i, j) * v[static_cast<std::size_t>(j)];
    return acc;
}

// Gauss-Jordan with partial pivoting on |value|.
template <class S>
DMat<S> inverse_gj(DMat<S> m) {
    const int n = m.rows;
    assert(m.cols == n);
    DMat<S> inv = dmat_identity_like(m.a[0], n);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::fabs(value_of(m(col, col)));
        for (int i = col + 1; i < n; ++i) {
            double cand = std::fabs(value_of(m(i, col)));
            if (cand > best) { best = cand; piv = i; }
        }
        if (best == 0.0) throw SingularG("matrix is singular");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        S d = m(col, col);
        for (int j = 0; j < n; ++j) {
            m(col, j) = m(col, j) / d;
            inv(col, j) = inv(col, j) / d;
        }
        for (int i = 0; i < n; ++i) {
            if (i == col) continue;
            S f = m(i, col);
            if (value_of(f) == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                m(i, j) -= f * m(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

template <class S>
S determinant(DMat<S> m) {
    const int n = m.rows;
    S det = m.a[0] * 0.0 + 1.0;
    double sign = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::fabs(value_of(m(col, col)));
        for (int i = col + 1; i < n; ++i) {
            double cand = std::fabs(value_of(m(i, col)));
            if (cand > best) { best = cand; piv = i; }
        }
        if (best == 0.0) return m.a[0] * 0.0;
        if (piv != col) {
            sign = -sign;
            for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
        }
        det *= m(col, col);
        for (int i = col + 1; i < n; ++i) {
            S f = m(i, col) / m(col, col);
            for (int j = col; j < n; ++j) m(i, j) -= f * m(col, j);
        }
    }
    return det * sign;
}

// Pivot plan for a null-space computation: the pivot (row, column) sequence
// chosen at the evaluation point, reusable over jet scalars so the resulting
// kernel basis is a differentiable local frame.
struct NullPlan {
    std::vector<int> pivot_rows;
    std::vector<int> pivot_cols;
    std::vector<int> free_cols;
};

template <class S>
NullPlan plan_null_space(const DMat<S>& m0, double eps_rel) {
    DMat<S> m = m0;
    const int rows = m.rows, cols = m.cols;
    double scale = 0.0;
    for (const S& x : m.a) scale = std::max(scale, std::fabs(value_of(x)));
    double tol = eps_rel * (scale == 0.0 ? 1.0 : scale);
    NullPlan plan;
    std::vector<bool> row_used(static_cast<std::size_t>(rows), false);
    std::vector<bool> col_used(static_cast<std::size_t>(cols), false);
    for (;;) {
        int bi = -1, bj = -1;
        double best = tol;
        for (int i = 0; i < rows; ++i) {
            if (row_used[static_cast<std::size_t>(i)]) continue;
            for (int j = 0; j < cols; ++j) {
                if (col_used[static_cast<std::size_t>(j)]) continue;
                double cand = std::fabs(value_of(m(i, j)));
                if (cand > best) { best = cand; bi = i; bj = j; }
            }
        }
        if (bi < 0) break;
        plan.pivot_rows.push_back(bi);
        plan.pivot_cols.push_back(bj);
        row_used[static_cast<std::size_t>(bi)] = true;
        col_used[static_cast<std::size_t>(bj)] = true;
        for (int i = 0; i < rows; ++i) {
            if (i == bi) continue;
            S f = m(i, bj) / m(bi, bj);
            for (int j = 0; j < cols; ++j) m(i, j) -= f * m(bi, j);
        }
    }
    for (int j = 0; j < cols; ++j)
        if (!col_used[static_cast<std::size_t>(j)]) plan.free_cols.push_back(j);
    return plan;
}

// Null-space basis of m following a fixed pivot plan; one basis vector per
// free column.  Entries are expressed in the original column order.
template <class S>
std::vector<std::vector<S>> null_space_with_plan(DMat<S> m, const NullPlan& plan) {
    const int cols = m.cols;
    const int r = static_cast<int>(plan.pivot_rows.size());
    for (int k = 0; k < r; ++k) {
        int bi = plan.pivot_rows[static_cast<std::size_t>(k)];
        int bj = plan.pivot_cols[static_cast<std::size_t>(k)];
        S d = m(bi, bj);
        if (value_of(d) == 0.0) throw SingularG("pivot plan is stale at this point");
        for (int j = 0; j < cols; ++j) m(bi, j) = m(bi, j) / d;
        for (int i = 0; i < m.rows; ++i) {
            if (i == bi) continue;
            S f = m(i, bj);
            for (int j = 0; j < cols; ++j) m(i, j) -= f * m(bi, j);
        }
    }
    std::vector<std::vector<S>> basis;
    for (int fc : plan.free_cols) {
        std::vector<S> v(static_cast<std::size_t>(cols), m.a[0] * 0.0);
        v[static_cast<std::size_t>(fc)] = m.a[0] * 0.0 + 1.0;
        for (int k = 0; k < r; ++k) {
            int bi = plan.pivot_rows[static_cast<std::size_t>(k)];
            int bj = plan.pivot_cols[static_cast<std::size_t>(k)];
            v[static_cast<std::size_t>(bj)] = -m(bi, fc);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

// Gram-Schmidt against an arbitrary (possibly indefinite) inner product.
// Pivoting greedily by |<v,v>| unless an explicit order is supplied; returns
// the orthonormalized vectors and the signs <e,e> = +/-1.
template <class S, class InnerFn>
void gram_schmidt(std::vector<std::vector<S>>& vecs, InnerFn inner,
                  std::vector<double>* signs_out,
                  const std::vector<int>* forced_order = nullptr) {
    const std::size_t m = vecs.size();
    std::vector<std::vector<S>> out;
    std::vector<double> signs;
    std::vector<bool> used(m, false);
    for (std::size_t step = 0; step < m; ++step) {
        // orthogonalize all remaining vectors against what we have
        std::size_t pick = m;
        if (forced_order) {
            pick = static_cast<std::size_t>((*forced_order)[step]);
        } else {
            double best = -1.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (used[i]) continue;
                std::vector<S> w = vecs[i];
                for (std::size_t k = 0; k < out.size(); ++k) {
                    S proj = inner(w, out[k]) * signs[k];
                    for (std::size_t c = 0; c < w.size(); ++c) w[c] -= proj * out[k][c];
                }
                double norm2 = std::fabs(value_of(inner(w, w)));
                if (norm2 > best) { best = norm2; pick = i; }
            }
        }
        used[pick] = true;
        std::vector<S> w = vecs[pick];
        for (std::size_t k = 0; k < out.size(); ++k) {
            S proj = inner(w, out[k]) * signs[k];
            for (std::size_t c = 0; c < w.size(); ++c) w[c] -= proj * out[k][c];
        }
        S n2 = inner(w, w);
        double n2v = value_of(n2);
        if (n2v == 0.0) throw SingularG("degenerate vector in Gram-Schmidt");
        double sign = n2v > 0.0 ? 1.0 : -1.0;
        S norm = sqrt(n2 * sign);
        for (auto& c : w) c = c / norm;
        out.push_back(std::move(w));
        signs.push_back(sign);
    }
    vecs = std::move(out);
    if (signs_out) *signs_out = signs;
}

template <class S>
double max_abs_value(const DMat<S>& m) {
    double r = 0.0;
    for (const S& x : m.a) r = std::max(r, std::fabs(value_of(x)));
    return r;
}

}  // namespace poissonlab

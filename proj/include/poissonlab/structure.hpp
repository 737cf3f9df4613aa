#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poissonlab/expr.hpp"
#include "poissonlab/linalg.hpp"
#include "poissonlab/linear_core.hpp"

namespace poissonlab {

using Point = std::vector<double>;

struct Box {
    std::vector<std::pair<double, double>> ranges;
    bool contains(const Point& p) const {
        for (std::size_t i = 0; i < ranges.size(); ++i)
            if (p[i] < ranges[i].first || p[i] > ranges[i].second) return false;
        return true;
    }
};

// Deterministic 64-bit generator (splitmix64); bit-stable across platforms,
// so seeded reports reproduce exactly.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
};

// A named chart with expression-valued component fields.  pi is stored as its
// strict upper triangle and the cometric as its upper triangle, so skewness
// and symmetry hold identically.
struct Structure {
    std::string name;
    int n = 0;
    std::vector<std::string> coords;
    std::map<std::pair<int, int>, ExprPtr> pi_upper;      // 0-based, i < j
    std::map<std::pair<int, int>, ExprPtr> metric_upper;  // 0-based, i <= j, cometric g^{ij}
    std::optional<std::vector<std::vector<ExprPtr>>> Jfield;
    std::vector<ExprPtr> casimirs;
    Point base;
    Box box;
    ExprPtr exclude;  // keep points where exclude > 0; null keeps everything
    std::pair<int, int> signature{0, 0};
    bool allow_non_poisson = false;
    int base_rank = 0;
    double g_condition_at_base = 0.0;

    template <class S>
    DMat<S> pi_at(std::span<const S> x) const {
        DMat<S> m = dmat_zero_like(x[0], n, n);
        for (const auto& [ij, e] : pi_upper) {
            S v = eval_expr<S>(*e, x);
            m(ij.first, ij.second) = v;
            m(ij.second, ij.first) = -v;
        }
        return m;
    }
    template <class S>
    DMat<S> cometric_at(std::span<const S> x) const {
        DMat<S> m = dmat_zero_like(x[0], n, n);
        for (const auto& [ij, e] : metric_upper) {
            S v = eval_expr<S>(*e, x);
            m(ij.first, ij.second) = v;
            if (ij.first != ij.second) m(ij.second, ij.first) = v;
        }
        return m;
    }
    template <class S>
    DMat<S> J_at(std::span<const S> x) const {
        if (!Jfield) throw MissingJ();
        DMat<S> m = dmat_zero_like(x[0], n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if ((*Jfield)[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                    m(i, j) = eval_expr<S>(*(*Jfield)[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], x);
        return m;
    }

    std::vector<Jet> jet_coords(const Point& p) const;

    Mat pi_value(const Point& p) const;
    Mat cometric_value(const Point& p) const;
    Mat J_value(const Point& p) const;
    DMat<Jet> pi_jet(const Point& p) const;
    DMat<Jet> cometric_jet(const Point& p) const;
    DMat<Jet> J_jet(const Point& p) const;

    bool point_admissible(const Point& p) const;
    int rank_at(const Point& p, double eps_rank = kDefaultEpsRank) const;
};

// Seeded uniform sampler over the validity box with rejection of the
// excluded locus.
struct Sampler {
    const Structure& S;
    SplitMix64 rng;
    Sampler(const Structure& s, std::uint64_t seed) : S(s), rng(seed) {}
    Point next();
};

Structure load_structure(const std::string& text, bool allow_non_poisson = false);
std::string structure_to_text(const Structure& S);

// Shared validation used by load_structure; throws ValidationError.
void validate_structure(Structure& S, bool allow_non_poisson);

}  // namespace poissonlab

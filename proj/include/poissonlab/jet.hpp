#pragma once
#include <cmath>
#include <cstddef>
#include <vector>

#include "poissonlab/errors.hpp"

namespace poissonlab {

// First-order forward-mode scalar: a value together with its partial
// derivatives with respect to the chart coordinates.  The template parameter
// is the underlying scalar, so JetT<Jet> gives exact second derivatives
// where a construction needs them (pulled-back coframes of a submersion).
template <class T>
class JetT {
public:
    JetT() : v_(0.0) {}
    JetT(T value, std::size_t dim) : v_(std::move(value)), d_(dim, zero_like(v_)) {}
    JetT(T value, std::vector<T> partials) : v_(std::move(value)), d_(std::move(partials)) {}

    static JetT constant(T value, std::size_t dim) { return JetT(std::move(value), dim); }
    static JetT coordinate(T value, std::size_t dim, std::size_t k) {
        JetT j(std::move(value), dim);
        j.d_[k] = one_like(j.v_);
        return j;
    }

    const T& value() const { return v_; }
    const std::vector<T>& partials() const { return d_; }
    std::size_t dim() const { return d_.size(); }

    JetT operator-() const {
        JetT r(-v_, d_.size());
        for (std::size_t i = 0; i < d_.size(); ++i) r.d_[i] = -d_[i];
        return r;
    }

    friend JetT operator+(const JetT& a, const JetT& b) {
        JetT r(a.v_ + b.v_, a.d_.size());
        for (std::size_t i = 0; i < r.d_.size(); ++i) r.d_[i] = a.d_[i] + b.d_[i];
        return r;
    }
    friend JetT operator-(const JetT& a, const JetT& b) {
        JetT r(a.v_ - b.v_, a.d_.size());
        for (std::size_t i = 0; i < r.d_.size(); ++i) r.d_[i] = a.d_[i] - b.d_[i];
        return r;
    }
    friend JetT operator*(const JetT& a, const JetT& b) {
        JetT r(a.v_ * b.v_, a.d_.size());
        for (std::size_t i = 0; i < r.d_.size(); ++i)
            r.d_[i] = a.d_[i] * b.v_ + a.v_ * b.d_[i];
        return r;
    }
    friend JetT operator/(const JetT& a, const JetT& b) {
        if (scalar_value(b.v_) == 0.0) throw DomainError("division by zero");
        T inv = one_like(b.v_) / b.v_;
        JetT r(a.v_ * inv, a.d_.size());
        for (std::size_t i = 0; i < r.d_.size(); ++i)
            r.d_[i] = (a.d_[i] - a.v_ * inv * b.d_[i]) * inv;
        return r;
    }

    friend JetT operator+(const JetT& a, double c) { JetT r = a; r.v_ = r.v_ + c; return r; }
    friend JetT operator+(double c, const JetT& a) { return a + c; }
    friend JetT operator-(const JetT& a, double c) { JetT r = a; r.v_ = r.v_ - c; return r; }
    friend JetT operator-(double c, const JetT& a) { return (-a) + c; }
    friend JetT operator*(const JetT& a, double c) {
        JetT r(a.v_ * c, a.d_.size());
        for (std::size_t i = 0; i < r.d_.size(); ++i) r.d_[i] = a.d_[i] * c;
        return r;
    }
    friend JetT operator*(double c, const JetT& a) { return a * c; }
    friend JetT operator/(const JetT& a, double c) {
        if (c == 0.0) throw DomainError("division by zero");
        return a * (1.0 / c);
    }

    JetT& operator+=(const JetT& b) { *this = *this + b; return *this; }
    JetT& operator-=(const JetT& b) { *this = *this - b; return *this; }
    JetT& operator*=(const JetT& b) { *this = *this * b; return *this; }

    static T zero_like(const T& proto);
    static T one_like(const T& proto);
    static double scalar_value(const T& x);

private:
    T v_;
    std::vector<T> d_;

    template <class U> friend class JetT;
    template <class U> friend JetT<U> chain(const JetT<U>&, U, U);
};

using Jet = JetT<double>;
using Jet2 = JetT<Jet>;

inline double value_of(double x) { return x; }
template <class T>
double value_of(const JetT<T>& j) { return value_of(j.value()); }

template <> inline double JetT<double>::zero_like(const double&) { return 0.0; }
template <> inline double JetT<double>::one_like(const double&) { return 1.0; }
template <> inline double JetT<double>::scalar_value(const double& x) { return x; }

template <> inline Jet JetT<Jet>::zero_like(const Jet& proto) { return Jet(0.0, proto.dim()); }
template <> inline Jet JetT<Jet>::one_like(const Jet& proto) { return Jet(1.0, proto.dim()); }
template <> inline double JetT<Jet>::scalar_value(const Jet& x) { return value_of(x); }

// value f(u) with derivative fp = f'(u); propagates partials by the chain rule.
template <class T>
JetT<T> chain(const JetT<T>& u, T fval, T fprime) {
    JetT<T> r(std::move(fval), u.partials().size());
    for (std::size_t i = 0; i < r.d_.size(); ++i) r.d_[i] = fprime * u.partials()[i];
    return r;
}

inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) {
    if (x <= 0.0) throw DomainError("log of non-positive value");
    return std::log(x);
}
inline double sqrt(double x) {
    if (x < 0.0) throw DomainError("sqrt of negative value");
    return std::sqrt(x);
}
inline double abs(double x) { return std::fabs(x); }

template <class T>
JetT<T> sin(const JetT<T>& u) { return chain(u, sin(u.value()), cos(u.value())); }
template <class T>
JetT<T> cos(const JetT<T>& u) { return chain(u, cos(u.value()), -sin(u.value())); }
template <class T>
JetT<T> exp(const JetT<T>& u) {
    T e = exp(u.value());
    return chain(u, e, e);
}
template <class T>
JetT<T> log(const JetT<T>& u) {
    if (value_of(u) <= 0.0) throw DomainError("log of non-positive value");
    return chain(u, log(u.value()), JetT<T>::one_like(u.value()) / u.value());
}
template <class T>
JetT<T> sqrt(const JetT<T>& u) {
    if (value_of(u) < 0.0) throw DomainError("sqrt of negative value");
    if (value_of(u) == 0.0) throw DomainError("sqrt not differentiable at 0");
    T s = sqrt(u.value());
    return chain(u, s, JetT<T>::one_like(s) / (2.0 * s));
}
// abs at 0 is deliberately an error: it surfaces nonsmooth points instead of
// silently picking a one-sided derivative.
template <class T>
JetT<T> abs(const JetT<T>& u) {
    double v = value_of(u);
    if (v == 0.0) throw DomainError("abs not differentiable at 0");
    return v > 0.0 ? u : -u;
}

inline double powi(double b, long long e) {
    if (e < 0) {
        if (b == 0.0) throw DomainError("division by zero in negative power");
        return 1.0 / powi(b, -e);
    }
    double r = 1.0, base = b;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

template <class S>
S powi(const S& b, long long e) {
    if (e == 0) return b * 0.0 + 1.0;
    if (e < 0) return (b * 0.0 + 1.0) / powi(b, -e);
    S r = b;
    for (long long k = 1; k < e; ++k) r = r * b;
    return r;
}

inline double pow_real(double b, double e) {
    if (b <= 0.0) throw DomainError("real power of non-positive base");
    return std::pow(b, e);
}
template <class S>
S pow_real(const S& b, double e) {
    if (value_of(b) <= 0.0) throw DomainError("real power of non-positive base");
    return exp(log(b) * e);
}

}  // namespace poissonlab

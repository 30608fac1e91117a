#pragma once

// Forward-mode automatic differentiation over a runtime number of directions.
//
// DualN carries a value and one derivative per independent variable; Dual2N
// additionally carries the dense symmetric Hessian. Both are closed under the
// arithmetic the expression evaluator needs (+, -, *, /, log, exp, sqrt, pow),
// and every elementary function enforces its real domain: evaluating log at a
// nonpositive value or sqrt at a negative value throws DomainError instead of
// producing infinities, and sqrt at exactly 0 throws NonDifferentiable because
// the derivative does not exist there.

#include <cmath>
#include <cstddef>
#include <vector>

#include "symap/errors.hpp"

namespace symap {

namespace detail {

inline bool is_integral_value(double v, double bound = 1e9) {
    return std::abs(v) <= bound && v == std::floor(v);
}

} // namespace detail

struct DualN {
    double v = 0.0;
    std::vector<double> d; // d[j] = derivative along variable j

    DualN() = default;
    DualN(double value, std::size_t n) : v(value), d(n, 0.0) {}
    DualN(double value, std::vector<double> deriv) : v(value), d(std::move(deriv)) {}

    // Constant with the same direction count as *this.
    DualN like_constant(double c) const { return DualN(c, d.size()); }

    static DualN variable(double value, std::size_t n, std::size_t index) {
        DualN x(value, n);
        x.d[index] = 1.0;
        return x;
    }

    std::size_t dirs() const { return d.size(); }
};

inline DualN operator+(const DualN& a, const DualN& b) {
    DualN r(a.v + b.v, a.d);
    for (std::size_t j = 0; j < r.d.size(); ++j) r.d[j] += b.d[j];
    return r;
}

inline DualN operator-(const DualN& a, const DualN& b) {
    DualN r(a.v - b.v, a.d);
    for (std::size_t j = 0; j < r.d.size(); ++j) r.d[j] -= b.d[j];
    return r;
}

inline DualN operator-(const DualN& a) {
    DualN r(-a.v, a.d);
    for (double& x : r.d) x = -x;
    return r;
}

inline DualN operator*(const DualN& a, const DualN& b) {
    DualN r(a.v * b.v, std::vector<double>(a.d.size(), 0.0));
    for (std::size_t j = 0; j < r.d.size(); ++j) r.d[j] = a.d[j] * b.v + b.d[j] * a.v;
    return r;
}

inline DualN operator/(const DualN& a, const DualN& b) {
    if (b.v == 0.0) throw DomainError("division by zero");
    DualN r(a.v / b.v, std::vector<double>(a.d.size(), 0.0));
    const double inv2 = 1.0 / (b.v * b.v);
    for (std::size_t j = 0; j < r.d.size(); ++j)
        r.d[j] = (a.d[j] * b.v - b.d[j] * a.v) * inv2;
    return r;
}

inline DualN operator*(double s, const DualN& a) {
    DualN r(s * a.v, a.d);
    for (double& x : r.d) x *= s;
    return r;
}
inline DualN operator*(const DualN& a, double s) { return s * a; }
inline DualN operator+(const DualN& a, double s) { DualN r = a; r.v += s; return r; }
inline DualN operator+(double s, const DualN& a) { return a + s; }
inline DualN operator-(const DualN& a, double s) { DualN r = a; r.v -= s; return r; }
inline DualN operator-(double s, const DualN& a) { return -(a - s); }

// Chain rule for a univariate f applied to a: value f(a.v), slope fp.
inline DualN dual_apply(const DualN& a, double value, double fp) {
    DualN r(value, a.d);
    for (double& x : r.d) x *= fp;
    return r;
}

inline DualN log(const DualN& a) {
    if (a.v <= 0.0) throw DomainError("log of nonpositive value");
    return dual_apply(a, std::log(a.v), 1.0 / a.v);
}

inline DualN exp(const DualN& a) {
    const double e = std::exp(a.v);
    return dual_apply(a, e, e);
}

inline DualN sqrt(const DualN& a) {
    if (a.v < 0.0) throw DomainError("sqrt of negative value");
    if (a.v == 0.0) throw NonDifferentiable("sqrt derivative at 0");
    const double s = std::sqrt(a.v);
    return dual_apply(a, s, 0.5 / s);
}

inline bool is_constant(const DualN& a) {
    for (double x : a.d)
        if (x != 0.0) return false;
    return true;
}

inline DualN powi(DualN base, long long p) {
    DualN acc = base.like_constant(1.0);
    bool neg = p < 0;
    unsigned long long q = neg ? static_cast<unsigned long long>(-p) : static_cast<unsigned long long>(p);
    while (q) {
        if (q & 1ULL) acc = acc * base;
        base = base * base;
        q >>= 1;
    }
    if (neg) return acc.like_constant(1.0) / acc;
    return acc;
}

inline DualN pow(const DualN& a, const DualN& b) {
    if (is_constant(b)) {
        const double p = b.v;
        if (detail::is_integral_value(p)) {
            const long long ip = static_cast<long long>(p);
            if (a.v == 0.0 && ip < 0) throw DomainError("pow: zero base with negative exponent");
            return powi(a, ip);
        }
        if (a.v < 0.0) throw DomainError("pow: negative base with non-integer exponent");
        if (a.v == 0.0) {
            if (p <= 0.0) throw DomainError("pow: zero base with nonpositive exponent");
            if (p < 1.0) throw NonDifferentiable("pow derivative at 0 with exponent < 1");
            return DualN(0.0, a.d.size());
        }
        const double value = std::pow(a.v, p);
        return dual_apply(a, value, p * value / a.v);
    }
    if (a.v <= 0.0) throw DomainError("pow: variable exponent requires positive base");
    return exp(b * log(a));
}

// Second-order multivariate dual: value, gradient, symmetric Hessian.
// The Hessian is stored dense row-major; construction keeps it exactly
// symmetric (mirrored entries are the same double).
struct Dual2N {
    double v = 0.0;
    std::vector<double> g;
    std::vector<double> h; // n*n, h[i*n+j]

    Dual2N() = default;
    Dual2N(double value, std::size_t n) : v(value), g(n, 0.0), h(n * n, 0.0) {}

    Dual2N like_constant(double c) const { return Dual2N(c, g.size()); }

    static Dual2N variable(double value, std::size_t n, std::size_t index) {
        Dual2N x(value, n);
        x.g[index] = 1.0;
        return x;
    }

    std::size_t dirs() const { return g.size(); }
    double hess(std::size_t i, std::size_t j) const { return h[i * g.size() + j]; }
};

inline Dual2N operator+(const Dual2N& a, const Dual2N& b) {
    Dual2N r = a;
    r.v += b.v;
    for (std::size_t j = 0; j < r.g.size(); ++j) r.g[j] += b.g[j];
    for (std::size_t j = 0; j < r.h.size(); ++j) r.h[j] += b.h[j];
    return r;
}

inline Dual2N operator-(const Dual2N& a, const Dual2N& b) {
    Dual2N r = a;
    r.v -= b.v;
    for (std::size_t j = 0; j < r.g.size(); ++j) r.g[j] -= b.g[j];
    for (std::size_t j = 0; j < r.h.size(); ++j) r.h[j] -= b.h[j];
    return r;
}

inline Dual2N operator-(const Dual2N& a) {
    Dual2N r = a;
    r.v = -r.v;
    for (double& x : r.g) x = -x;
    for (double& x : r.h) x = -x;
    return r;
}

inline Dual2N operator*(const Dual2N& a, const Dual2N& b) {
    const std::size_t n = a.g.size();
    Dual2N r(a.v * b.v, n);
    for (std::size_t j = 0; j < n; ++j) r.g[j] = a.g[j] * b.v + b.g[j] * a.v;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double hij = a.h[i * n + j] * b.v + b.h[i * n + j] * a.v +
                               a.g[i] * b.g[j] + b.g[i] * a.g[j];
            r.h[i * n + j] = hij;
            r.h[j * n + i] = hij;
        }
    }
    return r;
}

// Univariate chain rule: f(a) given f(a.v), f'(a.v), f''(a.v).
inline Dual2N dual2_apply(const Dual2N& a, double value, double fp, double fpp) {
    const std::size_t n = a.g.size();
    Dual2N r(value, n);
    for (std::size_t j = 0; j < n; ++j) r.g[j] = fp * a.g[j];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double hij = fp * a.h[i * n + j] + fpp * a.g[i] * a.g[j];
            r.h[i * n + j] = hij;
            r.h[j * n + i] = hij;
        }
    }
    return r;
}

inline Dual2N operator/(const Dual2N& a, const Dual2N& b) {
    if (b.v == 0.0) throw DomainError("division by zero");
    const double iv = 1.0 / b.v;
    return a * dual2_apply(b, iv, -iv * iv, 2.0 * iv * iv * iv);
}

inline Dual2N operator*(double s, const Dual2N& a) {
    Dual2N r = a;
    r.v *= s;
    for (double& x : r.g) x *= s;
    for (double& x : r.h) x *= s;
    return r;
}
inline Dual2N operator*(const Dual2N& a, double s) { return s * a; }
inline Dual2N operator+(const Dual2N& a, double s) { Dual2N r = a; r.v += s; return r; }
inline Dual2N operator+(double s, const Dual2N& a) { return a + s; }
inline Dual2N operator-(const Dual2N& a, double s) { Dual2N r = a; r.v -= s; return r; }
inline Dual2N operator-(double s, const Dual2N& a) { return -(a - s); }

inline Dual2N log(const Dual2N& a) {
    if (a.v <= 0.0) throw DomainError("log of nonpositive value");
    const double iv = 1.0 / a.v;
    return dual2_apply(a, std::log(a.v), iv, -iv * iv);
}

inline Dual2N exp(const Dual2N& a) {
    const double e = std::exp(a.v);
    return dual2_apply(a, e, e, e);
}

inline Dual2N sqrt(const Dual2N& a) {
    if (a.v < 0.0) throw DomainError("sqrt of negative value");
    if (a.v == 0.0) throw NonDifferentiable("sqrt derivative at 0");
    const double s = std::sqrt(a.v);
    return dual2_apply(a, s, 0.5 / s, -0.25 / (s * a.v));
}

inline bool is_constant(const Dual2N& a) {
    for (double x : a.g)
        if (x != 0.0) return false;
    for (double x : a.h)
        if (x != 0.0) return false;
    return true;
}

inline Dual2N powi(Dual2N base, long long p) {
    Dual2N acc = base.like_constant(1.0);
    bool neg = p < 0;
    unsigned long long q = neg ? static_cast<unsigned long long>(-p) : static_cast<unsigned long long>(p);
    while (q) {
        if (q & 1ULL) acc = acc * base;
        base = base * base;
        q >>= 1;
    }
    if (neg) return acc.like_constant(1.0) / acc;
    return acc;
}

inline Dual2N pow(const Dual2N& a, const Dual2N& b) {
    if (is_constant(b)) {
        const double p = b.v;
        if (detail::is_integral_value(p)) {
            const long long ip = static_cast<long long>(p);
            if (a.v == 0.0 && ip < 0) throw DomainError("pow: zero base with negative exponent");
            return powi(a, ip);
        }
        if (a.v < 0.0) throw DomainError("pow: negative base with non-integer exponent");
        if (a.v == 0.0) {
            if (p <= 0.0) throw DomainError("pow: zero base with nonpositive exponent");
            if (p < 2.0) throw NonDifferentiable("pow second derivative at 0 with exponent < 2");
            return Dual2N(0.0, a.g.size());
        }
        const double value = std::pow(a.v, p);
        const double fp = p * value / a.v;
        const double fpp = p * (p - 1.0) * value / (a.v * a.v);
        return dual2_apply(a, value, fp, fpp);
    }
    if (a.v <= 0.0) throw DomainError("pow: variable exponent requires positive base");
    return exp(b * log(a));
}

// Bundled result of a second-order evaluation pass.
struct ValueGradHess {
    double value = 0.0;
    std::vector<double> grad;
    std::vector<double> hess; // n*n row-major, exactly symmetric by construction

    double hess_at(std::size_t i, std::size_t j) const { return hess[i * grad.size() + j]; }
};

// Checked scalar functions so that plain-double evaluation obeys the same
// domain rules as the dual types.
inline double checked_log(double a) {
    if (a <= 0.0) throw DomainError("log of nonpositive value");
    return std::log(a);
}

inline double checked_sqrt(double a) {
    if (a < 0.0) throw DomainError("sqrt of negative value");
    return std::sqrt(a);
}

inline double checked_div(double a, double b) {
    if (b == 0.0) throw DomainError("division by zero");
    return a / b;
}

inline double checked_pow(double a, double b) {
    if (detail::is_integral_value(b)) {
        if (a == 0.0 && b < 0.0) throw DomainError("pow: zero base with negative exponent");
        return std::pow(a, b);
    }
    if (a < 0.0) throw DomainError("pow: negative base with non-integer exponent");
    if (a == 0.0 && b <= 0.0) throw DomainError("pow: zero base with nonpositive exponent");
    return std::pow(a, b);
}

} // namespace symap

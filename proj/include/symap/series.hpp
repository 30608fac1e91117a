#pragma once

// Truncated multivariate power series over graded-lexicographically ordered
// multi-indices. Used to extract Taylor coefficients of a potential at the
// origin in one evaluation pass: plugging the identity series x_j into the
// expression tree and running the arithmetic below is iterated
// differentiation at 0, exact up to floating rounding.
//
// Ordering invariant: index 0 is the zero multi-index, degrees are
// nondecreasing, ties within a degree are broken by plain tuple comparison
// (so for n = 2, degree 1 lists (0,1) before (1,0)).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "symap/errors.hpp"

namespace symap {

class MultiIndexOrder {
public:
    MultiIndexOrder(int dim, int max_degree) : dim_(dim), max_degree_(max_degree) {
        if (dim < 1) throw Error("MultiIndexOrder: dim must be >= 1");
        if (max_degree < 0) throw Error("MultiIndexOrder: max_degree must be >= 0");
        std::vector<int> m(static_cast<std::size_t>(dim), 0);
        for (int deg = 0; deg <= max_degree; ++deg) emit_degree(m, 0, deg);
        for (std::size_t i = 0; i < indices_.size(); ++i) position_[indices_[i]] = i;
        build_product_table();
    }

    int dim() const { return dim_; }
    int max_degree() const { return max_degree_; }
    std::size_t size() const { return indices_.size(); }
    const std::vector<int>& index(std::size_t i) const { return indices_[i]; }

    int degree(std::size_t i) const {
        int d = 0;
        for (int m : indices_[i]) d += m;
        return d;
    }

    // Position of a multi-index, or npos if absent / above max_degree.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t position(const std::vector<int>& m) const {
        const auto it = position_.find(m);
        return it == position_.end() ? npos : it->second;
    }

    // Position of indices_[i] + indices_[j], or npos if the sum exceeds
    // max_degree. Precomputed.
    std::size_t product(std::size_t i, std::size_t j) const {
        return product_[i * indices_.size() + j];
    }

private:
    void emit_degree(std::vector<int>& m, std::size_t pos, int remaining) {
        if (pos + 1 == m.size()) {
            m[pos] = remaining;
            indices_.push_back(m);
            return;
        }
        // Ascending first coordinate yields tuple-lexicographic order within
        // the degree block.
        for (int v = 0; v <= remaining; ++v) {
            m[pos] = v;
            emit_degree(m, pos + 1, remaining - v);
        }
        m[pos] = 0;
    }

    void build_product_table() {
        const std::size_t n = indices_.size();
        product_.assign(n * n, npos);
        std::vector<int> sum(static_cast<std::size_t>(dim_));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                int deg = 0;
                for (int k = 0; k < dim_; ++k) {
                    sum[static_cast<std::size_t>(k)] =
                        indices_[i][static_cast<std::size_t>(k)] + indices_[j][static_cast<std::size_t>(k)];
                    deg += sum[static_cast<std::size_t>(k)];
                }
                if (deg <= max_degree_) product_[i * n + j] = position_.at(sum);
            }
        }
    }

    int dim_;
    int max_degree_;
    std::vector<std::vector<int>> indices_;
    std::map<std::vector<int>, std::size_t> position_;
    std::vector<std::size_t> product_;
};

class TruncatedSeries {
public:
    TruncatedSeries() = default;
    TruncatedSeries(std::shared_ptr<const MultiIndexOrder> order, double constant = 0.0)
        : order_(std::move(order)), c_(order_->size(), 0.0) {
        c_[0] = constant;
    }

    static TruncatedSeries variable(std::shared_ptr<const MultiIndexOrder> order, int var) {
        TruncatedSeries s(order);
        std::vector<int> m(static_cast<std::size_t>(order->dim()), 0);
        m[static_cast<std::size_t>(var)] = 1;
        const std::size_t pos = s.order_->position(m);
        if (pos == MultiIndexOrder::npos)
            throw Error("TruncatedSeries::variable: max_degree must be >= 1");
        s.c_[pos] = 1.0;
        return s;
    }

    const MultiIndexOrder& order() const { return *order_; }
    std::shared_ptr<const MultiIndexOrder> order_ptr() const { return order_; }
    std::size_t size() const { return c_.size(); }
    double operator[](std::size_t i) const { return c_[i]; }
    double& operator[](std::size_t i) { return c_[i]; }
    const std::vector<double>& coefficients() const { return c_; }

    double coefficient(const std::vector<int>& m) const {
        const std::size_t pos = order_->position(m);
        if (pos == MultiIndexOrder::npos)
            throw Error("TruncatedSeries::coefficient: multi-index above truncation degree");
        return c_[pos];
    }

    double constant_term() const { return c_[0]; }
    bool zero_constant_term() const { return c_[0] == 0.0; }

    TruncatedSeries like_constant(double v) const { return TruncatedSeries(order_, v); }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
        TruncatedSeries r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
        return r;
    }

    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
        TruncatedSeries r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
        return r;
    }

    friend TruncatedSeries operator-(const TruncatedSeries& a) {
        TruncatedSeries r = a;
        for (double& x : r.c_) x = -x;
        return r;
    }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        TruncatedSeries r(a.order_);
        const std::size_t n = a.c_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (a.c_[i] == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (b.c_[j] == 0.0) continue;
                const std::size_t k = a.order_->product(i, j);
                if (k != MultiIndexOrder::npos) r.c_[k] += a.c_[i] * b.c_[j];
            }
        }
        return r;
    }

    friend TruncatedSeries operator*(double s, const TruncatedSeries& a) {
        TruncatedSeries r = a;
        for (double& x : r.c_) x *= s;
        return r;
    }
    friend TruncatedSeries operator*(const TruncatedSeries& a, double s) { return s * a; }
    friend TruncatedSeries operator+(const TruncatedSeries& a, double s) {
        TruncatedSeries r = a;
        r.c_[0] += s;
        return r;
    }
    friend TruncatedSeries operator+(double s, const TruncatedSeries& a) { return a + s; }
    friend TruncatedSeries operator-(const TruncatedSeries& a, double s) { return a + (-s); }
    friend TruncatedSeries operator-(double s, const TruncatedSeries& a) { return -(a - s); }

    // Σ_k outer[k] · t^k for t = *this with zero constant term. outer must
    // have max_degree+1 entries. This is the composition with an analytic
    // univariate function given by its Taylor coefficients.
    TruncatedSeries compose_analytic(std::span<const double> outer) const {
        if (!zero_constant_term())
            throw NonzeroConstantTerm("compose_analytic requires a zero constant term");
        TruncatedSeries r(order_, outer[0]);
        TruncatedSeries p = like_constant(1.0);
        const int d = order_->max_degree();
        for (int k = 1; k <= d; ++k) {
            p = p * (*this);
            if (outer[static_cast<std::size_t>(k)] != 0.0)
                r = r + outer[static_cast<std::size_t>(k)] * p;
        }
        return r;
    }

private:
    std::shared_ptr<const MultiIndexOrder> order_;
    std::vector<double> c_;
};

// Elementary functions via composition around the constant term.

inline TruncatedSeries exp(const TruncatedSeries& a) {
    const double c = a.constant_term();
    const double e = std::exp(c);
    const int d = a.order().max_degree();
    std::vector<double> outer(static_cast<std::size_t>(d) + 1);
    double fact = 1.0;
    for (int k = 0; k <= d; ++k) {
        if (k > 0) fact *= k;
        outer[static_cast<std::size_t>(k)] = e / fact;
    }
    return (a - c).compose_analytic(outer);
}

inline TruncatedSeries log(const TruncatedSeries& a) {
    const double c = a.constant_term();
    if (c <= 0.0) throw DomainError("log of series with nonpositive constant term");
    const int d = a.order().max_degree();
    std::vector<double> outer(static_cast<std::size_t>(d) + 1);
    outer[0] = std::log(c);
    double cpow = c;
    for (int k = 1; k <= d; ++k) {
        outer[static_cast<std::size_t>(k)] = ((k % 2) ? 1.0 : -1.0) / (k * cpow);
        cpow *= c;
    }
    return (a - c).compose_analytic(outer);
}

// Composition with t -> (c + t)^p via the binomial series.
inline TruncatedSeries pow_const(const TruncatedSeries& a, double p) {
    const double c = a.constant_term();
    const int d = a.order().max_degree();
    const bool integral = p == std::floor(p) && std::abs(p) <= 1e9;
    if (integral && p >= 0.0) {
        // Polynomial case works for any constant term, including <= 0.
        TruncatedSeries acc = a.like_constant(1.0);
        for (long long k = 0; k < static_cast<long long>(p); ++k) acc = acc * a;
        return acc;
    }
    if (c <= 0.0) throw DomainError("pow of series requires positive constant term");
    std::vector<double> outer(static_cast<std::size_t>(d) + 1);
    double coef = std::pow(c, p);
    for (int k = 0; k <= d; ++k) {
        outer[static_cast<std::size_t>(k)] = coef;
        coef *= (p - k) / ((k + 1) * c);
    }
    return (a - c).compose_analytic(outer);
}

inline TruncatedSeries sqrt(const TruncatedSeries& a) {
    if (a.constant_term() <= 0.0)
        throw DomainError("sqrt of series requires positive constant term");
    return pow_const(a, 0.5);
}

inline TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (b.constant_term() == 0.0)
        throw DomainError("division by series with zero constant term");
    return a * pow_const(b, -1.0);
}

inline bool is_constant(const TruncatedSeries& a) {
    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] != 0.0) return false;
    return true;
}

// Scalar interface used by the generic expression evaluator.
inline TruncatedSeries s_constant(double c, const TruncatedSeries& like) { return like.like_constant(c); }
inline TruncatedSeries s_log(const TruncatedSeries& a) { return log(a); }
inline TruncatedSeries s_exp(const TruncatedSeries& a) { return exp(a); }
inline TruncatedSeries s_sqrt(const TruncatedSeries& a) { return sqrt(a); }
inline TruncatedSeries s_div(const TruncatedSeries& a, const TruncatedSeries& b) { return a / b; }
inline TruncatedSeries s_pow(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (!is_constant(b)) {
        if (a.constant_term() <= 0.0)
            throw DomainError("pow: variable exponent requires positive constant term");
        return exp(b * log(a));
    }
    return pow_const(a, b.constant_term());
}

// -log(1 - s) for s with zero constant term; inverse of 1 - exp(-s).
inline TruncatedSeries neg_log_one_minus(const TruncatedSeries& s) {
    if (!s.zero_constant_term())
        throw NonzeroConstantTerm("neg_log_one_minus requires a zero constant term");
    const int d = s.order().max_degree();
    std::vector<double> outer(static_cast<std::size_t>(d) + 1, 0.0);
    for (int k = 1; k <= d; ++k) outer[static_cast<std::size_t>(k)] = 1.0 / k;
    return s.compose_analytic(outer);
}

// log(1 + s) for s with zero constant term; inverse of exp(s) - 1.
inline TruncatedSeries log_one_plus(const TruncatedSeries& s) {
    if (!s.zero_constant_term())
        throw NonzeroConstantTerm("log_one_plus requires a zero constant term");
    const int d = s.order().max_degree();
    std::vector<double> outer(static_cast<std::size_t>(d) + 1, 0.0);
    for (int k = 1; k <= d; ++k) outer[static_cast<std::size_t>(k)] = ((k % 2) ? 1.0 : -1.0) / k;
    return s.compose_analytic(outer);
}

} // namespace symap

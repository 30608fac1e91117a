#pragma once

// One-parameter family of scalar-flat Kähler potentials on C^2, defined
// implicitly through the change of variables
//
//   G(U, V) = (e^{2m(U-V)} U, e^{2m(V-U)} V) = (x1, x2),
//
// with potential value U + V + m(U^2 + V^2) at radial coordinates x = G(U,V).
// The gradient in x is known in closed form,
//
//   dPhi/dx1 = (1 + 2mV) e^{2m(V-U)},   dPhi/dx2 = (1 + 2mU) e^{2m(U-V)},
//
// and the Hessian follows by differentiating the closed-form gradient through
// the inverse Jacobian of G. Key identities kept under test: det J_G =
// 1 + 2m(U+V), the moment sum equals U + V + 4mUV, and the metric volume
// density is identically 1 (the family is Ricci-flat).

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>

#include "symap/dual.hpp"
#include "symap/errors.hpp"
#include "symap/series.hpp"

namespace symap {

struct LebrunParams {
    double m = 0.0;
};

struct LebrunCoords {
    double U = 0.0;
    double V = 0.0;
    int iterations = 0;
    double residual = 0.0; // max-norm of G(U,V) - x at acceptance
};

inline std::array<double, 2> lebrun_forward(double m, double U, double V) {
    const double e = std::exp(2.0 * m * (U - V));
    return {e * U, V / e};
}

// Row-major [ dx1/dU, dx1/dV ; dx2/dU, dx2/dV ].
inline std::array<double, 4> lebrun_jacobian(double m, double U, double V) {
    const double e1 = std::exp(2.0 * m * (U - V));
    const double e2 = 1.0 / e1;
    return {(1.0 + 2.0 * m * U) * e1, -2.0 * m * U * e1,
            -2.0 * m * V * e2, (1.0 + 2.0 * m * V) * e2};
}

inline double lebrun_jacobian_det(double m, double U, double V) {
    return 1.0 + 2.0 * m * (U + V);
}

// Row-major [ dU/dx1, dU/dx2 ; dV/dx1, dV/dx2 ], evaluated at x = G(U,V).
inline std::array<double, 4> lebrun_inverse_jacobian(double m, double U, double V) {
    const double e1 = std::exp(2.0 * m * (U - V));
    const double e2 = 1.0 / e1;
    const double d = lebrun_jacobian_det(m, U, V);
    return {(1.0 + 2.0 * m * V) * e2 / d, 2.0 * m * U * e1 / d,
            2.0 * m * V * e2 / d, (1.0 + 2.0 * m * U) * e1 / d};
}

namespace detail {

// Bisect a strictly increasing f on a bracket of ratio <= 2 to full double
// precision. The bracket is grown/shrunk geometrically from `seed` first.
template <class F>
inline double bisect_monotone(F&& f, double seed) {
    double lo = seed, hi = seed;
    if (f(seed) > 0.0) {
        do {
            hi = lo;
            lo *= 0.5;
        } while (lo > 0.0 && f(lo) > 0.0);
    } else {
        while (f(hi) < 0.0) {
            lo = hi;
            hi *= 2.0;
        }
    }
    for (int i = 0; i < 120 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (f(mid) <= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Monotone 1-D solve of 2m t + log t = log(target) for t > 0 (target > 0).
inline double lebrun_solve_axis(double m, double target) {
    const double lt = std::log(target);
    return bisect_monotone([&](double t) { return 2.0 * m * t + std::log(t) - lt; },
                           std::max(target, 1.0));
}

// Monotone 1-D solve of 2m (U - P/U) + log U = log(x1) for U > 0, which is
// the full system reduced through the exact identity U V = x1 x2 = P.
inline double lebrun_solve_reduced(double m, double x1, double P) {
    const double lx = std::log(x1);
    return bisect_monotone(
        [&](double U) { return 2.0 * m * (U - P / U) + std::log(U) - lx; },
        std::max(x1, 1.0));
}

} // namespace detail

// Invert G at x (componentwise nonnegative). Primary path is damped Newton
// with the analytic Jacobian from the initial guess (x1, x2), iterates
// clamped to the nonnegative quadrant. When the initial residual overflows or
// Newton stalls (large, strongly asymmetric x), the solve falls back to the
// exact 1-D reduction above; either way the returned pair is verified to
// reproduce x within tol * max(1, |x|_inf) and never returned unconverged.
inline LebrunCoords lebrun_solve(double m, std::span<const double> x,
                                 double tol = 1e-12, int max_iter = 100) {
    if (x.size() != 2) throw Error("lebrun_solve: expected 2 radial coordinates");
    if (m < 0.0) throw DomainError("lebrun_solve: parameter m must be >= 0");
    const double x1 = x[0], x2 = x[1];
    if (x1 < 0.0 || x2 < 0.0) throw DomainError("lebrun_solve: radial coordinates must be >= 0");
    const double scale = std::max({1.0, x1, x2});
    const double tol_eff = tol * scale;
    // Newton keeps iterating well below the acceptance threshold so callers
    // see residuals at the rounding floor of G, not at tol; tol only decides
    // success. This matters when downstream identities multiply the residual
    // by gradient magnitudes.
    const double polish_tol =
        std::min(tol_eff, 4.0 * std::numeric_limits<double>::epsilon() * scale);

    auto residual_of = [&](double U, double V) {
        const auto g = lebrun_forward(m, U, V);
        return std::max(std::abs(g[0] - x1), std::abs(g[1] - x2));
    };

    if (m == 0.0) return {x1, x2, 0, 0.0};
    if (x1 == 0.0 && x2 == 0.0) return {0.0, 0.0, 0, 0.0};
    if (x1 == 0.0) {
        const double V = detail::lebrun_solve_axis(m, x2);
        const double res = residual_of(0.0, V);
        if (!(res <= tol_eff)) throw SolveError("lebrun_solve: axis solve failed", 0, res);
        return {0.0, V, 0, res};
    }
    if (x2 == 0.0) {
        const double U = detail::lebrun_solve_axis(m, x1);
        const double res = residual_of(U, 0.0);
        if (!(res <= tol_eff)) throw SolveError("lebrun_solve: axis solve failed", 0, res);
        return {U, 0.0, 0, res};
    }

    double U = x1, V = x2;
    int iters = 0;
    double res = residual_of(U, V);
    bool need_fallback = !std::isfinite(res);
    if (!need_fallback) {
        while (res > polish_tol && iters < max_iter) {
            const auto J = lebrun_jacobian(m, U, V);
            const auto g = lebrun_forward(m, U, V);
            const double r1 = g[0] - x1, r2 = g[1] - x2;
            const double det = J[0] * J[3] - J[1] * J[2];
            if (det == 0.0 || !std::isfinite(det)) break;
            double dU = (J[3] * r1 - J[1] * r2) / det;
            double dV = (J[0] * r2 - J[2] * r1) / det;
            double nU = 0.0, nV = 0.0, nres = 0.0;
            bool accepted = false;
            for (int halvings = 0; halvings < 60; ++halvings) {
                nU = std::max(0.0, U - dU);
                nV = std::max(0.0, V - dV);
                nres = residual_of(nU, nV);
                if (std::isfinite(nres) && nres < res) { accepted = true; break; }
                dU *= 0.5;
                dV *= 0.5;
            }
            if (!accepted) break; // stalled at the attainable floor
            U = nU;
            V = nV;
            res = nres;
            ++iters;
        }
        if (res > tol_eff) need_fallback = true;
    }

    if (need_fallback) {
        const double P = x1 * x2;
        U = detail::lebrun_solve_reduced(m, x1, P);
        V = P / U;
        res = residual_of(U, V);
        // Polish with a few clamped Newton steps when bisection left slack.
        for (int k = 0; k < 8 && res > polish_tol; ++k) {
            const auto J = lebrun_jacobian(m, U, V);
            const auto g = lebrun_forward(m, U, V);
            const double det = J[0] * J[3] - J[1] * J[2];
            if (det == 0.0 || !std::isfinite(det)) break;
            const double r1 = g[0] - x1, r2 = g[1] - x2;
            const double nU = std::max(0.0, U - (J[3] * r1 - J[1] * r2) / det);
            const double nV = std::max(0.0, V - (J[0] * r2 - J[2] * r1) / det);
            const double nres = residual_of(nU, nV);
            if (!std::isfinite(nres) || nres >= res) break;
            U = nU;
            V = nV;
            res = nres;
            ++iters;
        }
        if (!(res <= tol_eff)) throw SolveError("lebrun_solve: no convergence", iters, res);
    }
    return {U, V, iters, res};
}

// Gradient of the potential with respect to x, as a function of (U, V).
inline std::array<double, 2> lebrun_grad_uv(double m, double U, double V) {
    const double e1 = std::exp(2.0 * m * (U - V));
    return {(1.0 + 2.0 * m * V) / e1, (1.0 + 2.0 * m * U) * e1};
}

inline double lebrun_value_uv(double m, double U, double V) {
    return U + V + m * (U * U + V * V);
}

// Moment sum identity: sum_k x_k dPhi/dx_k = U + V + 4mUV.
inline double lebrun_moment_sum_uv(double m, double U, double V) {
    return U + V + 4.0 * m * U * V;
}

// Value, gradient, and Hessian at radial x. The Hessian comes from one
// dual-number pass over the closed-form gradient in (U, V), chained through
// the inverse Jacobian of G; it is mirrored so max |H - H^T| is exactly 0.
inline ValueGradHess lebrun_value_grad_hess(double m, std::span<const double> x,
                                            double tol = 1e-12) {
    const LebrunCoords c = lebrun_solve(m, x, tol);
    ValueGradHess out;
    out.value = lebrun_value_uv(m, c.U, c.V);
    const auto g = lebrun_grad_uv(m, c.U, c.V);
    out.grad = {g[0], g[1]};

    const DualN Ud = DualN::variable(c.U, 2, 0);
    const DualN Vd = DualN::variable(c.V, 2, 1);
    const DualN e1 = exp((2.0 * m) * (Ud - Vd));
    const DualN g1 = (1.0 + 2.0 * m * Vd) / e1; // d over (U, V)
    const DualN g2 = (1.0 + 2.0 * m * Ud) * e1;
    const auto Jinv = lebrun_inverse_jacobian(m, c.U, c.V);
    // H[k][l] = dg_k/dU dU/dx_l + dg_k/dV dV/dx_l; mirror the off-diagonal.
    const double h11 = g1.d[0] * Jinv[0] + g1.d[1] * Jinv[2];
    const double h12 = g1.d[0] * Jinv[1] + g1.d[1] * Jinv[3];
    const double h22 = g2.d[0] * Jinv[1] + g2.d[1] * Jinv[3];
    out.hess = {h11, h12, h12, h22};
    return out;
}

// Taylor coefficients of the potential at 0 by fixed-point inversion of G on
// truncated series: U <- x1 exp(-2m(U - V)), V <- x2 exp(2m(U - V)), starting
// from (x1, x2). Each sweep fixes at least one more degree, so max_degree
// sweeps suffice; the result is exact up to floating rounding.
inline TruncatedSeries lebrun_series(double m, std::shared_ptr<const MultiIndexOrder> order) {
    if (order->dim() != 2) throw Error("lebrun_series: order must have dim 2");
    const TruncatedSeries X1 = TruncatedSeries::variable(order, 0);
    const TruncatedSeries X2 = TruncatedSeries::variable(order, 1);
    TruncatedSeries U = X1, V = X2;
    for (int sweep = 0; sweep < order->max_degree(); ++sweep) {
        const TruncatedSeries D = U - V;
        U = X1 * exp((-2.0 * m) * D);
        V = X2 * exp((2.0 * m) * D);
    }
    return U + V + m * (U * U + V * V);
}

} // namespace symap

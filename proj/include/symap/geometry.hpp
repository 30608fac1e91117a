#pragma once

// Kähler geometry of a rotation-invariant potential: the coefficient matrix
// of the associated (1,1)-form, positivity, volume density, and a
// finite-difference Ricci form.
//
// Convention fixed repo-wide: the form is (i/2) sum h_ij dz_i wedge dconj(z_j)
// with
//
//   h_ij = Hess_ij(x) conj(z_i) z_j + grad_i(x) delta_ij,   x_j = |z_j|^2,
//
// the coefficient matrix of (i/2) d dbar Phi. It is Hermitian exactly (the
// mirrored entries are built from the same products).

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "symap/errors.hpp"
#include "symap/potential.hpp"
#include "symap/space_forms.hpp"

namespace symap {

// Coefficient matrix of a (1,1)-form in the dz_i wedge dconj(z_j) basis.
struct FormMatrix {
    Eigen::MatrixXcd h;

    int dim() const { return static_cast<int>(h.rows()); }

    double hermitian_defect() const {
        return (h - h.adjoint()).cwiseAbs().maxCoeff();
    }
};

inline FormMatrix assemble_form(const PotentialSpec& spec, const CPoint& z) {
    check_point_dim(spec, z.size(), "assemble_form");
    const RadialCoords x = radial(z);
    const ValueGradHess d = hess_potential(spec, x);
    const std::size_t n = z.size();
    FormMatrix f;
    f.h.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::complex<double> v = d.hess_at(i, j) * std::conj(z[i]) * z[j];
            if (i == j) v += d.grad[i];
            f.h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    }
    return f;
}

// Same assembly for a target space form at an image point; avoids building a
// potential spec when only the closed-form gradient/Hessian are needed.
inline FormMatrix assemble_target_form(TargetSpaceForm t, const CPoint& y) {
    const double s = radial_sum(y);
    const double g = target_gradient(t, s);
    const double H = target_hessian(t, s);
    const std::size_t n = y.size();
    FormMatrix f;
    f.h.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::complex<double> v = H * std::conj(y[i]) * y[j];
            if (i == j) v += g;
            f.h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    return f;
}

// True iff the form is positive definite at z: all eigenvalues of the
// Hermitian coefficient matrix exceed tol.
inline bool is_kahler_at(const PotentialSpec& spec, const CPoint& z, double tol = 1e-12) {
    const FormMatrix f = assemble_form(spec, z);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(f.h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > tol;
}

// det h(z); the determinant of a Hermitian matrix is real, and the imaginary
// part produced by the LU factorization must stay below 1e-10.
inline double volume_density(const PotentialSpec& spec, const CPoint& z) {
    const FormMatrix f = assemble_form(spec, z);
    const std::complex<double> det = f.h.determinant();
    if (std::abs(det.imag()) > 1e-10)
        throw NumericalError("volume_density: determinant has nonreal part " +
                             std::to_string(det.imag()));
    return det.real();
}

// Ricci form coefficient matrix: -d^2/dz_i dconj(z_j) log det h, evaluated by
// nested central differences in the underlying real coordinates and combined
// through the Wirtinger identities
//
//   d^2/dz_i dconj(z_j) = 1/4 (d_xi d_xj + d_yi d_yj) + i/4 (d_xi d_yj - d_yi d_xj).
//
// Throws StepTooLarge when a stencil point leaves the positivity region.
inline FormMatrix ricci_form(const PotentialSpec& spec, const CPoint& z, double h_step = 1e-3) {
    check_point_dim(spec, z.size(), "ricci_form");
    const std::size_t n = z.size();
    const std::size_t m = 2 * n; // real coordinates (x^1, y^1, ..., x^n, y^n)

    auto log_det = [&](const CPoint& w) {
        const double det = volume_density(spec, w);
        if (det <= 0.0)
            throw StepTooLarge("ricci_form: stencil point left the positive-definite region");
        return std::log(det);
    };
    auto shifted = [&](std::size_t p, double delta) {
        CPoint w = z;
        const std::size_t j = p / 2;
        if (p % 2 == 0)
            w[j] += delta;
        else
            w[j] += std::complex<double>(0.0, delta);
        return w;
    };

    const double L0 = log_det(z);
    // Second partials d^2 L / du_p du_q over real coordinates.
    Eigen::MatrixXd D2(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t p = 0; p < m; ++p) {
        const double Lpp = log_det(shifted(p, h_step));
        const double Lpm = log_det(shifted(p, -h_step));
        D2(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)) =
            (Lpp - 2.0 * L0 + Lpm) / (h_step * h_step);
    }
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = p + 1; q < m; ++q) {
            auto shifted2 = [&](double dp, double dq) {
                CPoint w = shifted(p, dp);
                const std::size_t j = q / 2;
                if (q % 2 == 0)
                    w[j] += dq;
                else
                    w[j] += std::complex<double>(0.0, dq);
                return log_det(w);
            };
            const double v = (shifted2(h_step, h_step) - shifted2(h_step, -h_step) -
                              shifted2(-h_step, h_step) + shifted2(-h_step, -h_step)) /
                             (4.0 * h_step * h_step);
            D2(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = v;
            D2(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p)) = v;
        }
    }

    FormMatrix ric;
    ric.h.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto xi = static_cast<Eigen::Index>(2 * i);
            const auto yi = static_cast<Eigen::Index>(2 * i + 1);
            const auto xj = static_cast<Eigen::Index>(2 * j);
            const auto yj = static_cast<Eigen::Index>(2 * j + 1);
            const double re = 0.25 * (D2(xi, xj) + D2(yi, yj));
            const double im = 0.25 * (D2(xi, yj) - D2(yi, xj));
            ric.h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                -std::complex<double>(re, im);
        }
    }
    return ric;
}

} // namespace symap

#pragma once

// Numerical certification that a special map pulls the target 2-form back to
// the source 2-form: at each sample z it compares J^T * Omega_target(f(z)) * J
// with Omega_source(z), where J is a central-difference Jacobian in the real
// coordinates (x1, y1, ..., xn, yn) with z_j = x_j + i y_j.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "symap/errors.hpp"
#include "symap/geometry.hpp"
#include "symap/special_maps.hpp"

namespace symap {

// Real antisymmetric matrix of a 2-form in the basis (x1, y1, ..., xn, yn).
struct RealForm {
    Eigen::MatrixXd omega;

    int real_dim() const { return static_cast<int>(omega.rows()); }

    double antisymmetry_defect() const {
        return (omega + omega.transpose()).cwiseAbs().maxCoeff();
    }

    // Evaluate the form on a pair of real tangent vectors.
    double operator()(const Eigen::VectorXd& u, const Eigen::VectorXd& w) const {
        return u.dot(omega * w);
    }
};

// Convert the Hermitian coefficient matrix h of (i/2) sum h_ij dz_i ^ dzbar_j
// into the corresponding real antisymmetric matrix. Writing h = A + iB with A
// symmetric and B antisymmetric, the form expands to
//   sum_ij A_ij dx_i ^ dy_j - (1/2) sum_ij B_ij (dx_i ^ dx_j + dy_i ^ dy_j).
inline RealForm form_to_real(const FormMatrix& f, double hermitian_tol = 1e-10) {
    const double defect = f.hermitian_defect();
    if (defect > hermitian_tol)
        throw NotHermitian("coefficient matrix deviates from Hermitian by " +
                           std::to_string(defect));
    const int n = f.dim();
    RealForm rf;
    rf.omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double a = 0.5 * (f.h(i, j).real() + f.h(j, i).real());
            rf.omega(2 * i, 2 * j + 1) += a;
            rf.omega(2 * j + 1, 2 * i) -= a;
            if (i != j) {
                const double b = 0.5 * (f.h(i, j).imag() - f.h(j, i).imag());
                rf.omega(2 * i, 2 * j) = -b;
                rf.omega(2 * i + 1, 2 * j + 1) = -b;
            }
        }
    }
    return rf;
}

inline std::vector<double> flatten_real(std::span<const std::complex<double>> z) {
    std::vector<double> out(2 * z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        out[2 * j] = z[j].real();
        out[2 * j + 1] = z[j].imag();
    }
    return out;
}

inline CPoint unflatten_real(std::span<const double> u) {
    CPoint z(u.size() / 2);
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = {u[2 * j], u[2 * j + 1]};
    return z;
}

// Central-difference Jacobian of the map in real coordinates. The step is
// relative to the point scale; the truncation error is O(step^2).
inline Eigen::MatrixXd real_jacobian(const SpecialMap& m, std::span<const std::complex<double>> z,
                                     double step_scale = 1e-6) {
    const int n2 = 2 * m.dim;
    double norm = 0.0;
    for (const auto& w : z) norm += std::norm(w);
    const double step = step_scale * std::max(1.0, std::sqrt(norm));
    const std::vector<double> base = flatten_real(z);
    Eigen::MatrixXd jac(n2, n2);
    for (int q = 0; q < n2; ++q) {
        std::vector<double> up = base, dn = base;
        up[static_cast<std::size_t>(q)] += step;
        dn[static_cast<std::size_t>(q)] -= step;
        const std::vector<double> fp = flatten_real(apply_special_map(m, unflatten_real(up)));
        const std::vector<double> fm = flatten_real(apply_special_map(m, unflatten_real(dn)));
        for (int r = 0; r < n2; ++r)
            jac(r, q) = (fp[static_cast<std::size_t>(r)] - fm[static_cast<std::size_t>(r)]) /
                        (2.0 * step);
    }
    return jac;
}

// First-order coefficient matrix A_kl = d/dx_l [ psi_k^2 * G'(sum_j psi_j^2 x_j) ]
// evaluated through the dual path of the profile. For an exact solution of the
// defining condition this matrix is symmetric (it is a Hessian).
inline Eigen::MatrixXd profile_coefficient_matrix(const SpecialMap& m, std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<DualN> xd(n);
    for (std::size_t j = 0; j < n; ++j) xd[j] = DualN::variable(x[j], n, j);
    const std::vector<DualN> psi = m.profile->eval_dual(xd);

    std::vector<double> y(n);
    double sum_y = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        y[j] = psi[j].v * psi[j].v * x[j];
        sum_y += y[j];
    }
    const double gp = target_gradient(m.target, sum_y);
    const double hp = target_hessian(m.target, sum_y);

    // d(psi_k^2)/dx_l and d(sum_j psi_j^2 x_j)/dx_l.
    Eigen::MatrixXd dpsi2(n, n);
    std::vector<double> dsum(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            dpsi2(static_cast<int>(k), static_cast<int>(l)) = 2.0 * psi[k].v * psi[k].d[l];
            dsum[l] += dpsi2(static_cast<int>(k), static_cast<int>(l)) * x[k];
        }
        dsum[k] += psi[k].v * psi[k].v;
    }

    Eigen::MatrixXd A(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
            A(static_cast<int>(k), static_cast<int>(l)) =
                gp * dpsi2(static_cast<int>(k), static_cast<int>(l)) +
                psi[k].v * psi[k].v * hp * dsum[l];
    return A;
}

struct PullbackReport {
    int points = 0;
    double max_residual = 0.0;          // max entry of J^T W_target J - W_source
    double max_coefficient_asymmetry = 0.0;
    std::vector<double> per_point;
    double tolerance = 0.0;
    bool pass = false;
};

// Verify the pullback identity on the given sample points.
inline PullbackReport verify_pullback(const SpecialMap& m, const PotentialSpec& spec,
                                      const std::vector<CPoint>& points, double tolerance,
                                      double step_scale = 1e-6) {
    if (m.dim != spec.dim) throw DomainError("verify_pullback: dimension mismatch");
    if (points.empty()) throw TooFewPoints("verify_pullback: no sample points");

    PullbackReport rep;
    rep.tolerance = tolerance;
    rep.per_point.reserve(points.size());
    for (const CPoint& z : points) {
        if (static_cast<int>(z.size()) != m.dim)
            throw DomainError("verify_pullback: point dimension mismatch");
        const CPoint fz = apply_special_map(m, z);
        const RealForm target = form_to_real(assemble_target_form(m.target, fz));
        const RealForm source = form_to_real(assemble_form(spec, z));
        const Eigen::MatrixXd jac = real_jacobian(m, z, step_scale);
        const Eigen::MatrixXd diff = jac.transpose() * target.omega * jac - source.omega;
        const double res = diff.cwiseAbs().maxCoeff();
        rep.per_point.push_back(res);
        rep.max_residual = std::max(rep.max_residual, res);

        const RadialCoords x = radial(z);
        bool on_axis = false;
        for (double xi : x) on_axis = on_axis || (xi == 0.0);
        if (!on_axis) {
            const Eigen::MatrixXd A = profile_coefficient_matrix(m, x);
            const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
            rep.max_coefficient_asymmetry = std::max(rep.max_coefficient_asymmetry, asym);
        }
    }
    rep.points = static_cast<int>(points.size());
    rep.pass = rep.max_residual <= tolerance;
    return rep;
}

} // namespace symap

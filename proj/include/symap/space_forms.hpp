#pragma once

// The three target space forms in the coordinates this library uses: flat
// C^n, the unit-ball model of complex hyperbolic space, and the affine chart
// of complex projective space. Each carries the reference Kähler potential
//
//   Flat:        sum y_j
//   Hyperbolic: -log(1 - sum y_j)   (defined for sum < 1)
//   FubiniStudy: log(1 + sum y_j)
//
// in radial coordinates y_j = |w_j|^2. Their gradients and Hessians are
// constant across components, which the pullback and map-construction code
// exploits. The Cayley transform and its inverse convert between the ball
// and flat models and are symplectomorphisms for these reference forms.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "symap/errors.hpp"
#include "symap/potential.hpp"

namespace symap {

using CPoint = std::vector<std::complex<double>>;
using RadialCoords = std::vector<double>;

inline RadialCoords radial(std::span<const std::complex<double>> z) {
    RadialCoords x(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) x[j] = std::norm(z[j]);
    return x;
}

inline double radial_sum(std::span<const std::complex<double>> z) {
    double s = 0.0;
    for (const auto& w : z) s += std::norm(w);
    return s;
}

enum class TargetSpaceForm { Flat, Hyperbolic, FubiniStudy };

inline std::string target_name(TargetSpaceForm t) {
    switch (t) {
        case TargetSpaceForm::Flat: return "flat";
        case TargetSpaceForm::Hyperbolic: return "hyperbolic";
        case TargetSpaceForm::FubiniStudy: return "fubini_study";
    }
    return "?";
}

inline TargetSpaceForm target_from_name(const std::string& name) {
    if (name == "flat") return TargetSpaceForm::Flat;
    if (name == "hyperbolic") return TargetSpaceForm::Hyperbolic;
    if (name == "fubini_study" || name == "fs") return TargetSpaceForm::FubiniStudy;
    throw Error("unknown target space form '" + name + "'");
}

// All components of the target gradient share one value, a function of the
// radial sum only; same for every entry of the target Hessian.
inline double target_gradient(TargetSpaceForm t, double sum_y) {
    switch (t) {
        case TargetSpaceForm::Flat: return 1.0;
        case TargetSpaceForm::Hyperbolic:
            if (sum_y >= 1.0) throw DomainError("hyperbolic target: point outside the unit ball");
            return 1.0 / (1.0 - sum_y);
        case TargetSpaceForm::FubiniStudy: return 1.0 / (1.0 + sum_y);
    }
    throw NumericalError("target_gradient: bad target");
}

inline double target_hessian(TargetSpaceForm t, double sum_y) {
    switch (t) {
        case TargetSpaceForm::Flat: return 0.0;
        case TargetSpaceForm::Hyperbolic: {
            if (sum_y >= 1.0) throw DomainError("hyperbolic target: point outside the unit ball");
            const double d = 1.0 - sum_y;
            return 1.0 / (d * d);
        }
        case TargetSpaceForm::FubiniStudy: {
            const double d = 1.0 + sum_y;
            return -1.0 / (d * d);
        }
    }
    throw NumericalError("target_hessian: bad target");
}

// Catalog potential realizing the target's reference form, for code that
// wants to treat targets and sources uniformly.
inline PotentialSpec target_potential_spec(TargetSpaceForm t, int n) {
    switch (t) {
        case TargetSpaceForm::Flat: return catalog_flat(n);
        case TargetSpaceForm::Hyperbolic: return catalog_hyperbolic(n);
        case TargetSpaceForm::FubiniStudy: return catalog_fubini_study(n);
    }
    throw NumericalError("target_potential_spec: bad target");
}

// Cayley transform from the unit ball onto C^n: z / sqrt(1 - |z|^2).
inline CPoint cayley_map(const CPoint& z) {
    const double s = radial_sum(z);
    if (s >= 1.0) throw DomainError("cayley_map: point outside the unit ball");
    const double f = 1.0 / std::sqrt(1.0 - s);
    CPoint out(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) out[j] = f * z[j];
    return out;
}

// Inverse Cayley transform from C^n into the unit ball: z / sqrt(1 + |z|^2).
inline CPoint cayley_inverse(const CPoint& z) {
    const double f = 1.0 / std::sqrt(1.0 + radial_sum(z));
    CPoint out(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) out[j] = f * z[j];
    return out;
}

} // namespace symap

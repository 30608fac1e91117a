#pragma once

// End-to-end verification of the implicit family's claims: the solve/forward
// round trip, the Jacobian determinant identity, unit volume density, Ricci
// flatness, the closed form of the moment sum, the explicit global map and
// its pullback identity, and moment-sum divergence along radial rays.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "symap/admissibility.hpp"
#include "symap/geometry.hpp"
#include "symap/lebrun.hpp"
#include "symap/potential.hpp"
#include "symap/pullback.hpp"
#include "symap/sampling.hpp"
#include "symap/space_forms.hpp"
#include "symap/special_maps.hpp"

namespace symap {

// Explicit map to flat coordinates in closed form:
//   z |-> ( (1+2mV)^{1/2} e^{m(V-U)} z_1 , (1+2mU)^{1/2} e^{m(U-V)} z_2 )
// with (U, V) recovered from x = (|z_1|^2, |z_2|^2) by the implicit solve.
inline CPoint lebrun_map(double m, std::span<const std::complex<double>> z) {
    if (z.size() != 2) throw DomainError("lebrun_map: expects a point in C^2");
    const RadialCoords x = radial(z);
    const LebrunCoords c = lebrun_solve(m, x);
    const double e1 = std::sqrt(1.0 + 2.0 * m * c.V) * std::exp(m * (c.V - c.U));
    const double e2 = std::sqrt(1.0 + 2.0 * m * c.U) * std::exp(m * (c.U - c.V));
    return {e1 * z[0], e2 * z[1]};
}

// The same map through the generic profile machinery (psi_k = sqrt(g_k)).
inline SpecialMap lebrun_special(double m) {
    return build_special_map(catalog_lebrun(m), TargetSpaceForm::Flat);
}

struct LebrunCheck {
    std::string name;
    double value = 0.0;   // measured extreme (max residual, or min moment sum)
    double bound = 0.0;
    bool larger_is_better = false; // divergence check: value must exceed bound
    bool pass = false;
};

struct LebrunReport {
    double m = 0.0;
    int points = 0;
    std::uint64_t seed = 0;
    std::vector<LebrunCheck> checks;
    bool all_pass = false;
};

namespace detail {

inline void push_check(LebrunReport& rep, const std::string& name, double value, double bound,
                       bool larger_is_better = false) {
    LebrunCheck c;
    c.name = name;
    c.value = value;
    c.bound = bound;
    c.larger_is_better = larger_is_better;
    c.pass = larger_is_better ? value > bound : value <= bound;
    rep.checks.push_back(c);
}

} // namespace detail

inline LebrunReport verify_lebrun_claims(double m, int n_points = 100, std::uint64_t seed = 42) {
    if (n_points < 1) throw DomainError("verify_lebrun_claims: n_points must be >= 1");
    LebrunReport rep;
    rep.m = m;
    rep.points = n_points;
    rep.seed = seed;
    const PotentialSpec spec = catalog_lebrun(m);
    SeededRng rng(seed);

    // Solve / forward round trip on [0, 10]^2.
    {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const RadialCoords x{rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)};
            const LebrunCoords c = lebrun_solve(m, x);
            const auto back = lebrun_forward(m, c.U, c.V);
            worst = std::max({worst, std::abs(back[0] - x[0]), std::abs(back[1] - x[1])});
        }
        detail::push_check(rep, "roundtrip", worst, 1e-11);
    }

    // det J_G = 1 + 2m(U+V).
    {
        double worst = 0.0;
        for (int i = 0; i < n_points; ++i) {
            const double U = rng.uniform(0.0, 5.0), V = rng.uniform(0.0, 5.0);
            const auto J = lebrun_jacobian(m, U, V);
            const double det = J[0] * J[3] - J[1] * J[2];
            worst = std::max(worst, std::abs(det - (1.0 + 2.0 * m * (U + V))));
        }
        detail::push_check(rep, "jacobian_det", worst, 1e-12);
    }

    // Volume density identically 1.
    {
        double worst = 0.0;
        for (int i = 0; i < n_points; ++i) {
            const CPoint z = sample_ball(rng, 2, 3.0);
            worst = std::max(worst, std::abs(volume_density(spec, z) - 1.0));
        }
        detail::push_check(rep, "volume", worst, 1e-6);
    }

    // Ricci form vanishes (finite differences of log det h).
    {
        double worst = 0.0;
        const int ricci_points = std::min(n_points, 5);
        for (int i = 0; i < ricci_points; ++i) {
            CPoint z = sample_ball(rng, 2, 2.0);
            // Keep a little distance from the axes so the stencil is smooth.
            for (auto& w : z)
                if (std::abs(w) < 0.05) w += std::complex<double>(0.1, 0.1);
            const FormMatrix ric = ricci_form(spec, z);
            worst = std::max(worst, ric.h.cwiseAbs().maxCoeff());
        }
        detail::push_check(rep, "ricci", worst, 1e-4);
    }

    // Moment sum closed form S = U + V + 4 m U V.
    {
        double worst = 0.0;
        for (int i = 0; i < n_points; ++i) {
            const RadialCoords x{rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)};
            const LebrunCoords c = lebrun_solve(m, x);
            const double closed = c.U + c.V + 4.0 * m * c.U * c.V;
            worst = std::max(worst, std::abs(moment_sum(spec, x) - closed));
        }
        detail::push_check(rep, "moment_identity", worst, 1e-10);
    }

    // The closed-form map agrees with the generic profile construction.
    {
        const SpecialMap map = lebrun_special(m);
        double worst = 0.0;
        for (int i = 0; i < n_points; ++i) {
            const CPoint z = sample_ball(rng, 2, 2.0);
            const CPoint a = lebrun_map(m, z);
            const CPoint b = apply_special_map(map, z);
            worst = std::max({worst, std::abs(a[0] - b[0]), std::abs(a[1] - b[1])});
        }
        detail::push_check(rep, "map_agreement", worst, 1e-10);
    }

    // Pullback of the flat form equals the source form.
    {
        const SpecialMap map = lebrun_special(m);
        std::vector<CPoint> pts;
        pts.reserve(static_cast<std::size_t>(n_points));
        for (int i = 0; i < n_points; ++i) pts.push_back(sample_ball(rng, 2, 2.0));
        const PullbackReport pb = verify_pullback(map, spec, pts, 1e-6);
        detail::push_check(rep, "pullback", pb.max_residual, 1e-6);
    }

    // Moment sum blows past the divergence threshold along radial rays.
    {
        const DomainSpec dom = domain_full_space(2);
        const ProbeParams params;
        const auto probes = probe_boundary(spec, dom, params);
        double min_last = std::numeric_limits<double>::infinity();
        bool all_diverge = true;
        for (const RayProbe& p : probes) {
            if (p.label.rfind("radial", 0) != 0) continue;
            all_diverge = all_diverge && p.trend == RayTrend::Diverges;
            if (!p.s_values.empty()) min_last = std::min(min_last, p.s_values.back());
        }
        detail::push_check(rep, "ray_divergence", all_diverge ? min_last : 0.0,
                           params.divergence_threshold, /*larger_is_better=*/true);
    }

    rep.all_pass = true;
    for (const LebrunCheck& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

} // namespace symap

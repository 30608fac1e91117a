#pragma once

// Series diagnostics for isometric-immersion obstructions. For a rotation
// invariant potential the canonical potential normalized at the origin is the
// Taylor series of Phi(x) - Phi(0); nonnegativity of its coefficients (or of
// the coefficients of exp(D)-1 / 1-exp(-D)) up to a truncation degree is the
// sampled form of the classical immersibility criterion into the flat,
// projective, and hyperbolic space forms respectively.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symap/admissibility.hpp"
#include "symap/errors.hpp"
#include "symap/potential.hpp"
#include "symap/series.hpp"

namespace symap {

// Taylor series of Phi(x) - Phi(0) at x = 0, constant term exactly 0.
inline TruncatedSeries diastasis_series(const PotentialSpec& spec,
                                        std::shared_ptr<const MultiIndexOrder> order) {
    TruncatedSeries s;
    try {
        s = potential_series(spec, std::move(order));
    } catch (const NotAnalyticAtOrigin&) {
        throw;
    } catch (const Error& e) {
        throw NotAnalyticAtOrigin("potential '" + spec.name +
                                  "' has no Taylor expansion at the origin: " + e.what());
    }
    s[0] = 0.0;
    return s;
}

// exp(s) - 1 for a series with zero constant term.
inline TruncatedSeries series_exp_minus_one(const TruncatedSeries& s) {
    if (!s.zero_constant_term())
        throw NonzeroConstantTerm("series_exp_minus_one requires a zero constant term");
    const int d = s.order().max_degree();
    std::vector<double> outer(static_cast<std::size_t>(d) + 1, 0.0);
    double fact = 1.0;
    for (int k = 1; k <= d; ++k) {
        fact *= k;
        outer[static_cast<std::size_t>(k)] = 1.0 / fact;
    }
    return s.compose_analytic(outer);
}

// 1 - exp(-s) for a series with zero constant term.
inline TruncatedSeries one_minus_series_exp_neg(const TruncatedSeries& s) {
    if (!s.zero_constant_term())
        throw NonzeroConstantTerm("one_minus_series_exp_neg requires a zero constant term");
    const int d = s.order().max_degree();
    std::vector<double> outer(static_cast<std::size_t>(d) + 1, 0.0);
    double fact = 1.0;
    double sign = 1.0;
    for (int k = 1; k <= d; ++k) {
        fact *= k;
        outer[static_cast<std::size_t>(k)] = sign / fact; // -(-1)^k / k!
        sign = -sign;
    }
    return s.compose_analytic(outer);
}

enum class ResolvabilityKind { Flat, Projective, Hyperbolic };

inline std::string resolvability_kind_name(ResolvabilityKind k) {
    switch (k) {
        case ResolvabilityKind::Flat: return "flat";
        case ResolvabilityKind::Projective: return "projective";
        case ResolvabilityKind::Hyperbolic: return "hyperbolic";
    }
    return "flat";
}

inline ResolvabilityKind resolvability_kind_from_name(const std::string& name) {
    if (name == "flat") return ResolvabilityKind::Flat;
    if (name == "projective") return ResolvabilityKind::Projective;
    if (name == "hyperbolic") return ResolvabilityKind::Hyperbolic;
    throw DomainError("unknown resolvability kind '" + name +
                      "' (expected flat, projective, or hyperbolic)");
}

struct ResolvabilityReport {
    ResolvabilityKind kind = ResolvabilityKind::Flat;
    int degree = 0;
    TruncatedSeries coefficients;        // the transformed series for this kind
    double min_coefficient = 0.0;
    std::vector<int> min_index;          // multi-index attaining the minimum
    int negative_count = 0;              // coefficients < -tol
    std::vector<std::vector<int>> negative_indices; // at most 16 reported
    int positive_count = 0;              // coefficients > tol: rank bound up to degree
    bool degree_one_positive = false;    // every degree-1 coefficient > tol
    double tolerance = 0.0;
    bool hypothesis_satisfied = false;   // no negatives and degree-1 all positive
};

inline ResolvabilityReport resolvability(const PotentialSpec& spec, ResolvabilityKind kind,
                                         int degree = 8, double tol = 1e-10) {
    auto order = std::make_shared<MultiIndexOrder>(spec.dim, degree);
    const TruncatedSeries d0 = diastasis_series(spec, order);
    TruncatedSeries coeffs;
    switch (kind) {
        case ResolvabilityKind::Flat: coeffs = d0; break;
        case ResolvabilityKind::Projective: coeffs = series_exp_minus_one(d0); break;
        case ResolvabilityKind::Hyperbolic: coeffs = one_minus_series_exp_neg(d0); break;
    }

    ResolvabilityReport rep;
    rep.kind = kind;
    rep.degree = degree;
    rep.coefficients = coeffs;
    rep.tolerance = tol;
    rep.min_coefficient = std::numeric_limits<double>::infinity();
    rep.min_index = order->index(0);
    rep.degree_one_positive = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double c = coeffs[i];
        if (c < rep.min_coefficient) {
            rep.min_coefficient = c;
            rep.min_index = order->index(i);
        }
        if (c < -tol) {
            ++rep.negative_count;
            if (rep.negative_indices.size() < 16) rep.negative_indices.push_back(order->index(i));
        }
        if (c > tol) ++rep.positive_count;
        if (order->degree(i) == 1 && c <= tol) rep.degree_one_positive = false;
    }
    rep.hypothesis_satisfied = rep.negative_count == 0 && rep.degree_one_positive;
    return rep;
}

// Bridge between the series criterion and the pointwise gradient condition:
// if some resolvability kind is satisfied up to the truncation degree, the
// strict gradient positivity must hold at interior points (each partial
// derivative is a degree-1 coefficient plus a series with nonnegative
// coefficients). Reports both sides and whether they agree.
struct BridgeReport {
    ResolvabilityReport flat;
    ResolvabilityReport projective;
    ResolvabilityReport hyperbolic;
    bool any_kind_satisfied = false;
    ConditionReport positive_gradient;   // sampled on the domain
    bool agreement = false;              // no kind satisfied, or genconda holds
};

inline BridgeReport theorem2_bridge(const PotentialSpec& spec, int degree = 8,
                                    std::optional<DomainSpec> domain = std::nullopt,
                                    int samples = 200, std::uint64_t seed = 42) {
    BridgeReport rep;
    rep.flat = resolvability(spec, ResolvabilityKind::Flat, degree);
    rep.projective = resolvability(spec, ResolvabilityKind::Projective, degree);
    rep.hyperbolic = resolvability(spec, ResolvabilityKind::Hyperbolic, degree);
    rep.any_kind_satisfied = rep.flat.hypothesis_satisfied ||
                             rep.projective.hypothesis_satisfied ||
                             rep.hyperbolic.hypothesis_satisfied;
    const DomainSpec dom = domain ? *domain : domain_ball(spec.dim, 0.5);
    const PointwiseReport pw = check_pointwise(spec, dom, samples, seed);
    rep.positive_gradient = pw.positive_gradient;
    rep.agreement = !rep.any_kind_satisfied || rep.positive_gradient.pass;
    return rep;
}

} // namespace symap

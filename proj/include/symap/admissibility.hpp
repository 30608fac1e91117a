#pragma once

// Domain descriptions and the three-step classification pipeline:
//   1. pointwise gradient conditions sampled over the domain interior,
//   2. boundary probes: the moment sum S = sum g_k x_k evaluated along rays
//      approaching the domain boundary,
//   3. aggregation into a per-target verdict.
//
// Everything operates in radial coordinates x_j = |z_j|^2 >= 0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symap/errors.hpp"
#include "symap/potential.hpp"
#include "symap/sampling.hpp"
#include "symap/space_forms.hpp"

namespace symap {

struct Witness {
    RadialCoords x;
    int index = -1;   // offending coordinate, or -1 when the scalar S is at fault
    double value = 0.0;
};

struct ConditionReport {
    std::string name;
    bool pass = true;
    int samples = 0;
    int violations = 0;
    std::optional<Witness> witness; // first violation encountered
};

struct PointwiseReport {
    ConditionReport nonnegative_gradient; // g_k >= 0 up to rounding
    ConditionReport bounded_moment;       // previous + S < 1
    ConditionReport positive_gradient;    // g_k > 0 strictly
};

// A path t in [0, 1) -> interior point, approaching the boundary as t -> 1.
struct Ray {
    std::string label;
    std::function<RadialCoords(double)> path;
};

struct DomainSpec {
    int dim = 0;
    std::string name;
    bool contains_origin = false;
    bool meets_all_axes = false;
    std::function<bool(std::span<const double>)> contains; // radial coordinates
    std::function<RadialCoords(SeededRng&)> sample;        // interior point
    std::vector<Ray> rays;
};

namespace detail {

inline double unbounded_param(double t) { return t / (1.0 - t); } // [0,1) -> [0,inf)

inline std::vector<RadialCoords> standard_directions(int n) {
    std::vector<RadialCoords> dirs;
    dirs.push_back(RadialCoords(static_cast<std::size_t>(n), 1.0));
    RadialCoords harmonic(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) harmonic[static_cast<std::size_t>(j)] = 1.0 / (j + 1.0);
    dirs.push_back(harmonic);
    if (n > 1) {
        RadialCoords ramp(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) ramp[static_cast<std::size_t>(j)] = (j + 1.0) / n;
        dirs.push_back(ramp);
    }
    return dirs;
}

inline std::string direction_label(std::size_t i) {
    static const char* names[] = {"ones", "harmonic", "ramp"};
    return names[i];
}

} // namespace detail

// All of C^n (radial octant x >= 0). Boundary = infinity.
inline DomainSpec domain_full_space(int n, double sample_box = 2.0) {
    DomainSpec d;
    d.dim = n;
    d.name = "full_space";
    d.contains_origin = true;
    d.meets_all_axes = true;
    d.contains = [](std::span<const double> x) {
        for (double xi : x)
            if (!(xi >= 0.0)) return false;
        return true;
    };
    d.sample = [n, sample_box](SeededRng& rng) {
        RadialCoords x(static_cast<std::size_t>(n));
        for (auto& xi : x) xi = rng.uniform(0.0, sample_box);
        return x;
    };
    const auto dirs = detail::standard_directions(n);
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        d.rays.push_back(Ray{"radial[" + detail::direction_label(i) + "]",
                             [dir = dirs[i]](double t) {
                                 const double s = detail::unbounded_param(t);
                                 RadialCoords x = dir;
                                 for (auto& xi : x) xi *= s;
                                 return x;
                             }});
    }
    for (int k = 0; k < n; ++k) {
        d.rays.push_back(Ray{"axis" + std::to_string(k + 1), [n, k](double t) {
                                 RadialCoords x(static_cast<std::size_t>(n), 0.25);
                                 x[static_cast<std::size_t>(k)] = detail::unbounded_param(t);
                                 return x;
                             }});
    }
    return d;
}

// The ball sum x_j < rho (image of the complex ball of squared radius rho).
inline DomainSpec domain_ball(int n, double rho = 1.0) {
    if (rho <= 0.0) throw DomainError("domain_ball: rho must be positive");
    DomainSpec d;
    d.dim = n;
    d.name = "ball";
    d.contains_origin = true;
    d.meets_all_axes = true;
    d.contains = [rho](std::span<const double> x) {
        double s = 0.0;
        for (double xi : x) {
            if (!(xi >= 0.0)) return false;
            s += xi;
        }
        return s < rho;
    };
    d.sample = [n, rho](SeededRng& rng) {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            RadialCoords x(static_cast<std::size_t>(n));
            double s = 0.0;
            for (auto& xi : x) {
                xi = rng.uniform(0.0, rho);
                s += xi;
            }
            if (s < 0.95 * rho) return x;
        }
        throw NumericalError("domain_ball: rejection sampling failed");
    };
    auto dirs = detail::standard_directions(n);
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        double total = 0.0;
        for (double w : dirs[i]) total += w;
        for (auto& w : dirs[i]) w /= total; // normalize so sum x -> rho as t -> 1
        d.rays.push_back(Ray{"radial[" + detail::direction_label(i) + "]",
                             [dir = dirs[i], rho](double t) {
                                 RadialCoords x = dir;
                                 for (auto& xi : x) xi *= rho * t;
                                 return x;
                             }});
    }
    return d;
}

// C^n minus the origin. Boundary = infinity together with the puncture.
inline DomainSpec domain_punctured(int n, double sample_box = 2.0, double puncture_scale = 0.3) {
    DomainSpec d;
    d.dim = n;
    d.name = "punctured";
    d.contains_origin = false;
    d.meets_all_axes = true; // each hyperplane x_k = 0 is met away from the origin
    d.contains = [](std::span<const double> x) {
        double s = 0.0;
        for (double xi : x) {
            if (!(xi >= 0.0)) return false;
            s += xi;
        }
        return s > 0.0;
    };
    d.sample = [n, sample_box](SeededRng& rng) {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            RadialCoords x(static_cast<std::size_t>(n));
            double s = 0.0;
            for (auto& xi : x) {
                xi = rng.uniform(0.0, sample_box);
                s += xi;
            }
            if (s > 0.05 * sample_box) return x;
        }
        throw NumericalError("domain_punctured: rejection sampling failed");
    };
    const auto dirs = detail::standard_directions(n);
    for (std::size_t i = 0; i < dirs.size() && i < 2; ++i) {
        d.rays.push_back(Ray{"to_inf[" + detail::direction_label(i) + "]",
                             [dir = dirs[i]](double t) {
                                 const double s = detail::unbounded_param(t);
                                 RadialCoords x = dir;
                                 for (auto& xi : x) xi *= s;
                                 return x;
                             }});
        d.rays.push_back(Ray{"to_origin[" + detail::direction_label(i) + "]",
                             [dir = dirs[i], puncture_scale](double t) {
                                 RadialCoords x = dir;
                                 for (auto& xi : x) xi *= puncture_scale * (1.0 - t);
                                 return x;
                             }});
    }
    return d;
}

// Polydisc: each x_j < r2 individually.
inline DomainSpec domain_polydisc(int n, double r2 = 1.0) {
    if (r2 <= 0.0) throw DomainError("domain_polydisc: radius must be positive");
    DomainSpec d;
    d.dim = n;
    d.name = "polydisc";
    d.contains_origin = true;
    d.meets_all_axes = true;
    d.contains = [r2](std::span<const double> x) {
        for (double xi : x)
            if (!(xi >= 0.0 && xi < r2)) return false;
        return true;
    };
    d.sample = [n, r2](SeededRng& rng) {
        RadialCoords x(static_cast<std::size_t>(n));
        for (auto& xi : x) xi = rng.uniform(0.0, 0.95 * r2);
        return x;
    };
    for (int k = 0; k < n; ++k) {
        d.rays.push_back(Ray{"face" + std::to_string(k + 1), [n, k, r2](double t) {
                                 RadialCoords x(static_cast<std::size_t>(n), 0.4 * r2);
                                 x[static_cast<std::size_t>(k)] = r2 * t;
                                 return x;
                             }});
    }
    return d;
}

// Reinhardt-type domain {0 <= x1 < x0, 0 <= x2 < F(x1)} for a profile family.
// Rays approach the graph boundary x2 = F(x1) at fixed anchors, and follow
// curves x2 = eps * F(x1) with x1 running to the end of its range.
inline DomainSpec domain_reinhardt(const ReinhardtFamily& fam) {
    DomainSpec d;
    d.dim = 2;
    d.name = fam.name();
    d.contains_origin = true;
    d.meets_all_axes = true;
    const double x0 = fam.x0();
    const double reach = std::min(x0, 3.0);
    d.contains = [fam, x0](std::span<const double> x) {
        if (x.size() != 2) return false;
        if (!(x[0] >= 0.0 && x[0] < x0)) return false;
        return x[1] >= 0.0 && x[1] < fam.F(x[0]);
    };
    d.sample = [fam, reach](SeededRng& rng) {
        RadialCoords x(2);
        x[0] = rng.uniform(0.0, 0.95 * reach);
        x[1] = rng.uniform(0.0, 0.9 * fam.F(x[0]));
        return x;
    };
    for (double a : {0.0, 0.3 * reach, 0.7 * reach}) {
        d.rays.push_back(Ray{"x2_to_F[x1=" + std::to_string(a).substr(0, 4) + "]",
                             [fam, a](double t) {
                                 return RadialCoords{a, t * fam.F(a)};
                             }});
    }
    // Curves x2 = eps * F(x1) with x1 running to the end of its range. For the
    // exponential profile these are omitted: F underflows double precision at
    // x1 ~ 745 while the moment sum is still ~1e3, so no grid point can ever
    // reach the divergence threshold even though the true limit is +infinity.
    // The sub-exponential profiles stay representable across the whole grid.
    if (fam.kind != ReinhardtKind::Exp) {
        for (double eps : {0.25, 0.5, 0.75}) {
            d.rays.push_back(Ray{"curve[eps=" + std::to_string(eps).substr(0, 4) + "]",
                                 [fam, eps, x0](double t) {
                                     const double w = std::isinf(x0)
                                                          ? detail::unbounded_param(t)
                                                          : x0 * t;
                                     return RadialCoords{w, eps * fam.F(w)};
                                 }});
        }
    }
    return d;
}

namespace detail {

// Recover the graph family when a catalog entry is one of the Reinhardt
// potentials, honoring the parameters stored on the spec.
inline std::optional<ReinhardtFamily> reinhardt_family_of(const PotentialSpec& spec) {
    auto param = [&spec](const char* key, double fallback) {
        for (const auto& [k, v] : spec.params)
            if (k == key) return v;
        return fallback;
    };
    const std::string& n = spec.name;
    if (n == "reinhardt_exp") return ReinhardtFamily::exponential();
    if (n == "reinhardt_power") return ReinhardtFamily::power(param("p", 2.0));
    if (n == "reinhardt_rational") return ReinhardtFamily::rational(param("c", 1.0));
    if (n == "reinhardt_inv_power") return ReinhardtFamily::inv_power(param("p", 2.0));
    return std::nullopt;
}

} // namespace detail

// Natural domain for each catalog entry.
inline DomainSpec default_domain_for(const PotentialSpec& spec) {
    const std::string& n = spec.name;
    if (n == "hyperbolic") return domain_ball(spec.dim, 1.0);
    if (n == "log_potential" || n == "eguchi_hanson") return domain_punctured(spec.dim);
    if (auto fam = detail::reinhardt_family_of(spec)) return domain_reinhardt(*fam);
    return domain_full_space(spec.dim);
}

// Interior variant of the natural domain, used when sampling points for
// finite-difference cross-checks. Central differences lose accuracy near the
// domain edge: the truncation term is step^2 times a third derivative, and
// for the boundary-singular profiles that derivative grows like the inverse
// cube of the distance to the edge. Classification probes deliberately chase
// the boundary; verification sampling deliberately does not.
inline DomainSpec verification_domain_for(const PotentialSpec& spec) {
    if (spec.name == "hyperbolic") return domain_ball(spec.dim, 0.85);
    if (auto fam = detail::reinhardt_family_of(spec)) {
        DomainSpec d = domain_reinhardt(*fam);
        const ReinhardtFamily f = *fam;
        const double hi = std::min(0.6 * std::min(f.x0(), 3.0), 2.0);
        d.sample = [f, hi](SeededRng& rng) {
            RadialCoords x(2);
            x[0] = rng.uniform(0.0, hi);
            x[1] = rng.uniform(0.0, 0.5 * f.F(x[0]));
            return x;
        };
        return d;
    }
    return default_domain_for(spec);
}

// ---------------------------------------------------------------------------
// Pointwise conditions.

inline PointwiseReport check_pointwise(const PotentialSpec& spec, const DomainSpec& domain,
                                       int samples = 200, std::uint64_t seed = 42,
                                       double rounding_tol = 1e-12) {
    if (spec.dim != domain.dim) throw DomainError("check_pointwise: dimension mismatch");
    SeededRng rng(seed);
    PointwiseReport rep;
    rep.nonnegative_gradient.name = "cond0";
    rep.bounded_moment.name = "conda";
    rep.positive_gradient.name = "genconda";
    for (int i = 0; i < samples; ++i) {
        const RadialCoords x = domain.sample(rng);
        const std::vector<double> g = grad_potential(spec, x);
        double s = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) s += g[k] * x[k];

        int neg_idx = -1, nonpos_idx = -1;
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (neg_idx < 0 && g[k] < -rounding_tol) neg_idx = static_cast<int>(k);
            if (nonpos_idx < 0 && g[k] <= 0.0) nonpos_idx = static_cast<int>(k);
        }

        auto record = [&x](ConditionReport& r, int index, double value) {
            ++r.violations;
            r.pass = false;
            if (!r.witness) r.witness = Witness{x, index, value};
        };
        ++rep.nonnegative_gradient.samples;
        ++rep.bounded_moment.samples;
        ++rep.positive_gradient.samples;
        if (neg_idx >= 0)
            record(rep.nonnegative_gradient, neg_idx, g[static_cast<std::size_t>(neg_idx)]);
        if (neg_idx >= 0)
            record(rep.bounded_moment, neg_idx, g[static_cast<std::size_t>(neg_idx)]);
        else if (s >= 1.0)
            record(rep.bounded_moment, -1, s);
        if (nonpos_idx >= 0)
            record(rep.positive_gradient, nonpos_idx, g[static_cast<std::size_t>(nonpos_idx)]);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Boundary probes.

struct ProbeParams {
    int steps = 48;                      // grid t_k = 1 - 2^-k
    double divergence_threshold = 1e6;   // S beyond this, increasing => diverges
    double limit_tol = 1e-4;             // |S - 1| below this, shrinking => limit 1
    int tail = 6;                        // window for trend detection
};

enum class RayTrend { Diverges, Bounded, Inconclusive };
enum class RayLimitOne { TendsToOne, Other, Inconclusive };

inline std::string trend_name(RayTrend t) {
    switch (t) {
        case RayTrend::Diverges: return "diverges";
        case RayTrend::Bounded: return "bounded";
        case RayTrend::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

inline std::string limit_one_name(RayLimitOne l) {
    switch (l) {
        case RayLimitOne::TendsToOne: return "tends_to_one";
        case RayLimitOne::Other: return "other";
        case RayLimitOne::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

struct RayProbe {
    std::string label;
    std::vector<double> t_grid;
    std::vector<double> s_values; // moment sums; may stop early on evaluation failure
    bool truncated = false;       // an evaluation failed or left the domain
    bool saw_infinity = false;
    RayTrend trend = RayTrend::Inconclusive;
    RayLimitOne limit_one = RayLimitOne::Inconclusive;
    double last = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline void analyze_ray(RayProbe& probe, const ProbeParams& params) {
    const auto& v = probe.s_values;
    const std::size_t len = v.size();
    if (len > 0) probe.last = v.back();

    const std::size_t tail = std::min<std::size_t>(static_cast<std::size_t>(params.tail), len);
    if (tail < 2) {
        // Not enough data for any trend; a bare infinity still counts as blow-up.
        if (probe.saw_infinity) {
            probe.trend = RayTrend::Diverges;
            probe.limit_one = RayLimitOne::Other;
        }
        return;
    }
    const std::size_t start = len - tail;

    bool nondecreasing = true;
    double max_delta = 0.0;
    bool dist_shrinking = true;
    for (std::size_t i = start + 1; i < len; ++i) {
        if (v[i] < v[i - 1]) nondecreasing = false;
        max_delta = std::max(max_delta, std::abs(v[i] - v[i - 1]));
        if (std::abs(v[i] - 1.0) > std::abs(v[i - 1] - 1.0)) dist_shrinking = false;
    }
    const bool strictly_grew = v.back() > v[start];
    const double back = v.back();

    const bool diverges =
        (probe.saw_infinity && nondecreasing) ||
        (nondecreasing && strictly_grew && back > params.divergence_threshold);
    const bool settled =
        !probe.saw_infinity && max_delta <= 1e-3 * std::max(1.0, std::abs(back));
    const bool limit_is_one = settled && dist_shrinking && std::abs(back - 1.0) < params.limit_tol;

    if (diverges)
        probe.trend = RayTrend::Diverges;
    else if (settled)
        probe.trend = RayTrend::Bounded;
    else
        probe.trend = RayTrend::Inconclusive;

    if (limit_is_one)
        probe.limit_one = RayLimitOne::TendsToOne;
    else if (diverges || settled)
        probe.limit_one = RayLimitOne::Other;
    else
        probe.limit_one = RayLimitOne::Inconclusive;
}

} // namespace detail

inline std::vector<RayProbe> probe_boundary(const PotentialSpec& spec, const DomainSpec& domain,
                                            const ProbeParams& params = {}) {
    if (spec.dim != domain.dim) throw DomainError("probe_boundary: dimension mismatch");
    std::vector<RayProbe> probes;
    probes.reserve(domain.rays.size());
    for (const Ray& ray : domain.rays) {
        RayProbe probe;
        probe.label = ray.label;
        for (int k = 1; k <= params.steps; ++k) {
            const double t = 1.0 - std::ldexp(1.0, -k);
            const RadialCoords x = ray.path(t);
            if (!domain.contains(x)) {
                if (probe.s_values.empty() && k == 1)
                    throw RayExitsDomain("ray '" + ray.label + "' starts outside the domain");
                probe.truncated = true;
                break;
            }
            double s;
            try {
                s = moment_sum(spec, x);
            } catch (const Error&) {
                probe.truncated = true;
                break;
            }
            if (std::isnan(s)) {
                probe.truncated = true;
                break;
            }
            if (std::isinf(s)) {
                probe.saw_infinity = s > 0.0;
                probe.truncated = true;
                break;
            }
            probe.t_grid.push_back(t);
            probe.s_values.push_back(s);
        }
        detail::analyze_ray(probe, params);
        probes.push_back(std::move(probe));
    }
    return probes;
}

// ---------------------------------------------------------------------------
// Verdicts.

enum class Verdict {
    NoSpecialImmersion,
    Immersion,
    GlobalSymplectomorphism,
    ProjectiveEmbedding,
    Inconclusive,
};

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::NoSpecialImmersion: return "no_special_immersion";
        case Verdict::Immersion: return "immersion";
        case Verdict::GlobalSymplectomorphism: return "global_symplectomorphism";
        case Verdict::ProjectiveEmbedding: return "projective_embedding";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

struct Classification {
    PointwiseReport pointwise;
    std::vector<RayProbe> rays;
    bool contains_origin = false;
    bool meets_all_axes = false;
    Verdict flat = Verdict::Inconclusive;
    Verdict hyperbolic = Verdict::Inconclusive;
    Verdict fubini_study = Verdict::Inconclusive;

    Verdict for_target(TargetSpaceForm t) const {
        switch (t) {
            case TargetSpaceForm::Flat: return flat;
            case TargetSpaceForm::Hyperbolic: return hyperbolic;
            case TargetSpaceForm::FubiniStudy: return fubini_study;
        }
        return Verdict::Inconclusive;
    }
};

namespace detail {

inline Verdict aggregate_unbounded(const PointwiseReport& pw, const std::vector<RayProbe>& rays,
                                   bool contains_origin, bool meets_all_axes) {
    if (!pw.nonnegative_gradient.pass) return Verdict::NoSpecialImmersion;
    if (!contains_origin || !meets_all_axes) return Verdict::Immersion;
    if (!pw.positive_gradient.pass) return Verdict::Immersion;
    if (rays.empty()) return Verdict::Inconclusive;
    bool any_bounded = false, any_inconclusive = false;
    for (const RayProbe& r : rays) {
        if (r.trend == RayTrend::Bounded) any_bounded = true;
        if (r.trend == RayTrend::Inconclusive) any_inconclusive = true;
    }
    if (any_bounded) return Verdict::Immersion;
    if (any_inconclusive) return Verdict::Inconclusive;
    return Verdict::GlobalSymplectomorphism;
}

inline Verdict aggregate_projective(const PointwiseReport& pw, const std::vector<RayProbe>& rays,
                                    bool contains_origin, bool meets_all_axes) {
    if (!pw.bounded_moment.pass) return Verdict::NoSpecialImmersion;
    if (!contains_origin || !meets_all_axes) return Verdict::Immersion;
    if (!pw.positive_gradient.pass) return Verdict::Immersion;
    if (rays.empty()) return Verdict::Inconclusive;
    bool any_other = false, any_inconclusive = false;
    for (const RayProbe& r : rays) {
        if (r.limit_one == RayLimitOne::Other) any_other = true;
        if (r.limit_one == RayLimitOne::Inconclusive) any_inconclusive = true;
    }
    if (any_other) return Verdict::Immersion;
    if (any_inconclusive) return Verdict::Inconclusive;
    return Verdict::ProjectiveEmbedding;
}

} // namespace detail

inline Classification classify(const PotentialSpec& spec, const DomainSpec& domain,
                               int samples = 200, std::uint64_t seed = 42,
                               const ProbeParams& params = {}) {
    Classification c;
    c.pointwise = check_pointwise(spec, domain, samples, seed);
    c.rays = probe_boundary(spec, domain, params);
    c.contains_origin = domain.contains_origin;
    c.meets_all_axes = domain.meets_all_axes;
    c.flat = detail::aggregate_unbounded(c.pointwise, c.rays, c.contains_origin,
                                         c.meets_all_axes);
    c.hyperbolic = c.flat; // same construction criteria; both targets are unbounded
    c.fubini_study = detail::aggregate_projective(c.pointwise, c.rays, c.contains_origin,
                                                  c.meets_all_axes);
    return c;
}

// Diagnostic for the Reinhardt families: the metric positivity reduces to
// A'(x) > 0 for A(x) = -x F'(x)/F(x) on the x1 range.
struct MonotonicityReport {
    bool pass = true;
    int samples = 0;
    double min_value = std::numeric_limits<double>::infinity();
    std::optional<Witness> witness;
};

inline MonotonicityReport reinhardt_kahler_precondition(const ReinhardtFamily& fam,
                                                        int samples = 200,
                                                        std::uint64_t seed = 42) {
    SeededRng rng(seed);
    const double reach = std::min(fam.x0(), 3.0);
    MonotonicityReport rep;
    for (int i = 0; i < samples; ++i) {
        const double x = rng.uniform(1e-6, 0.95 * reach);
        const double ap = fam.A_prime(x);
        ++rep.samples;
        if (ap < rep.min_value) rep.min_value = ap;
        if (ap <= 0.0) {
            rep.pass = false;
            if (!rep.witness) rep.witness = Witness{{x}, 0, ap};
        }
    }
    return rep;
}

} // namespace symap

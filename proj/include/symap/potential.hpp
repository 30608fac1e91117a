#pragma once

// Rotation-invariant Kähler potentials Phi(z) = phi(x1..xn) with x_j = |z_j|^2.
// A PotentialSpec is either an expression tree in the radial variables or the
// implicit family from lebrun.hpp. Values, gradients, Hessians, and Taylor
// series all run through the same generic evaluator, so derivative quantities
// are exact (no finite differencing anywhere in this header).

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symap/dual.hpp"
#include "symap/errors.hpp"
#include "symap/expr.hpp"
#include "symap/lebrun.hpp"
#include "symap/series.hpp"

namespace symap {

struct PotentialSpec {
    int dim = 0;
    std::string name;                                  // catalog name or "dsl"
    ExprPtr ast;                                       // null for implicit bodies
    std::optional<LebrunParams> lebrun;                // set for the implicit family
    std::vector<std::pair<std::string, double>> params; // recorded constructor parameters

    bool implicit() const { return lebrun.has_value(); }
};

inline void check_point_dim(const PotentialSpec& spec, std::size_t n, const char* who) {
    if (static_cast<std::size_t>(spec.dim) != n)
        throw Error(std::string(who) + ": point has " + std::to_string(n) +
                    " coordinates, potential expects " + std::to_string(spec.dim));
}

inline PotentialSpec make_potential(const std::string& dsl, int dim,
                                    const std::string& name = "dsl") {
    PotentialSpec spec;
    spec.dim = dim;
    spec.name = name;
    spec.ast = parse_expr(dsl, dim);
    return spec;
}

inline double eval_potential(const PotentialSpec& spec, std::span<const double> x) {
    check_point_dim(spec, x.size(), "eval_potential");
    if (spec.implicit()) {
        const LebrunCoords c = lebrun_solve(spec.lebrun->m, x);
        return lebrun_value_uv(spec.lebrun->m, c.U, c.V);
    }
    return eval_expr<double>(*spec.ast, x);
}

inline std::vector<double> grad_potential(const PotentialSpec& spec, std::span<const double> x) {
    check_point_dim(spec, x.size(), "grad_potential");
    if (spec.implicit()) {
        const LebrunCoords c = lebrun_solve(spec.lebrun->m, x);
        const auto g = lebrun_grad_uv(spec.lebrun->m, c.U, c.V);
        return {g[0], g[1]};
    }
    const std::size_t n = x.size();
    std::vector<DualN> xd;
    xd.reserve(n);
    for (std::size_t j = 0; j < n; ++j) xd.push_back(DualN::variable(x[j], n, j));
    return eval_expr<DualN>(*spec.ast, xd).d;
}

// Value, gradient, and exactly symmetric Hessian in one pass.
inline ValueGradHess hess_potential(const PotentialSpec& spec, std::span<const double> x) {
    check_point_dim(spec, x.size(), "hess_potential");
    if (spec.implicit()) return lebrun_value_grad_hess(spec.lebrun->m, x);
    const std::size_t n = x.size();
    std::vector<Dual2N> xd;
    xd.reserve(n);
    for (std::size_t j = 0; j < n; ++j) xd.push_back(Dual2N::variable(x[j], n, j));
    const Dual2N r = eval_expr<Dual2N>(*spec.ast, xd);
    ValueGradHess out;
    out.value = r.v;
    out.grad = r.g;
    out.hess = r.h;
    return out;
}

// Moment sum S(x) = sum_k x_k dPhi/dx_k.
inline double moment_sum(const PotentialSpec& spec, std::span<const double> x) {
    const std::vector<double> g = grad_potential(spec, x);
    double s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) s += g[k] * x[k];
    return s;
}

// Taylor coefficients of the potential at 0 on the given index order.
// Errors from evaluating at 0 (log of a vanishing argument, division by a
// zero constant term) propagate; callers that promise analyticity translate
// them to NotAnalyticAtOrigin.
inline TruncatedSeries potential_series(const PotentialSpec& spec,
                                        std::shared_ptr<const MultiIndexOrder> order) {
    if (order->dim() != spec.dim)
        throw Error("potential_series: order dim does not match potential dim");
    if (spec.implicit()) return lebrun_series(spec.lebrun->m, std::move(order));
    std::vector<TruncatedSeries> xs;
    xs.reserve(static_cast<std::size_t>(spec.dim));
    for (int j = 0; j < spec.dim; ++j) xs.push_back(TruncatedSeries::variable(order, j));
    return eval_expr<TruncatedSeries>(*spec.ast, xs);
}

// ---------------------------------------------------------------------------
// Catalog.

inline PotentialSpec catalog_flat(int n = 2) {
    PotentialSpec spec;
    spec.dim = n;
    spec.name = "flat";
    spec.ast = ex_r2();
    return spec;
}

inline PotentialSpec catalog_hyperbolic(int n = 2) {
    PotentialSpec spec;
    spec.dim = n;
    spec.name = "hyperbolic";
    spec.ast = ex_neg(ex_log(ex_sub(ex_num(1.0), ex_r2())));
    return spec;
}

inline PotentialSpec catalog_fubini_study(int n = 2) {
    PotentialSpec spec;
    spec.dim = n;
    spec.name = "fubini_study";
    spec.ast = ex_log(ex_add(ex_num(1.0), ex_r2()));
    return spec;
}

// Bounded Reinhardt-type domains {x1 < x0, x2 < F(x1)} with potential
// -log(F(x1) - x2). Four profile families, all with F > 0, F' < 0 and the
// monotonicity A(x) = -x F'(x)/F(x) increasing that the construction needs.
enum class ReinhardtKind { Exp, Power, Rational, InvPower };

struct ReinhardtFamily {
    ReinhardtKind kind = ReinhardtKind::Exp;
    double param = 0.0; // p for Power/InvPower, c for Rational, unused for Exp

    static ReinhardtFamily exponential() { return {ReinhardtKind::Exp, 0.0}; }
    static ReinhardtFamily power(double p) {
        if (p <= 0.0) throw DomainError("reinhardt power family requires p > 0");
        return {ReinhardtKind::Power, p};
    }
    static ReinhardtFamily rational(double c) {
        if (c <= 0.0) throw DomainError("reinhardt rational family requires c > 0");
        return {ReinhardtKind::Rational, c};
    }
    static ReinhardtFamily inv_power(double p) {
        if (p < 1.0 || p != std::floor(p))
            throw DomainError("reinhardt inverse-power family requires integer p >= 1");
        return {ReinhardtKind::InvPower, p};
    }

    // Right end of the x1 range (infinite except for the power family).
    double x0() const {
        return kind == ReinhardtKind::Power ? 1.0 : std::numeric_limits<double>::infinity();
    }

    std::string name() const {
        switch (kind) {
            case ReinhardtKind::Exp: return "reinhardt_exp";
            case ReinhardtKind::Power: return "reinhardt_power";
            case ReinhardtKind::Rational: return "reinhardt_rational";
            case ReinhardtKind::InvPower: return "reinhardt_inv_power";
        }
        return "reinhardt";
    }

    template <class S>
    S profile(const S& x) const {
        const S one = s_constant(1.0, x);
        switch (kind) {
            case ReinhardtKind::Exp: return s_exp(-x);
            case ReinhardtKind::Power: return s_pow(one - x, s_constant(param, x));
            case ReinhardtKind::Rational: {
                const S c = s_constant(param, x);
                return s_div(c, c + x);
            }
            case ReinhardtKind::InvPower: return s_pow(one + x, s_constant(-param, x));
        }
        throw NumericalError("reinhardt profile: bad kind");
    }

    double F(double x) const { return profile<double>(x); }

    double dF(double x) const {
        DualN xd = DualN::variable(x, 1, 0);
        return profile<DualN>(xd).d[0];
    }

    // A(x) = -x F'(x)/F(x) and its derivative; A' > 0 on (0, x0) is the
    // precondition for the potential below to be Kähler on the whole domain.
    double A(double x) const { return -x * dF(x) / F(x); }

    double A_prime(double x) const {
        const Dual2N f = profile<Dual2N>(Dual2N::variable(x, 1, 0));
        const double Fv = f.v, Fp = f.g[0], Fpp = f.hess(0, 0);
        return -(Fp + x * Fpp) / Fv + x * Fp * Fp / (Fv * Fv);
    }

    ExprPtr f_ast() const {
        switch (kind) {
            case ReinhardtKind::Exp: return ex_exp(ex_neg(ex_var(0)));
            case ReinhardtKind::Power:
                return ex_pow(ex_sub(ex_num(1.0), ex_var(0)), ex_num(param));
            case ReinhardtKind::Rational:
                return ex_div(ex_num(param), ex_add(ex_num(param), ex_var(0)));
            case ReinhardtKind::InvPower:
                return ex_pow(ex_add(ex_num(1.0), ex_var(0)), ex_num(-param));
        }
        throw NumericalError("reinhardt f_ast: bad kind");
    }
};

inline PotentialSpec catalog_reinhardt(const ReinhardtFamily& fam) {
    PotentialSpec spec;
    spec.dim = 2;
    spec.name = fam.name();
    spec.ast = ex_neg(ex_log(ex_sub(fam.f_ast(), ex_var(1))));
    if (fam.kind == ReinhardtKind::Power || fam.kind == ReinhardtKind::InvPower)
        spec.params.emplace_back("p", fam.param);
    if (fam.kind == ReinhardtKind::Rational) spec.params.emplace_back("c", fam.param);
    return spec;
}

// a log(x1 + x2) + b (x1 + x2) + c on C^2 minus the origin.
inline PotentialSpec catalog_log_potential(double a = 1.0, double b = 1.0, double c = 0.0) {
    if (a <= 0.0 || b <= 0.0)
        throw DomainError("log potential requires a > 0 and b > 0");
    PotentialSpec spec;
    spec.dim = 2;
    spec.name = "log_potential";
    spec.ast = ex_add(ex_add(ex_mul(ex_num(a), ex_log(ex_r2())), ex_mul(ex_num(b), ex_r2())),
                      ex_num(c));
    spec.params = {{"a", a}, {"b", b}, {"c", c}};
    return spec;
}

// Ricci-flat potential on the complement of the origin in C^2, written in the
// radial sum s = x1 + x2: sqrt(s^2 + 1) + log s - log(sqrt(s^2 + 1) + 1).
inline PotentialSpec catalog_eguchi_hanson() {
    PotentialSpec spec;
    spec.dim = 2;
    spec.name = "eguchi_hanson";
    ExprPtr root = ex_sqrt(ex_add(ex_mul(ex_r2(), ex_r2()), ex_num(1.0)));
    spec.ast = ex_sub(ex_add(root, ex_log(ex_r2())),
                      ex_log(ex_add(ex_sqrt(ex_add(ex_mul(ex_r2(), ex_r2()), ex_num(1.0))),
                                    ex_num(1.0))));
    return spec;
}

inline PotentialSpec catalog_lebrun(double m) {
    if (m < 0.0) throw DomainError("lebrun family requires m >= 0");
    PotentialSpec spec;
    spec.dim = 2;
    spec.name = "lebrun";
    spec.lebrun = LebrunParams{m};
    spec.params = {{"m", m}};
    return spec;
}

struct CatalogEntry {
    std::string name;
    std::string description;
    std::string parameters; // human-readable parameter list with defaults
};

inline const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = {
        {"flat", "r2 (standard form on C^n)", "dim"},
        {"hyperbolic", "-log(1 - r2) on the unit ball", "dim"},
        {"fubini_study", "log(1 + r2) (affine chart of projective space)", "dim"},
        {"reinhardt_exp", "-log(exp(-x1) - x2) on x2 < exp(-x1)", ""},
        {"reinhardt_power", "-log(pow(1 - x1, p) - x2) on x1 < 1, x2 < (1-x1)^p", "p=2"},
        {"reinhardt_rational", "-log(c/(c + x1) - x2) on x2 < c/(c+x1)", "c=1"},
        {"reinhardt_inv_power", "-log(pow(1 + x1, -p) - x2) on x2 < (1+x1)^-p", "p=2"},
        {"log_potential", "a*log(r2) + b*r2 + c on C^2 minus the origin", "a=1, b=1, c=0"},
        {"eguchi_hanson", "sqrt(r2^2+1) + log(r2) - log(sqrt(r2^2+1)+1), origin removed", ""},
        {"lebrun", "implicit scalar-flat family, parameter m >= 0", "m=0.5"},
    };
    return entries;
}

// Build a catalog entry by name; `params` supplies overrides for the entry's
// named parameters, `dim` applies to the space-form potentials only.
inline PotentialSpec catalog_lookup(const std::string& name, int dim,
                                    const std::map<std::string, double>& params = {}) {
    auto get = [&](const char* key, double dflt) {
        const auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    if (name == "flat") return catalog_flat(dim);
    if (name == "hyperbolic") return catalog_hyperbolic(dim);
    if (name == "fubini_study") return catalog_fubini_study(dim);
    if (name == "reinhardt_exp") return catalog_reinhardt(ReinhardtFamily::exponential());
    if (name == "reinhardt_power")
        return catalog_reinhardt(ReinhardtFamily::power(get("p", 2.0)));
    if (name == "reinhardt_rational")
        return catalog_reinhardt(ReinhardtFamily::rational(get("c", 1.0)));
    if (name == "reinhardt_inv_power")
        return catalog_reinhardt(ReinhardtFamily::inv_power(get("p", 2.0)));
    if (name == "log_potential")
        return catalog_log_potential(get("a", 1.0), get("b", 1.0), get("c", 0.0));
    if (name == "eguchi_hanson") return catalog_eguchi_hanson();
    if (name == "lebrun") return catalog_lebrun(get("m", 0.5));
    throw Error("unknown catalog potential '" + name + "'");
}

} // namespace symap

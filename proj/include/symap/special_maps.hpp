#pragma once

// Special maps: holomorphic maps of the form z |-> (psi_1(x) z_1, ..., psi_n(x) z_n)
// where x_j = |z_j|^2 and each profile component psi_k depends only on x.
// A profile evaluates either on plain doubles or on first-order duals; the
// dual path supplies the partial derivatives d(psi_k^2)/dx_l needed by the
// pullback diagnostics.

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symap/dual.hpp"
#include "symap/errors.hpp"
#include "symap/potential.hpp"
#include "symap/space_forms.hpp"

namespace symap {

class Profile {
public:
    virtual ~Profile() = default;
    virtual int dim() const = 0;
    // psi(x) componentwise; x are radial coordinates (non-negative).
    virtual std::vector<double> eval(std::span<const double> x) const = 0;
    virtual std::vector<DualN> eval_dual(std::span<const DualN> x) const = 0;
};

using ProfilePtr = std::shared_ptr<const Profile>;

template <class S>
std::vector<S> profile_eval(const Profile& p, std::span<const S> x) {
    if constexpr (std::is_same_v<S, double>) {
        return p.eval(x);
    } else {
        return p.eval_dual(x);
    }
}

// Adapter for generic functors `template <class S> vector<S> operator()(span<const S>)`.
template <class F>
class CallableProfile final : public Profile {
public:
    CallableProfile(int n, F f) : n_(n), f_(std::move(f)) {}
    int dim() const override { return n_; }
    std::vector<double> eval(std::span<const double> x) const override { return f_(x); }
    std::vector<DualN> eval_dual(std::span<const DualN> x) const override { return f_(x); }

private:
    int n_;
    F f_;
};

template <class F>
ProfilePtr make_profile(int n, F f) {
    return std::make_shared<CallableProfile<F>>(n, std::move(f));
}

struct SpecialMap {
    int dim = 0;
    TargetSpaceForm target = TargetSpaceForm::Flat;
    std::string label;
    ProfilePtr profile;
};

// Apply the map to a complex point. Components with z_k == 0 stay exactly 0.
inline CPoint apply_special_map(const SpecialMap& m, std::span<const std::complex<double>> z) {
    if (static_cast<int>(z.size()) != m.dim)
        throw DomainError("apply_special_map: point dimension mismatch");
    const RadialCoords x = radial(z);
    const std::vector<double> psi = m.profile->eval(x);
    CPoint out(z.size());
    for (std::size_t k = 0; k < z.size(); ++k)
        out[k] = (z[k] == std::complex<double>(0.0, 0.0)) ? std::complex<double>(0.0, 0.0)
                                                          : psi[k] * z[k];
    return out;
}

namespace detail {

// Gradient of the source potential lifted to duals via its Hessian:
// ghat_k has value grad_k(x) and derivative d_l = H[k][l].
inline std::vector<DualN> dual_gradient(const PotentialSpec& spec, std::span<const DualN> xd) {
    const int n = spec.dim;
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = xd[static_cast<std::size_t>(j)].v;
    const ValueGradHess vgh = hess_potential(spec, x);
    const std::size_t nd = xd.empty() ? 0 : xd[0].d.size();
    std::vector<DualN> g(static_cast<std::size_t>(n), xd[0].like_constant(0.0));
    for (int k = 0; k < n; ++k) {
        DualN gk = xd[0].like_constant(vgh.grad[static_cast<std::size_t>(k)]);
        for (int l = 0; l < n; ++l) {
            const double hkl = vgh.hess_at(k, l);
            for (std::size_t r = 0; r < nd; ++r)
                gk.d[r] += hkl * xd[static_cast<std::size_t>(l)].d[r];
        }
        g[static_cast<std::size_t>(k)] = gk;
    }
    return g;
}

} // namespace detail

// Profile constructed from a source potential and a target space form:
//   flat:          psi_k = sqrt(g_k)
//   hyperbolic:    psi_k = sqrt(g_k / (1 + S))
//   fubini_study:  psi_k = sqrt(g_k / (1 - S)),  requiring S < 1
// where g = grad of the radial potential and S = sum_j g_j x_j.
class BuiltProfile final : public Profile {
public:
    BuiltProfile(PotentialSpec spec, TargetSpaceForm target)
        : spec_(std::move(spec)), target_(target) {}

    int dim() const override { return spec_.dim; }

    std::vector<double> eval(std::span<const double> x) const override {
        const std::vector<double> g = grad_potential(spec_, x);
        double s = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) s += g[j] * x[j];
        return finish(g, s, x.size());
    }

    std::vector<DualN> eval_dual(std::span<const DualN> x) const override {
        const std::vector<DualN> g = detail::dual_gradient(spec_, x);
        DualN s = x[0].like_constant(0.0);
        for (std::size_t j = 0; j < g.size(); ++j) s = s + g[j] * x[j];
        return finish(g, s, x.size());
    }

private:
    template <class S>
    std::vector<S> finish(const std::vector<S>& g, const S& s, std::size_t n) const {
        S denom = s_constant(1.0, s);
        switch (target_) {
        case TargetSpaceForm::Flat:
            break;
        case TargetSpaceForm::Hyperbolic:
            denom = denom + s;
            break;
        case TargetSpaceForm::FubiniStudy:
            denom = denom - s;
            if (value_of(denom) <= 0.0)
                throw FSDenominator("projective profile undefined: moment sum " +
                                    std::to_string(value_of(s)) + " >= 1");
            break;
        }
        std::vector<S> psi;
        psi.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            if (value_of(g[k]) < 0.0)
                throw NegativeRadicand("profile component " + std::to_string(k + 1) +
                                       ": gradient " + std::to_string(value_of(g[k])) +
                                       " is negative");
            psi.push_back(s_sqrt(s_div(g[k], denom)));
        }
        return psi;
    }

    static double value_of(double v) { return v; }
    static double value_of(const DualN& d) { return d.v; }

    PotentialSpec spec_;
    TargetSpaceForm target_;
};

inline SpecialMap build_special_map(const PotentialSpec& spec, TargetSpaceForm target) {
    SpecialMap m;
    m.dim = spec.dim;
    m.target = target;
    m.label = spec.name + "->" + target_name(target);
    m.profile = std::make_shared<BuiltProfile>(spec, target);
    return m;
}

namespace detail {

// psi = 1/sqrt(1 -+ sum x), shared by the two Cayley directions.
struct CayleyFn {
    double sign = -1.0; // -1: 1 - sum (ball -> flat); +1: 1 + sum (flat -> ball)
    template <class S>
    std::vector<S> operator()(std::span<const S> x) const {
        S s = s_constant(0.0, x[0]);
        for (const S& xi : x) s = s + xi;
        const S denom = s_constant(1.0, s) + sign * s;
        const S psi = s_sqrt(s_div(s_constant(1.0, s), denom));
        return std::vector<S>(x.size(), psi);
    }
};

struct IdentityFn {
    template <class S>
    std::vector<S> operator()(std::span<const S> x) const {
        return std::vector<S>(x.size(), s_constant(1.0, x[0]));
    }
};

} // namespace detail

// The Cayley transform z -> z / sqrt(1 - sum x) as a special map (ball -> flat).
inline SpecialMap cayley_special(int n) {
    SpecialMap m;
    m.dim = n;
    m.target = TargetSpaceForm::Flat;
    m.label = "cayley";
    m.profile = make_profile(n, detail::CayleyFn{-1.0});
    return m;
}

// Inverse Cayley transform z -> z / sqrt(1 + sum x) (flat -> ball).
inline SpecialMap cayley_inverse_special(int n) {
    SpecialMap m;
    m.dim = n;
    m.target = TargetSpaceForm::Hyperbolic;
    m.label = "cayley_inverse";
    m.profile = make_profile(n, detail::CayleyFn{+1.0});
    return m;
}

// The same profile as cayley_special but aimed at the projective chart:
// z -> z / sqrt(1 - sum x) carries the flat form on the unit ball onto the
// projective form, so the source potential to verify against is the flat one.
inline SpecialMap cayley_projective_special(int n) {
    SpecialMap m;
    m.dim = n;
    m.target = TargetSpaceForm::FubiniStudy;
    m.label = "cayley_projective";
    m.profile = make_profile(n, detail::CayleyFn{-1.0});
    return m;
}

inline SpecialMap identity_special(int n, TargetSpaceForm target) {
    SpecialMap m;
    m.dim = n;
    m.target = target;
    m.label = "identity";
    m.profile = make_profile(n, detail::IdentityFn{});
    return m;
}

// Composition (outer o inner) as a single special map. Componentwise
//   psi_k(x) = psi_out_k(y) * psi_in_k(x)  with  y_j = psi_in_j(x)^2 x_j.
class ComposedProfile final : public Profile {
public:
    ComposedProfile(ProfilePtr outer, ProfilePtr inner)
        : outer_(std::move(outer)), inner_(std::move(inner)) {}

    int dim() const override { return inner_->dim(); }

    std::vector<double> eval(std::span<const double> x) const override { return run<double>(x); }
    std::vector<DualN> eval_dual(std::span<const DualN> x) const override { return run<DualN>(x); }

private:
    template <class S>
    std::vector<S> run(std::span<const S> x) const {
        const std::vector<S> in = profile_eval<S>(*inner_, x);
        std::vector<S> y(x.size(), s_constant(0.0, x[0]));
        for (std::size_t j = 0; j < x.size(); ++j) y[j] = in[j] * in[j] * x[j];
        const std::vector<S> out = profile_eval<S>(*outer_, std::span<const S>(y));
        std::vector<S> psi(x.size(), s_constant(0.0, x[0]));
        for (std::size_t k = 0; k < x.size(); ++k) psi[k] = out[k] * in[k];
        return psi;
    }

    ProfilePtr outer_;
    ProfilePtr inner_;
};

inline SpecialMap compose_special(const SpecialMap& outer, const SpecialMap& inner) {
    if (outer.dim != inner.dim)
        throw DomainError("compose_special: dimension mismatch");
    SpecialMap m;
    m.dim = inner.dim;
    m.target = outer.target;
    m.label = outer.label + " o " + inner.label;
    m.profile = std::make_shared<ComposedProfile>(outer.profile, inner.profile);
    return m;
}

// Componentwise identity check of the defining first-order condition.
// For each k with x_k participating:
//   gamma_k    = psi_k(x)^2 * G'(sum_j psi_j(x)^2 x_j)   (G' = target gradient)
//   residual_k = gamma_k - g_k - c_k / x_k
// A built profile satisfies residual == 0 identically with c == 0.
struct LemmaReport {
    std::vector<double> gamma;
    std::vector<double> correction; // gamma_k - g_k
    std::vector<double> residual;
    double max_abs_residual = 0.0;
};

inline LemmaReport check_lemma_condition(const SpecialMap& m, const PotentialSpec& spec,
                                         std::span<const double> x,
                                         std::span<const double> c = {}) {
    if (m.dim != spec.dim) throw DomainError("check_lemma_condition: dimension mismatch");
    check_point_dim(spec, x.size(), "check_lemma_condition");
    if (!c.empty() && c.size() != x.size())
        throw DomainError("check_lemma_condition: constant vector dimension mismatch");

    const std::vector<double> psi = m.profile->eval(x);
    const std::vector<double> g = grad_potential(spec, x);
    double sum_y = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) sum_y += psi[j] * psi[j] * x[j];
    const double gp = target_gradient(m.target, sum_y);

    LemmaReport rep;
    rep.gamma.resize(x.size());
    rep.correction.resize(x.size());
    rep.residual.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        rep.gamma[k] = psi[k] * psi[k] * gp;
        rep.correction[k] = rep.gamma[k] - g[k];
        double ck_term = 0.0;
        if (!c.empty() && c[k] != 0.0) {
            if (x[k] == 0.0)
                throw DomainError("check_lemma_condition: c_k != 0 requires x_k > 0");
            ck_term = c[k] / x[k];
        }
        rep.residual[k] = rep.correction[k] - ck_term;
        rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(rep.residual[k]));
    }
    return rep;
}

} // namespace symap

// Realification of (1,1)-forms, numerical Jacobians, and the pullback
// identity J^T W_target J = W_source.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "symap/admissibility.hpp"
#include "symap/pullback.hpp"
#include "symap/sampling.hpp"

using namespace symap;

namespace {

constexpr std::complex<double> I{0.0, 1.0};

std::vector<CPoint> sample_points(const PotentialSpec& spec, int n, std::uint64_t seed) {
    const DomainSpec dom = verification_domain_for(spec);
    SeededRng rng(seed);
    std::vector<CPoint> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pts.push_back(with_phases(rng, dom.sample(rng)));
    return pts;
}

} // namespace

TEST_CASE("realified form of the unit coefficient is the standard block") {
    FormMatrix w;
    w.h = Eigen::MatrixXcd::Identity(1, 1);
    const Eigen::MatrixXd omega = form_to_real(w).omega;
    REQUIRE(omega.rows() == 2);
    REQUIRE(std::abs(omega(0, 1) - 1.0) < 1e-15);
    REQUIRE(std::abs(omega(1, 0) + 1.0) < 1e-15);
    REQUIRE(std::abs(omega(0, 0)) < 1e-15);
    REQUIRE(std::abs(omega(1, 1)) < 1e-15);
}

TEST_CASE("realified diagonal coefficients scale each plane block") {
    FormMatrix w;
    w.h = Eigen::MatrixXcd::Zero(2, 2);
    w.h(0, 0) = 2.0;
    w.h(1, 1) = 3.0;
    const Eigen::MatrixXd omega = form_to_real(w).omega;
    REQUIRE(omega.rows() == 4);
    REQUIRE(std::abs(omega(0, 1) - 2.0) < 1e-15);
    REQUIRE(std::abs(omega(1, 0) + 2.0) < 1e-15);
    REQUIRE(std::abs(omega(2, 3) - 3.0) < 1e-15);
    REQUIRE(std::abs(omega(3, 2) + 3.0) < 1e-15);
    // Off-plane entries vanish.
    REQUIRE(std::abs(omega(0, 2)) < 1e-15);
    REQUIRE(std::abs(omega(1, 3)) < 1e-15);
    // Always antisymmetric.
    REQUIRE((omega + omega.transpose()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("realified imaginary off-diagonal couples the planes") {
    FormMatrix w;
    w.h = Eigen::MatrixXcd::Zero(2, 2);
    w.h(0, 1) = I;
    w.h(1, 0) = -I;
    const Eigen::MatrixXd omega = form_to_real(w).omega;
    REQUIRE(std::abs(omega(0, 2) + 1.0) < 1e-15);
    REQUIRE(std::abs(omega(1, 3) + 1.0) < 1e-15);
    REQUIRE(std::abs(omega(2, 0) - 1.0) < 1e-15);
    REQUIRE(std::abs(omega(3, 1) - 1.0) < 1e-15);
    REQUIRE((omega + omega.transpose()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("non-hermitian coefficient matrices are rejected") {
    FormMatrix w;
    w.h = Eigen::MatrixXcd::Zero(2, 2);
    w.h(0, 1) = I;
    w.h(1, 0) = I; // adjoint would need -I
    REQUIRE_THROWS_AS(form_to_real(w), NotHermitian);
}

TEST_CASE("numerical Jacobian of the identity map is the identity matrix") {
    const SpecialMap id = identity_special(2, TargetSpaceForm::Flat);
    const CPoint z = {0.4 + 0.2 * I, -0.3 + 0.6 * I};
    const Eigen::MatrixXd J = real_jacobian(id, z);
    REQUIRE(J.rows() == 4);
    REQUIRE((J - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("numerical Jacobian matches the analytic one for a linear rescaling") {
    // psi = 2 componentwise: w = 2z, so the real Jacobian is 2I.
    SpecialMap m;
    m.dim = 2;
    m.target = TargetSpaceForm::Flat;
    m.label = "double";
    m.profile = make_profile(2, [](auto x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        return std::vector<S>(x.size(), s_constant(2.0, x[0]));
    });
    const CPoint z = {0.5 + 0.25 * I, 0.7};
    const Eigen::MatrixXd J = real_jacobian(m, z);
    REQUIRE((J - 2.0 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("pullback identity certifies built maps on sampled interior points") {
    struct Row {
        PotentialSpec spec;
        TargetSpaceForm target;
    };
    const std::vector<Row> rows = {
        {catalog_hyperbolic(2), TargetSpaceForm::Flat},
        {catalog_fubini_study(2), TargetSpaceForm::FubiniStudy},
        {catalog_reinhardt(ReinhardtFamily::power(2.0)), TargetSpaceForm::Hyperbolic},
        {catalog_log_potential(1.0, 1.0, 0.0), TargetSpaceForm::Flat},
    };
    for (const auto& row : rows) {
        const auto pts = sample_points(row.spec, 25, 42);
        const SpecialMap m = build_special_map(row.spec, row.target);
        const PullbackReport rep = verify_pullback(m, row.spec, pts, 1e-8);
        INFO(row.spec.name << " -> " << target_name(row.target));
        REQUIRE(rep.pass);
        REQUIRE(rep.points == 25);
        REQUIRE(rep.per_point.size() == 25);
        REQUIRE(rep.max_residual <= 1e-8);
        REQUIRE(rep.max_coefficient_asymmetry < 1e-8);
    }
}

TEST_CASE("pullback verification reports failure for a wrong target") {
    // The ball profile aimed at flat space does not pull back the
    // projective form; re-labelling the map must fail verification.
    SpecialMap m = build_special_map(catalog_hyperbolic(2), TargetSpaceForm::Flat);
    m.target = TargetSpaceForm::FubiniStudy;
    const auto pts = sample_points(catalog_hyperbolic(2), 10, 42);
    const PullbackReport rep = verify_pullback(m, catalog_hyperbolic(2), pts, 1e-8);
    REQUIRE_FALSE(rep.pass);
    REQUIRE(rep.max_residual > 1e-3);
}

TEST_CASE("pullback verification needs at least one point") {
    const SpecialMap m = build_special_map(catalog_flat(2), TargetSpaceForm::Flat);
    REQUIRE_THROWS_AS(verify_pullback(m, catalog_flat(2), {}, 1e-8), TooFewPoints);
}

TEST_CASE("chart maps transform the reference forms into each other") {
    // Ball potential pushed through the chart map gives the flat form.
    const auto hyp_pts = sample_points(catalog_hyperbolic(2), 25, 42);
    const PullbackReport to_flat =
        verify_pullback(cayley_special(2), catalog_hyperbolic(2), hyp_pts, 1e-8);
    REQUIRE(to_flat.pass);

    // Flat potential on the unit ball pushed into the projective chart.
    SeededRng rng(43);
    std::vector<CPoint> ball_pts;
    for (int i = 0; i < 25; ++i) ball_pts.push_back(sample_ball(rng, 2, 0.85));
    const PullbackReport to_fs =
        verify_pullback(cayley_projective_special(2), catalog_flat(2), ball_pts, 1e-8);
    REQUIRE(to_fs.pass);

    // Flat potential everywhere pushed into the ball.
    const auto flat_pts = sample_points(catalog_flat(2), 25, 44);
    const PullbackReport to_ball =
        verify_pullback(cayley_inverse_special(2), catalog_flat(2), flat_pts, 1e-8);
    REQUIRE(to_ball.pass);
}

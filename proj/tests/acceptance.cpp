// End-to-end acceptance checks. Each criterion prints exactly one
// [PASS]/[FAIL] line; the process exits nonzero if any criterion fails.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "symap/symap.hpp"

using namespace symap;

namespace {

int g_failures = 0;

void report(int number, const std::string& label, bool ok, const std::string& detail) {
    if (!ok) ++g_failures;
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, label.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
}

std::vector<CPoint> pts_for(const PotentialSpec& spec, int n, std::uint64_t seed) {
    const DomainSpec dom = verification_domain_for(spec);
    SeededRng rng(seed);
    std::vector<CPoint> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(with_phases(rng, dom.sample(rng)));
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// --- 1: chart maps between the reference forms -----------------------------

void criterion_1() {
    std::ostringstream bad;

    SeededRng rng(42);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const CPoint z = sample_ball(rng, 2, 0.95);
        const CPoint w =
            apply_special_map(cayley_inverse_special(2), apply_special_map(cayley_special(2), z));
        for (int k = 0; k < 2; ++k) worst = std::max(worst, std::abs(w[k] - z[k]));
    }
    if (worst > 1e-12) bad << "roundtrip " << fmt(worst) << "; ";

    const auto hyp_pts = pts_for(catalog_hyperbolic(2), 100, 42);
    const auto r1 = verify_pullback(cayley_special(2), catalog_hyperbolic(2), hyp_pts, 1e-8);
    if (!r1.pass) bad << "ball->flat pullback " << fmt(r1.max_residual) << "; ";

    SeededRng rng2(43);
    std::vector<CPoint> ball_pts;
    for (int i = 0; i < 100; ++i) ball_pts.push_back(sample_ball(rng2, 2, 0.85));
    const auto r2 = verify_pullback(cayley_projective_special(2), catalog_flat(2), ball_pts, 1e-8);
    if (!r2.pass) bad << "flat->projective pullback " << fmt(r2.max_residual) << "; ";

    report(1, "chart maps invert and transform the reference forms", bad.str().empty(), bad.str());
}

// --- 2: pullback identity across the catalog --------------------------------

void criterion_2() {
    struct Row {
        PotentialSpec spec;
        std::vector<TargetSpaceForm> targets;
    };
    const std::vector<Row> table = {
        {catalog_flat(2), {TargetSpaceForm::Flat, TargetSpaceForm::Hyperbolic}},
        {catalog_hyperbolic(2), {TargetSpaceForm::Flat, TargetSpaceForm::Hyperbolic}},
        {catalog_fubini_study(2),
         {TargetSpaceForm::Flat, TargetSpaceForm::Hyperbolic, TargetSpaceForm::FubiniStudy}},
        {catalog_reinhardt(ReinhardtFamily::exponential()),
         {TargetSpaceForm::Flat, TargetSpaceForm::Hyperbolic}},
        {catalog_reinhardt(ReinhardtFamily::power(2.0)),
         {TargetSpaceForm::Flat, TargetSpaceForm::Hyperbolic}},
        {catalog_log_potential(1.0, 1.0, 0.0), {TargetSpaceForm::Flat, TargetSpaceForm::Hyperbolic}},
        {catalog_eguchi_hanson(), {TargetSpaceForm::Flat, TargetSpaceForm::Hyperbolic}},
    };

    std::ostringstream bad;
    for (const auto& row : table) {
        const auto pts = pts_for(row.spec, 100, 42);
        for (TargetSpaceForm t : row.targets) {
            const SpecialMap m = build_special_map(row.spec, t);
            const auto rep = verify_pullback(m, row.spec, pts, 1e-8);
            if (!rep.pass)
                bad << row.spec.name << "->" << target_name(t) << " " << fmt(rep.max_residual)
                    << "; ";
            double lemma_worst = 0.0;
            for (const CPoint& z : pts) {
                RadialCoords x(2);
                for (int k = 0; k < 2; ++k)
                    x[static_cast<std::size_t>(k)] = std::norm(z[static_cast<std::size_t>(k)]);
                lemma_worst =
                    std::max(lemma_worst, check_lemma_condition(m, row.spec, x).max_abs_residual);
            }
            if (lemma_worst > 1e-9)
                bad << row.spec.name << "->" << target_name(t) << " profile identity "
                    << fmt(lemma_worst) << "; ";
        }
    }
    report(2, "pullback identity holds across the catalog", bad.str().empty(), bad.str());
}

// --- 3: classification verdicts ---------------------------------------------

void criterion_3() {
    std::ostringstream bad;
    auto expect_flat = [&bad](const PotentialSpec& spec, Verdict want) {
        const Classification c = classify(spec, default_domain_for(spec));
        if (c.flat != want)
            bad << spec.name << " got " << verdict_name(c.flat) << ", want " << verdict_name(want)
                << "; ";
    };

    expect_flat(catalog_reinhardt(ReinhardtFamily::exponential()), Verdict::GlobalSymplectomorphism);
    expect_flat(catalog_reinhardt(ReinhardtFamily::power(2.0)), Verdict::GlobalSymplectomorphism);
    expect_flat(catalog_reinhardt(ReinhardtFamily::rational(1.0)), Verdict::Immersion);
    expect_flat(catalog_reinhardt(ReinhardtFamily::inv_power(2.0)), Verdict::Immersion);
    expect_flat(catalog_log_potential(1.0, 1.0, 0.0), Verdict::Immersion);

    // The bounded counterexample curves are what block the two non-global
    // families: verify they are detected as bounded.
    for (const ReinhardtFamily& fam :
         {ReinhardtFamily::rational(1.0), ReinhardtFamily::inv_power(2.0)}) {
        const auto probes = probe_boundary(catalog_reinhardt(fam), domain_reinhardt(fam), {});
        bool saw_bounded_curve = false;
        for (const RayProbe& p : probes)
            if (p.label.find("curve[") != std::string::npos && p.trend == RayTrend::Bounded)
                saw_bounded_curve = true;
        if (!saw_bounded_curve) bad << fam.name() << " missing bounded curve; ";
    }

    // The resolution-type example fails the bounded-moment condition at
    // every sampled point of its punctured domain.
    const PotentialSpec eh = catalog_eguchi_hanson();
    const PointwiseReport pw = check_pointwise(eh, default_domain_for(eh));
    if (pw.bounded_moment.pass || pw.bounded_moment.violations != pw.bounded_moment.samples)
        bad << "eguchi_hanson moment condition should fail at every sample; ";

    report(3, "domain classifications match the established verdicts", bad.str().empty(),
           bad.str());
}

// --- 4: implicit family certification ----------------------------------------

void criterion_4() {
    std::ostringstream bad;
    for (double m : {0.0, 0.1, 0.5, 1.0}) {
        const LebrunReport rep = verify_lebrun_claims(m);
        if (!rep.all_pass) {
            bad << "m=" << m << ":";
            for (const LebrunCheck& c : rep.checks)
                if (!c.pass) bad << " " << c.name << "=" << fmt(c.value);
            bad << "; ";
        }
    }
    report(4, "implicit family certification holds for all tabulated parameters",
           bad.str().empty(), bad.str());
}

// --- 5: series resolvability -------------------------------------------------

void criterion_5() {
    std::ostringstream bad;

    auto exact_linear = [&bad](const ResolvabilityReport& rep, const char* label) {
        if (!rep.hypothesis_satisfied) {
            bad << label << " hypothesis not satisfied; ";
            return;
        }
        const auto& order = rep.coefficients.order();
        for (std::size_t i = 0; i < order.size(); ++i) {
            const double c = rep.coefficients.coefficient(order.index(i));
            const double want = order.degree(i) == 1 ? 1.0 : 0.0;
            if (std::abs(c - want) > 1e-10) {
                bad << label << " coefficient mismatch at degree " << order.degree(i) << "; ";
                return;
            }
        }
    };

    exact_linear(resolvability(catalog_flat(2), ResolvabilityKind::Flat, 8), "flat/flat");
    exact_linear(resolvability(catalog_hyperbolic(2), ResolvabilityKind::Hyperbolic, 8),
                 "ball/hyperbolic");
    exact_linear(resolvability(catalog_fubini_study(2), ResolvabilityKind::Projective, 8),
                 "projective/projective");

    const ResolvabilityReport fs_flat =
        resolvability(catalog_fubini_study(2), ResolvabilityKind::Flat, 8);
    const double c2 = fs_flat.coefficients.coefficient({2, 0});
    if (std::abs(c2 + 0.5) > 1e-10)
        bad << "projective-as-flat degree-2 coefficient " << fmt(c2) << " != -0.5; ";
    if (fs_flat.negative_count == 0) bad << "projective-as-flat reports no negatives; ";

    const BridgeReport b1 = theorem2_bridge(catalog_flat(2));
    const BridgeReport b2 = theorem2_bridge(catalog_hyperbolic(2));
    if (!b1.positive_gradient.pass || !b1.agreement) bad << "flat bridge disagrees; ";
    if (!b2.positive_gradient.pass || !b2.agreement) bad << "ball bridge disagrees; ";

    report(5, "series resolvability criteria match the model potentials", bad.str().empty(),
           bad.str());
}

// --- 6: closed-form gradients vs finite differences ---------------------------

void criterion_6() {
    const std::vector<PotentialSpec> all = {
        catalog_flat(2),
        catalog_hyperbolic(2),
        catalog_fubini_study(2),
        catalog_reinhardt(ReinhardtFamily::exponential()),
        catalog_reinhardt(ReinhardtFamily::power(2.0)),
        catalog_reinhardt(ReinhardtFamily::rational(1.0)),
        catalog_reinhardt(ReinhardtFamily::inv_power(2.0)),
        catalog_log_potential(1.0, 1.0, 0.0),
        catalog_eguchi_hanson(),
        catalog_lebrun(0.5)};

    std::ostringstream bad;
    for (const PotentialSpec& spec : all) {
        const DomainSpec dom = verification_domain_for(spec);
        SeededRng rng(42);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const RadialCoords x = dom.sample(rng);
            const std::vector<double> g = grad_potential(spec, x);
            for (std::size_t k = 0; k < x.size(); ++k) {
                const double h = 1e-5 * std::max(1.0, std::abs(x[k]));
                RadialCoords xp = x, xm = x;
                xp[k] += h;
                xm[k] = std::max(0.0, xm[k] - h);
                const double fd =
                    (eval_potential(spec, xp) - eval_potential(spec, xm)) / (xp[k] - xm[k]);
                const double rel = std::abs(g[k] - fd) / std::max(1.0, std::abs(g[k]));
                worst = std::max(worst, rel);
            }
        }
        if (worst > 1e-6) bad << spec.name << " " << fmt(worst) << "; ";
    }
    report(6, "catalog gradients agree with finite differences", bad.str().empty(), bad.str());
}

// --- 7: command-line determinism ----------------------------------------------

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void criterion_7() {
#ifdef SYMAP_CLI_PATH
    const std::string cli = SYMAP_CLI_PATH;
    const std::string dir = "acceptance_tmp";
    std::ostringstream bad;

    const std::string conf = dir + "_cli.conf";
    {
        std::ofstream f(conf);
        f << "potential=hyperbolic\n"
          << "target=flat\n"
          << "points=50\n";
    }

    const std::vector<std::string> commands = {
        "verify --config " + conf,
        "classify --potential reinhardt_rational --param c=1 --target flat",
        "lebrun --m 0.5 --points 40",
    };

    int idx = 0;
    for (const std::string& args : commands) {
        const std::string out1 = dir + "_" + std::to_string(idx) + "_a.json";
        const std::string out2 = dir + "_" + std::to_string(idx) + "_b.json";
        const std::string c1 = cli + " " + args + " --out " + out1;
        const std::string c2 = cli + " " + args + " --out " + out2;
        const int r1 = std::system(c1.c_str());
        const int r2 = std::system(c2.c_str());
        (void)r1;
        (void)r2;
        const std::string a = slurp(out1);
        const std::string b = slurp(out2);
        if (a.empty()) bad << "no output for '" << args << "'; ";
        if (a != b) bad << "outputs differ for '" << args << "'; ";
        std::remove(out1.c_str());
        std::remove(out2.c_str());
        ++idx;
    }
    std::remove(conf.c_str());

    report(7, "repeated runs with the same configuration are byte-identical",
           bad.str().empty(), bad.str());
#else
    report(7, "repeated runs with the same configuration are byte-identical", false,
           "binary path not wired in");
#endif
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}

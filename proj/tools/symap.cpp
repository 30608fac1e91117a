// Command-line front end: builds special maps, verifies pullback identities,
// classifies potentials, and serializes every report as deterministic JSON
// (or CSV for grid sampling). Exit codes: 0 all checks pass, 1 a check
// failed (report still emitted), 2 usage/config error, 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "symap/symap.hpp"

namespace {

using nlohmann::ordered_json;
using namespace symap;

// Configuration mistakes (unknown names, malformed grids) exit with 2;
// everything the library throws once numerics are underway exits with 3.
struct ConfigError : Error {
    using Error::Error;
};

struct Options {
    std::string potential;                // catalog name or expression in x1..xn / r2
    int dim = 2;
    std::vector<std::string> params;      // catalog parameter overrides, key=value
    std::string domain = "default";
    double radius = 1.0;                  // ball / polydisc size for --domain
    std::string target;                   // flat | hyperbolic | fs
    std::string kind;                     // calabi kind: flat | projective | hyperbolic
    double m = 0.5;                       // implicit-family parameter
    int ray = -1;                         // probe: restrict to one ray index
    std::string quantity;                 // emit-samples: moment_sum | grad | volume
    std::string grid;                     // emit-samples: x1=lo:hi:n,x2=lo:hi:n
    std::uint64_t seed = 42;
    int points = 100;                     // verification sample count
    int samples = 200;                    // classification sample count
    int degree = 8;                       // series truncation degree
    int probe_steps = 48;
    double pullback_tol = 0.0;            // 0 = auto (1e-8; 1e-6 for implicit solves)
    double solver_tol = 1e-12;
    double ricci_tol = 1e-4;
    double limit_tol = 1e-4;
    double divergence_threshold = 1e6;
    std::string format = "json";          // json | text (emit-samples always CSV)
    std::string out;                      // output path; empty = stdout
    std::string config_file;
};

// One config assignment, key spelled exactly like the flag minus "--".
void apply_config_value(Options& o, const std::string& key, const std::string& value) {
    auto as_double = [&](double& field) {
        try {
            field = std::stod(value);
        } catch (const std::exception&) {
            throw ConfigError("config value for '" + key + "' is not a number: '" + value + "'");
        }
    };
    auto as_int = [&](int& field) {
        try {
            field = std::stoi(value);
        } catch (const std::exception&) {
            throw ConfigError("config value for '" + key + "' is not an integer: '" + value + "'");
        }
    };
    if (key == "potential") o.potential = value;
    else if (key == "dim") as_int(o.dim);
    else if (key == "param") o.params.push_back(value);
    else if (key == "domain") o.domain = value;
    else if (key == "radius") as_double(o.radius);
    else if (key == "target") o.target = value;
    else if (key == "kind") o.kind = value;
    else if (key == "m") as_double(o.m);
    else if (key == "ray") as_int(o.ray);
    else if (key == "quantity") o.quantity = value;
    else if (key == "grid") o.grid = value;
    else if (key == "seed") {
        try {
            o.seed = std::stoull(value);
        } catch (const std::exception&) {
            throw ConfigError("config value for 'seed' is not an integer: '" + value + "'");
        }
    } else if (key == "points") as_int(o.points);
    else if (key == "samples") as_int(o.samples);
    else if (key == "degree") as_int(o.degree);
    else if (key == "probe-steps") as_int(o.probe_steps);
    else if (key == "pullback-tol") as_double(o.pullback_tol);
    else if (key == "solver-tol") as_double(o.solver_tol);
    else if (key == "ricci-tol") as_double(o.ricci_tol);
    else if (key == "limit-tol") as_double(o.limit_tol);
    else if (key == "divergence-threshold") as_double(o.divergence_threshold);
    else if (key == "format") o.format = value;
    else if (key == "out") o.out = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

std::string trimmed(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Read key=value lines into any option the command supports and the command
// line did not already set (flags override the file).
void apply_config_file(CLI::App* cmd, Options& o) {
    if (o.config_file.empty()) return;
    std::ifstream f(o.config_file);
    if (!f) throw ConfigError("cannot open config file '" + o.config_file + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trimmed(t.substr(0, eq));
        const std::string value = trimmed(t.substr(eq + 1));
        CLI::Option* opt = nullptr;
        try {
            opt = cmd->get_option("--" + key);
        } catch (const CLI::OptionNotFound&) {
            throw ConfigError("config key '" + key + "' is not an option of command '" +
                              cmd->get_name() + "'");
        }
        if (opt->count() > 0) continue; // flag given on the command line wins
        apply_config_value(o, key, value);
    }
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const std::string& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("bad --param '" + kv + "' (expected key=value)");
        try {
            out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("bad --param value in '" + kv + "'");
        }
    }
    return out;
}

PotentialSpec resolve_potential(const Options& o) {
    if (o.potential.empty()) throw ConfigError("--potential is required");
    for (const auto& entry : catalog_entries())
        if (entry.name == o.potential)
            return catalog_lookup(o.potential, o.dim, parse_params(o.params));
    return make_potential(o.potential, o.dim); // expression path
}

DomainSpec resolve_domain(const Options& o, const PotentialSpec& spec) {
    const std::string& d = o.domain;
    if (d.empty() || d == "default") return default_domain_for(spec);
    if (d == "verification") return verification_domain_for(spec);
    if (d == "full_space") return domain_full_space(spec.dim);
    if (d == "ball") return domain_ball(spec.dim, o.radius);
    if (d == "punctured") return domain_punctured(spec.dim);
    if (d == "polydisc") return domain_polydisc(spec.dim, o.radius);
    if (d == "reinhardt") {
        if (auto fam = detail::reinhardt_family_of(spec)) return domain_reinhardt(*fam);
        throw ConfigError("domain 'reinhardt' requires a reinhardt_* potential");
    }
    throw ConfigError("unknown domain '" + d +
                "' (default, verification, full_space, ball, punctured, polydisc, reinhardt)");
}

TargetSpaceForm parse_target(const std::string& name) {
    try {
        return target_from_name(name);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

double resolved_pullback_tol(const Options& o, const PotentialSpec& spec) {
    if (o.pullback_tol > 0.0) return o.pullback_tol;
    return spec.name == "lebrun" ? 1e-6 : 1e-8; // looser when an implicit solve participates
}

ProbeParams probe_params(const Options& o) {
    ProbeParams p;
    p.steps = o.probe_steps;
    p.divergence_threshold = o.divergence_threshold;
    p.limit_tol = o.limit_tol;
    return p;
}

ordered_json tolerances_json(const Options& o, std::optional<double> pullback = {}) {
    ordered_json t;
    t["pullback_tol"] = pullback ? *pullback : o.pullback_tol;
    t["solver_tol"] = o.solver_tol;
    t["ricci_tol"] = o.ricci_tol;
    t["limit_tol"] = o.limit_tol;
    t["divergence_threshold"] = o.divergence_threshold;
    return t;
}

ordered_json spec_json(const PotentialSpec& spec) {
    ordered_json s;
    s["name"] = spec.name;
    s["dim"] = spec.dim;
    if (!spec.params.empty()) {
        ordered_json p;
        for (const auto& [k, v] : spec.params) p[k] = v;
        s["params"] = p;
    }
    return s;
}

ordered_json witness_json(const Witness& w) {
    ordered_json j;
    j["x"] = w.x;
    j["index"] = w.index;
    j["value"] = w.value;
    return j;
}

ordered_json condition_json(const ConditionReport& c) {
    ordered_json j;
    j["pass"] = c.pass;
    j["samples"] = c.samples;
    j["violations"] = c.violations;
    if (c.witness) j["witness"] = witness_json(*c.witness);
    return j;
}

ordered_json ray_json(const RayProbe& r, bool with_values) {
    ordered_json j;
    j["label"] = r.label;
    j["trend"] = trend_name(r.trend);
    j["limit_one"] = limit_one_name(r.limit_one);
    j["steps"] = r.s_values.size();
    j["truncated"] = r.truncated;
    j["saw_infinity"] = r.saw_infinity;
    if (std::isfinite(r.last)) j["last"] = r.last;
    if (with_values) {
        j["t_grid"] = r.t_grid;
        ordered_json vals = ordered_json::array();
        for (double v : r.s_values)
            vals.push_back(std::isfinite(v) ? ordered_json(v)
                                            : ordered_json(v > 0 ? "inf" : "-inf"));
        j["s_values"] = vals;
    }
    return j;
}

ordered_json make_report(const std::string& command, ordered_json config,
                         ordered_json results, std::vector<std::string> paper_refs) {
    ordered_json rep;
    rep["schema"] = 1;
    rep["command"] = command;
    rep["version"] = version;
    rep["config"] = std::move(config);
    rep["results"] = std::move(results);
    rep["paper_refs"] = paper_refs;
    return rep;
}

std::string text_summary(const ordered_json& report) {
    std::ostringstream os;
    os << report["command"].get<std::string>() << " (version "
       << report["version"].get<std::string>() << ")\n";
    for (const auto& r : report["results"]) {
        os << "  " << r["check"].get<std::string>() << ": " << r["status"].get<std::string>();
        for (const char* key : {"verdict", "max_residual", "value", "bound", "trend"})
            if (r.contains(key)) {
                os << "  " << key << "=";
                if (r[key].is_string())
                    os << r[key].get<std::string>();
                else
                    os << r[key].dump();
            }
        os << "\n";
    }
    return os.str();
}

int write_output(const Options& o, const std::string& payload) {
    if (o.out.empty()) {
        std::cout << payload;
        return 0;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open output file '" << o.out << "'\n";
        return 2;
    }
    f << payload;
    return 0;
}

// Shared tail: serialize `report`, honoring --format/--out; fold in pass/fail.
int finish(const Options& o, const ordered_json& report, bool any_fail) {
    std::string payload;
    if (o.format == "json")
        payload = report.dump(2) + "\n";
    else if (o.format == "text")
        payload = text_summary(report);
    else
        throw ConfigError("unknown --format '" + o.format + "' (json, text)");
    const int rc = write_output(o, payload);
    if (rc != 0) return rc;
    return any_fail ? 1 : 0;
}

std::vector<CPoint> verification_points(const PotentialSpec& spec, int n, std::uint64_t seed) {
    const DomainSpec dom = verification_domain_for(spec);
    SeededRng rng(seed);
    std::vector<CPoint> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pts.push_back(with_phases(rng, dom.sample(rng)));
    return pts;
}

// ---------------------------------------------------------------------------
// Subcommands.

int run_catalog(const Options& o) {
    ordered_json results = ordered_json::array();
    for (const auto& e : catalog_entries()) {
        ordered_json r;
        r["check"] = "catalog[" + e.name + "]";
        r["status"] = "info";
        r["description"] = e.description;
        r["parameters"] = e.parameters;
        results.push_back(std::move(r));
    }
    ordered_json config;
    config["format"] = o.format;
    return finish(o, make_report("catalog", config, results, {}), false);
}

int run_classify(const Options& o) {
    const PotentialSpec spec = resolve_potential(o);
    const DomainSpec dom = resolve_domain(o, spec);
    const Classification cls = classify(spec, dom, o.samples, o.seed, probe_params(o));

    ordered_json config;
    config["potential"] = o.potential;
    config["spec"] = spec_json(spec);
    config["domain"] = dom.name;
    if (!o.target.empty()) config["target"] = o.target;
    config["samples"] = o.samples;
    config["seed"] = o.seed;
    config["probe_steps"] = o.probe_steps;
    config["tolerances"] = tolerances_json(o);
    config["format"] = o.format;

    ordered_json results = ordered_json::array();
    auto push_condition = [&results](const ConditionReport& c) {
        ordered_json r;
        r["check"] = c.name;
        r["status"] = "info";
        r["condition"] = condition_json(c);
        results.push_back(std::move(r));
    };
    push_condition(cls.pointwise.nonnegative_gradient);
    push_condition(cls.pointwise.bounded_moment);
    push_condition(cls.pointwise.positive_gradient);
    {
        ordered_json r;
        r["check"] = "domain_geometry";
        r["status"] = "info";
        r["contains_origin"] = cls.contains_origin;
        r["meets_all_axes"] = cls.meets_all_axes;
        results.push_back(std::move(r));
    }
    {
        ordered_json r;
        r["check"] = "boundary_rays";
        r["status"] = "info";
        ordered_json per_ray = ordered_json::array();
        for (const RayProbe& ray : cls.rays) per_ray.push_back(ray_json(ray, false));
        r["per_ray"] = std::move(per_ray);
        results.push_back(std::move(r));
    }

    bool any_fail = false;
    auto push_verdict = [&](TargetSpaceForm t, bool scored) {
        const Verdict v = cls.for_target(t);
        ordered_json r;
        r["check"] = "verdict[" + target_name(t) + "]";
        const bool ok = v == Verdict::Immersion || v == Verdict::GlobalSymplectomorphism ||
                        v == Verdict::ProjectiveEmbedding;
        r["status"] = scored ? (ok ? "pass" : "fail") : "info";
        r["verdict"] = verdict_name(v);
        if (scored && !ok) {
            any_fail = true;
            // Attach the witness of the condition that blocks the immersion.
            const ConditionReport& blocker = (t == TargetSpaceForm::FubiniStudy)
                                                 ? cls.pointwise.bounded_moment
                                                 : cls.pointwise.nonnegative_gradient;
            if (blocker.witness) r["witness"] = witness_json(*blocker.witness);
        }
        results.push_back(std::move(r));
    };
    if (o.target.empty()) {
        push_verdict(TargetSpaceForm::Flat, false);
        push_verdict(TargetSpaceForm::Hyperbolic, false);
        push_verdict(TargetSpaceForm::FubiniStudy, false);
    } else {
        push_verdict(parse_target(o.target), true);
    }

    return finish(o, make_report("classify", config, results,
                                 {"cond0", "conda", "genconda", "gencondb"}),
                  any_fail);
}

int run_verify(const Options& o) {
    const PotentialSpec spec = resolve_potential(o);
    if (o.target.empty()) throw ConfigError("verify requires --target (flat, hyperbolic, fs)");
    const TargetSpaceForm target = parse_target(o.target);
    const double tol = resolved_pullback_tol(o, spec);

    ordered_json config;
    config["potential"] = o.potential;
    config["spec"] = spec_json(spec);
    config["target"] = target_name(target);
    config["points"] = o.points;
    config["seed"] = o.seed;
    config["tolerances"] = tolerances_json(o, tol);
    config["format"] = o.format;

    const std::vector<CPoint> pts = verification_points(spec, o.points, o.seed);
    const SpecialMap map = build_special_map(spec, target);
    const PullbackReport rep = verify_pullback(map, spec, pts, tol);

    double lemma_worst = 0.0;
    for (const CPoint& z : pts) {
        RadialCoords x(static_cast<std::size_t>(spec.dim));
        for (int k = 0; k < spec.dim; ++k) x[static_cast<std::size_t>(k)] = std::norm(z[static_cast<std::size_t>(k)]);
        lemma_worst = std::max(lemma_worst, check_lemma_condition(map, spec, x).max_abs_residual);
    }
    const double lemma_tol = 1e-9;

    ordered_json results = ordered_json::array();
    {
        ordered_json r;
        r["check"] = "pullback[" + spec.name + "->" + target_name(target) + "]";
        r["status"] = rep.pass ? "pass" : "fail";
        r["max_residual"] = rep.max_residual;
        r["tolerance"] = rep.tolerance;
        r["points"] = rep.points;
        r["max_coefficient_asymmetry"] = rep.max_coefficient_asymmetry;
        results.push_back(std::move(r));
    }
    {
        ordered_json r;
        r["check"] = "profile_identity";
        r["status"] = lemma_worst <= lemma_tol ? "pass" : "fail";
        r["max_residual"] = lemma_worst;
        r["tolerance"] = lemma_tol;
        results.push_back(std::move(r));
    }

    std::vector<std::string> refs = {"cond0"};
    if (target == TargetSpaceForm::FubiniStudy) refs.push_back("conda");
    const bool any_fail = !rep.pass || lemma_worst > lemma_tol;
    return finish(o, make_report("verify", config, results, refs), any_fail);
}

int run_lebrun(const Options& o) {
    const LebrunReport rep = verify_lebrun_claims(o.m, o.points, o.seed);

    ordered_json config;
    config["m"] = o.m;
    config["points"] = o.points;
    config["seed"] = o.seed;
    config["tolerances"] = tolerances_json(o);
    config["format"] = o.format;

    ordered_json results = ordered_json::array();
    for (const LebrunCheck& c : rep.checks) {
        ordered_json r;
        r["check"] = c.name;
        r["status"] = c.pass ? "pass" : "fail";
        r["value"] = c.value;
        r["bound"] = c.bound;
        if (c.larger_is_better) r["larger_is_better"] = true;
        results.push_back(std::move(r));
    }
    return finish(o, make_report("lebrun", config, results, {"gencondb"}), !rep.all_pass);
}

int run_calabi(const Options& o) {
    const PotentialSpec spec = resolve_potential(o);

    ordered_json config;
    config["potential"] = o.potential;
    config["spec"] = spec_json(spec);
    if (!o.kind.empty()) config["kind"] = o.kind;
    config["degree"] = o.degree;
    config["samples"] = o.samples;
    config["seed"] = o.seed;
    config["format"] = o.format;

    auto kind_row = [&](const ResolvabilityReport& rep, const std::string& status) {
        ordered_json r;
        r["check"] = "resolvability[" + resolvability_kind_name(rep.kind) + "]";
        r["status"] = status;
        r["hypothesis_satisfied"] = rep.hypothesis_satisfied;
        r["min_coefficient"] = rep.min_coefficient;
        r["min_index"] = rep.min_index;
        r["negative_count"] = rep.negative_count;
        if (!rep.negative_indices.empty()) r["negative_indices"] = rep.negative_indices;
        r["positive_count"] = rep.positive_count;
        r["degree_one_positive"] = rep.degree_one_positive;
        r["degree"] = rep.degree;
        r["tolerance"] = rep.tolerance;
        return r;
    };

    ordered_json results = ordered_json::array();
    bool any_fail = false;
    if (!o.kind.empty()) {
        ResolvabilityKind kind;
        try {
            kind = resolvability_kind_from_name(o.kind);
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
        const ResolvabilityReport rep = resolvability(spec, kind, o.degree);
        any_fail = !rep.hypothesis_satisfied;
        results.push_back(kind_row(rep, rep.hypothesis_satisfied ? "pass" : "fail"));
    } else {
        const BridgeReport bridge = theorem2_bridge(spec, o.degree, std::nullopt, o.samples, o.seed);
        results.push_back(kind_row(bridge.flat, "info"));
        results.push_back(kind_row(bridge.projective, "info"));
        results.push_back(kind_row(bridge.hyperbolic, "info"));
        {
            ordered_json r;
            r["check"] = "resolvability_any";
            r["status"] = bridge.any_kind_satisfied ? "pass" : "fail";
            results.push_back(std::move(r));
        }
        {
            ordered_json r;
            r["check"] = "series_pointwise_bridge";
            r["status"] = bridge.agreement ? "pass" : "fail";
            r["condition"] = condition_json(bridge.positive_gradient);
            results.push_back(std::move(r));
        }
        any_fail = !bridge.any_kind_satisfied || !bridge.agreement;
    }
    return finish(o, make_report("calabi", config, results, {"genconda"}), any_fail);
}

int run_probe(const Options& o) {
    const PotentialSpec spec = resolve_potential(o);
    const DomainSpec dom = resolve_domain(o, spec);
    if (o.ray >= 0 && static_cast<std::size_t>(o.ray) >= dom.rays.size())
        throw ConfigError("--ray " + std::to_string(o.ray) + " out of range (domain has " +
                          std::to_string(dom.rays.size()) + " rays)");
    const std::vector<RayProbe> probes = probe_boundary(spec, dom, probe_params(o));

    ordered_json config;
    config["potential"] = o.potential;
    config["spec"] = spec_json(spec);
    config["domain"] = dom.name;
    if (o.ray >= 0) config["ray"] = o.ray;
    config["probe_steps"] = o.probe_steps;
    config["tolerances"] = tolerances_json(o);
    config["format"] = o.format;

    ordered_json results = ordered_json::array();
    for (std::size_t i = 0; i < probes.size(); ++i) {
        if (o.ray >= 0 && i != static_cast<std::size_t>(o.ray)) continue;
        ordered_json r;
        r["check"] = "ray[" + probes[i].label + "]";
        r["status"] = "info";
        r["trend"] = trend_name(probes[i].trend);
        ordered_json detail = ray_json(probes[i], true);
        detail.erase("label");
        detail.erase("trend");
        r.update(detail);
        results.push_back(std::move(r));
    }
    return finish(o, make_report("probe", config, results, {"gencondb"}), false);
}

struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;
};

// Parse "x1=lo:hi:count,x2=value,..." into one axis per coordinate.
std::vector<GridAxis> parse_grid(const std::string& grid, int dim) {
    std::vector<std::optional<GridAxis>> axes(static_cast<std::size_t>(dim));
    std::stringstream ss(grid);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos || part.size() < 2 || part[0] != 'x')
            throw ConfigError("bad --grid component '" + part + "' (expected xK=lo:hi:count)");
        int var = 0;
        try {
            var = std::stoi(part.substr(1, eq - 1));
        } catch (const std::exception&) {
            throw ConfigError("bad --grid variable in '" + part + "'");
        }
        if (var < 1 || var > dim)
            throw ConfigError("--grid variable x" + std::to_string(var) +
                              " out of range for dim " + std::to_string(dim));
        GridAxis axis;
        const std::string range = part.substr(eq + 1);
        const auto c1 = range.find(':');
        try {
            if (c1 == std::string::npos) {
                axis.lo = axis.hi = std::stod(range);
                axis.count = 1;
            } else {
                const auto c2 = range.find(':', c1 + 1);
                if (c2 == std::string::npos)
                    throw ConfigError("bad --grid range '" + range + "' (expected lo:hi:count)");
                axis.lo = std::stod(range.substr(0, c1));
                axis.hi = std::stod(range.substr(c1 + 1, c2 - c1 - 1));
                axis.count = std::stoi(range.substr(c2 + 1));
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("bad --grid range '" + range + "'");
        }
        if (axis.count < 1) throw ConfigError("--grid count must be >= 1");
        if (axes[static_cast<std::size_t>(var - 1)])
            throw ConfigError("--grid repeats x" + std::to_string(var));
        axes[static_cast<std::size_t>(var - 1)] = axis;
    }
    std::vector<GridAxis> out;
    for (int k = 0; k < dim; ++k) {
        if (!axes[static_cast<std::size_t>(k)])
            throw ConfigError("--grid is missing x" + std::to_string(k + 1));
        out.push_back(*axes[static_cast<std::size_t>(k)]);
    }
    return out;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int run_emit_samples(const Options& o) {
    const PotentialSpec spec = resolve_potential(o);
    if (o.quantity != "moment_sum" && o.quantity != "grad" && o.quantity != "volume")
        throw ConfigError("unknown --quantity '" + o.quantity + "' (moment_sum, grad, volume)");
    if (o.grid.empty()) throw ConfigError("emit-samples requires --grid");
    const std::vector<GridAxis> axes = parse_grid(o.grid, spec.dim);

    std::ostringstream csv;
    for (int k = 0; k < spec.dim; ++k) csv << (k ? "," : "") << "x" << (k + 1);
    if (o.quantity == "moment_sum") csv << ",moment_sum";
    else if (o.quantity == "volume") csv << ",volume_density";
    else
        for (int k = 0; k < spec.dim; ++k) csv << ",g" << (k + 1);
    csv << "\n";

    RadialCoords x(static_cast<std::size_t>(spec.dim), 0.0);
    std::vector<int> idx(static_cast<std::size_t>(spec.dim), 0);
    bool done = false;
    while (!done) {
        for (int k = 0; k < spec.dim; ++k) {
            const GridAxis& a = axes[static_cast<std::size_t>(k)];
            x[static_cast<std::size_t>(k)] =
                a.count == 1 ? a.lo
                             : a.lo + (a.hi - a.lo) * idx[static_cast<std::size_t>(k)] /
                                   (a.count - 1);
        }
        for (int k = 0; k < spec.dim; ++k) csv << (k ? "," : "") << fmt17(x[static_cast<std::size_t>(k)]);
        try {
            if (o.quantity == "moment_sum") {
                csv << "," << fmt17(moment_sum(spec, x));
            } else if (o.quantity == "volume") {
                CPoint z(static_cast<std::size_t>(spec.dim));
                for (int k = 0; k < spec.dim; ++k)
                    z[static_cast<std::size_t>(k)] = std::sqrt(x[static_cast<std::size_t>(k)]);
                csv << "," << fmt17(volume_density(spec, z));
            } else {
                const std::vector<double> g = grad_potential(spec, x);
                for (double gk : g) csv << "," << fmt17(gk);
            }
        } catch (const Error&) {
            // Grid points may touch singularities; emit data gaps, not failures.
            const int cols = o.quantity == "grad" ? spec.dim : 1;
            for (int c = 0; c < cols; ++c) csv << ",nan";
        }
        csv << "\n";
        // Advance odometer, last coordinate fastest.
        done = true;
        for (int k = spec.dim - 1; k >= 0; --k) {
            auto& i = idx[static_cast<std::size_t>(k)];
            if (++i < axes[static_cast<std::size_t>(k)].count) {
                done = false;
                break;
            }
            i = 0;
        }
    }
    return write_output(o, csv.str());
}

void add_common(CLI::App* cmd, Options& o, bool with_domain) {
    cmd->add_option("--config", o.config_file,
                    "config file with key=value lines; flags override");
    cmd->add_option("--potential", o.potential,
                    "catalog name or expression in x1..xn and r2 = x1+...+xn");
    cmd->add_option("--dim", o.dim, "complex dimension for space-form and expression potentials")
        ->check(CLI::Range(1, 16));
    cmd->add_option("--param", o.params, "catalog parameter override key=value (repeatable)");
    if (with_domain) {
        cmd->add_option("--domain", o.domain,
                        "default, verification, full_space, ball, punctured, polydisc, reinhardt");
        cmd->add_option("--radius", o.radius, "size parameter for ball/polydisc domains");
    }
    cmd->add_option("--seed", o.seed, "sampling seed (recorded in the report)");
    cmd->add_option("--format", o.format, "json or text");
    cmd->add_option("--out", o.out, "write the report to a file instead of stdout");
    cmd->add_option("--pullback-tol", o.pullback_tol, "pullback residual tolerance (0 = auto)");
    cmd->add_option("--solver-tol", o.solver_tol, "implicit solver relative tolerance");
    cmd->add_option("--ricci-tol", o.ricci_tol, "Ricci check tolerance");
    cmd->add_option("--limit-tol", o.limit_tol, "boundary-limit detection tolerance");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Explicit symplectic maps from rotation-invariant Kahler domains "
                 "into the flat, hyperbolic, and projective space forms"};
    app.require_subcommand(1);

    Options o;
    CLI::App* c_catalog = app.add_subcommand("catalog", "list built-in potentials");
    c_catalog->add_option("--config", o.config_file,
                          "config file with key=value lines; flags override");
    c_catalog->add_option("--format", o.format, "json or text");
    c_catalog->add_option("--out", o.out, "write the report to a file instead of stdout");

    CLI::App* c_classify =
        app.add_subcommand("classify", "classify a potential against the space-form targets");
    add_common(c_classify, o, true);
    c_classify->add_option("--target", o.target, "score only this target: flat, hyperbolic, fs");
    c_classify->add_option("--samples", o.samples, "interior sample count");
    c_classify->add_option("--probe-steps", o.probe_steps, "boundary ray grid size");
    c_classify->add_option("--divergence-threshold", o.divergence_threshold,
                           "moment-sum level certifying divergence");

    CLI::App* c_verify =
        app.add_subcommand("verify", "build the special map and verify its pullback identity");
    add_common(c_verify, o, false);
    c_verify->add_option("--target", o.target, "flat, hyperbolic, fs");
    c_verify->add_option("--points", o.points, "verification point count");

    CLI::App* c_lebrun =
        app.add_subcommand("lebrun", "verify the scalar-flat family's closed-form identities");
    c_lebrun->add_option("--config", o.config_file,
                         "config file with key=value lines; flags override");
    c_lebrun->add_option("--m", o.m, "family parameter m >= 0");
    c_lebrun->add_option("--points", o.points, "sample count");
    c_lebrun->add_option("--seed", o.seed, "sampling seed");
    c_lebrun->add_option("--format", o.format, "json or text");
    c_lebrun->add_option("--out", o.out, "write the report to a file instead of stdout");

    CLI::App* c_calabi = app.add_subcommand(
        "calabi", "series diagnostics: diastasis coefficients and resolvability");
    add_common(c_calabi, o, false);
    c_calabi->add_option("--degree", o.degree, "series truncation degree")->check(CLI::Range(1, 16));
    c_calabi->add_option("--kind", o.kind, "flat, projective, or hyperbolic (default: all + bridge)");
    c_calabi->add_option("--samples", o.samples, "bridge sample count");

    CLI::App* c_probe =
        app.add_subcommand("probe", "evaluate the moment sum along boundary rays");
    add_common(c_probe, o, true);
    c_probe->add_option("--ray", o.ray, "restrict the report to one ray index");
    c_probe->add_option("--probe-steps", o.probe_steps, "boundary ray grid size");
    c_probe->add_option("--divergence-threshold", o.divergence_threshold,
                        "moment-sum level certifying divergence");

    CLI::App* c_emit = app.add_subcommand(
        "emit-samples", "tabulate a quantity over a radial-coordinate grid as CSV");
    add_common(c_emit, o, false);
    c_emit->add_option("--quantity", o.quantity, "moment_sum, grad, or volume");
    c_emit->add_option("--grid", o.grid, "mesh spec: x1=lo:hi:count,x2=lo:hi:count,...");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_catalog->parsed()) { apply_config_file(c_catalog, o); return run_catalog(o); }
        if (c_classify->parsed()) { apply_config_file(c_classify, o); return run_classify(o); }
        if (c_verify->parsed()) { apply_config_file(c_verify, o); return run_verify(o); }
        if (c_lebrun->parsed()) { apply_config_file(c_lebrun, o); return run_lebrun(o); }
        if (c_calabi->parsed()) { apply_config_file(c_calabi, o); return run_calabi(o); }
        if (c_probe->parsed()) { apply_config_file(c_probe, o); return run_probe(o); }
        if (c_emit->parsed()) { apply_config_file(c_emit, o); return run_emit_samples(o); }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SyntaxError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownIdentifier& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ArityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

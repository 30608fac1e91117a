// End-to-end tests for the command-line interface: exit codes, JSON shape,
// CSV output, config files, and determinism.
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

using json = nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::string temp_path(const std::string& tag) {
    static int counter = 0;
    std::ostringstream os;
    os << "cli_test_" << ::getpid() << "_" << counter++ << "_" << tag;
    return os.str();
}

RunResult run_cli(const std::string& args) {
    const std::string out_file = temp_path("out.txt");
    const std::string err_file = temp_path("err.txt");
    const std::string cmd =
        std::string(SYMAP_CLI_PATH) + " " + args + " >" + out_file + " 2>" + err_file;
    const int status = std::system(cmd.c_str());
    RunResult r;
    if (status != -1 && WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    std::remove(out_file.c_str());
    std::remove(err_file.c_str());
    return r;
}

json parse_report(const RunResult& r) {
    REQUIRE_FALSE(r.out.empty());
    return json::parse(r.out);
}

const json* find_check(const json& report, const std::string& prefix) {
    for (const auto& row : report.at("results")) {
        const std::string name = row.at("check").get<std::string>();
        if (name.rfind(prefix, 0) == 0) return &row;
    }
    return nullptr;
}

} // namespace

TEST_CASE("verify reports a passing pullback for the ball potential") {
    const RunResult r = run_cli("verify --potential hyperbolic --target flat --points 25");
    REQUIRE(r.exit_code == 0);
    const json rep = parse_report(r);
    REQUIRE(rep.at("command") == "verify");
    REQUIRE(rep.at("schema") == 1);
    REQUIRE(rep.contains("version"));
    REQUIRE(rep.at("paper_refs") == json::array({"cond0"}));

    const json* pull = find_check(rep, "pullback[");
    REQUIRE(pull != nullptr);
    REQUIRE(pull->at("status") == "pass");
    REQUIRE(pull->at("max_residual").get<double>() <= 1e-8);
    REQUIRE(pull->at("points") == 25);

    const json* lemma = find_check(rep, "profile_identity");
    REQUIRE(lemma != nullptr);
    REQUIRE(lemma->at("status") == "pass");
}

TEST_CASE("verify adds the bounded-moment reference for the projective target") {
    const RunResult r = run_cli("verify --potential fubini_study --target fs --points 10");
    REQUIRE(r.exit_code == 0);
    const json rep = parse_report(r);
    REQUIRE(rep.at("paper_refs") == json::array({"cond0", "conda"}));
}

TEST_CASE("verify uses a looser default tolerance when implicit solves participate") {
    const RunResult r = run_cli("verify --potential lebrun --param m=0.5 --target flat --points 10");
    REQUIRE(r.exit_code == 0);
    const json rep = parse_report(r);
    const json* pull = find_check(rep, "pullback[");
    REQUIRE(pull != nullptr);
    REQUIRE(pull->at("tolerance").get<double>() == 1e-6);
}

TEST_CASE("classify without a target emits informational verdicts and exits zero") {
    const RunResult r = run_cli("classify --potential eguchi_hanson");
    REQUIRE(r.exit_code == 0);
    const json rep = parse_report(r);
    REQUIRE(rep.at("paper_refs") == json::array({"cond0", "conda", "genconda", "gencondb"}));

    int verdict_rows = 0;
    for (const auto& row : rep.at("results")) {
        const std::string name = row.at("check").get<std::string>();
        if (name.rfind("verdict[", 0) == 0) {
            ++verdict_rows;
            REQUIRE(row.at("status") == "info");
        }
    }
    REQUIRE(verdict_rows == 3);

    const json* cond = find_check(rep, "conda");
    REQUIRE(cond != nullptr);
    REQUIRE(cond->at("status") == "info");
}

TEST_CASE("classify against a blocked target exits one with a witness") {
    const RunResult r = run_cli("classify --potential eguchi_hanson --target fs");
    REQUIRE(r.exit_code == 1);
    const json rep = parse_report(r);
    const json* verdict = find_check(rep, "verdict[fubini_study]");
    REQUIRE(verdict != nullptr);
    REQUIRE(verdict->at("status") == "fail");
    REQUIRE(verdict->at("verdict") == "no_special_immersion");
    REQUIRE(verdict->contains("witness"));
    REQUIRE(verdict->at("witness").contains("x"));
}

TEST_CASE("classify against an admitted target exits zero") {
    const RunResult r = run_cli("classify --potential reinhardt_exp --target flat");
    REQUIRE(r.exit_code == 0);
    const json rep = parse_report(r);
    const json* verdict = find_check(rep, "verdict[flat]");
    REQUIRE(verdict != nullptr);
    REQUIRE(verdict->at("status") == "pass");
    REQUIRE(verdict->at("verdict") == "global_symplectomorphism");
}

TEST_CASE("catalog lists every family as information") {
    const RunResult r = run_cli("catalog");
    REQUIRE(r.exit_code == 0);
    const json rep = parse_report(r);
    REQUIRE(rep.at("results").size() == 10);
    for (const auto& row : rep.at("results")) {
        REQUIRE(row.at("status") == "info");
    }
    REQUIRE(rep.at("paper_refs") == json::array());
}

TEST_CASE("implicit family claims pass for the degenerate parameter") {
    const RunResult r = run_cli("lebrun --m 0 --points 30");
    REQUIRE(r.exit_code == 0);
    const json rep = parse_report(r);
    REQUIRE(rep.at("paper_refs") == json::array({"gencondb"}));
    for (const auto& row : rep.at("results")) {
        REQUIRE(row.at("status") == "pass");
    }
}

TEST_CASE("series criterion with an explicit kind can fail with exit one") {
    const RunResult r = run_cli("calabi --potential fubini_study --kind flat");
    REQUIRE(r.exit_code == 1);
    const json rep = parse_report(r);
    REQUIRE(rep.at("paper_refs") == json::array({"genconda"}));
    REQUIRE(rep.at("results").size() == 1);
    REQUIRE(rep.at("results")[0].at("status") == "fail");
    REQUIRE(rep.at("results")[0].at("negative_count").get<int>() > 0);
}

TEST_CASE("series criterion without a kind reports all three plus the bridge") {
    const RunResult r = run_cli("calabi --potential flat");
    REQUIRE(r.exit_code == 0);
    const json rep = parse_report(r);
    REQUIRE(find_check(rep, "resolvability_any") != nullptr);
    REQUIRE(find_check(rep, "series_pointwise_bridge") != nullptr);
}

TEST_CASE("boundary probe rows are informational") {
    const RunResult r = run_cli("probe --potential hyperbolic");
    REQUIRE(r.exit_code == 0);
    const json rep = parse_report(r);
    REQUIRE(rep.at("paper_refs") == json::array({"gencondb"}));
    REQUIRE(rep.at("results").size() > 0);
    for (const auto& row : rep.at("results")) {
        REQUIRE(row.at("status") == "info");
        REQUIRE(row.contains("trend"));
    }
}

TEST_CASE("sample emission produces a deterministic CSV grid") {
    const RunResult r =
        run_cli("emit-samples --potential flat --quantity moment_sum --grid x1=0:1:3,x2=0.5");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out ==
            "x1,x2,moment_sum\n"
            "0,0.5,0.5\n"
            "0.5,0.5,1\n"
            "1,0.5,1.5\n");
}

TEST_CASE("sample emission pads singular grid points with nan cells") {
    // The logarithmic potential lives on the punctured space; its gradient
    // blows up at the origin, which the grid deliberately includes.
    const RunResult r = run_cli(
        "emit-samples --potential log_potential --quantity grad --grid x1=0:1:2,x2=0");
    REQUIRE(r.exit_code == 0);
    std::istringstream is(r.out);
    std::string header, first, second;
    std::getline(is, header);
    std::getline(is, first);
    std::getline(is, second);
    REQUIRE(header == "x1,x2,g1,g2");
    REQUIRE(first == "0,0,nan,nan");
    REQUIRE(second == "1,0,2,2");
}

TEST_CASE("unknown subcommands, targets, and domains exit two") {
    REQUIRE(run_cli("frobnicate").exit_code == 2);
    REQUIRE(run_cli("verify --potential flat --target klein").exit_code == 2);
    REQUIRE(run_cli("classify --potential flat --domain moebius").exit_code == 2);
    REQUIRE(run_cli("verify --potential flat").exit_code == 2); // missing target
    REQUIRE(run_cli("calabi --potential flat --kind affine").exit_code == 2);
    REQUIRE(run_cli("emit-samples --potential flat --quantity moment_sum").exit_code == 2);
}

TEST_CASE("expression errors in a potential exit two") {
    const RunResult r = run_cli("verify --potential \"x1 +\" --target flat");
    REQUIRE(r.exit_code == 2);
    REQUIRE_FALSE(r.err.empty());
}

TEST_CASE("numerical failures exit three") {
    const RunResult r = run_cli("verify --potential \"x1*x1 - 10*x1 + x2\" --target flat");
    REQUIRE(r.exit_code == 3);
    REQUIRE_FALSE(r.err.empty());
}

TEST_CASE("config files supply defaults and flags override them") {
    const std::string conf = temp_path("verify.conf");
    {
        std::ofstream f(conf);
        f << "# sample configuration\n"
          << "potential=hyperbolic\n"
          << "target=flat\n"
          << "points=10\n";
    }

    const RunResult r = run_cli("verify --config " + conf);
    REQUIRE(r.exit_code == 0);
    const json rep = parse_report(r);
    REQUIRE(rep.at("config").at("points") == 10);
    REQUIRE(rep.at("config").at("potential") == "hyperbolic");

    const RunResult r2 = run_cli("verify --config " + conf + " --points 5");
    REQUIRE(r2.exit_code == 0);
    const json rep2 = parse_report(r2);
    REQUIRE(rep2.at("config").at("points") == 5);

    std::remove(conf.c_str());
}

TEST_CASE("unknown config keys are rejected with exit two") {
    const std::string conf = temp_path("bad.conf");
    {
        std::ofstream f(conf);
        f << "potential=flat\ntarget=flat\nfrobnicate=1\n";
    }
    const RunResult r = run_cli("verify --config " + conf);
    REQUIRE(r.exit_code == 2);
    std::remove(conf.c_str());

    REQUIRE(run_cli("verify --config no_such_file.conf --potential flat --target flat").exit_code ==
            2);
}

TEST_CASE("identical invocations produce byte-identical reports") {
    const std::string args =
        "classify --potential reinhardt_power --param p=2 --target flat --samples 60";
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.out == b.out);
    REQUIRE_FALSE(a.out.empty());
}

TEST_CASE("reports can be written to a file instead of stdout") {
    const std::string out_file = temp_path("report.json");
    const RunResult r =
        run_cli("catalog --out " + out_file);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.empty());
    const std::string payload = slurp(out_file);
    REQUIRE_FALSE(payload.empty());
    const json rep = json::parse(payload);
    REQUIRE(rep.at("command") == "catalog");
    std::remove(out_file.c_str());
}

TEST_CASE("text format renders a human-readable summary") {
    const RunResult r = run_cli("verify --potential flat --target flat --points 5 --format text");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.rfind("verify (version", 0) == 0);
    REQUIRE(r.out.find("pullback[") != std::string::npos);
}

TEST_CASE("help prints usage and exits zero") {
    const RunResult r = run_cli("--help");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("verify") != std::string::npos);
}

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "midquad/harness.hpp"
#include "midquad/midquad.hpp"
#include "oracles.hpp"

using midquad::builtin_corpus;
using midquad::CheckReport;
using midquad::ConfigError;
using midquad::CorpusConfig;
using midquad::format_number;
using midquad::HhSanity;
using midquad::HypothesisStatus;
using midquad::parse_config;
using midquad::run_check;
using midquad::run_hh_sanity;
using midquad::run_table;

namespace {

std::string entry_block(const std::string& name, const std::string& expr, double a, double b,
                        const std::string& ns, const std::string& qs = "") {
    std::string out = "[[entry]]\nname = \"" + name + "\"\nexpression = \"" + expr + "\"\n";
    out += "a = " + format_number(a) + "\nb = " + format_number(b) + "\n";
    out += "n_values = " + ns + "\n";
    if (!qs.empty()) out += "q_grid = " + qs + "\n";
    return out;
}

} // namespace

TEST_CASE("config: builtin corpus parses and validates") {
    const CorpusConfig cfg = parse_config(builtin_corpus());
    REQUIRE(cfg.entries.size() == 6);
    CHECK(cfg.entries[0].name == "exp");
    CHECK(cfg.entries[5].name == "quartic_wide");
    CHECK(cfg.entries[5].b == 2.0);
    CHECK(cfg.tolerances.identity == 1e-9);
    CHECK(cfg.tolerances.reference == 1e-12);
    for (const auto& e : cfg.entries) {
        CHECK(e.n_values == std::vector<int>{1, 2, 3, 4});
        CHECK(e.q_grid == std::vector<double>{1.0, 1.5, 2.0, 3.0, 5.0});
    }
}

TEST_CASE("config: q_grid defaults when omitted") {
    const CorpusConfig cfg = parse_config(entry_block("f", "x^2", 0.0, 1.0, "[1, 2]"));
    REQUIRE(cfg.entries.size() == 1);
    CHECK(cfg.entries[0].q_grid == midquad::default_q_grid());
}

TEST_CASE("config: comments, blank lines, tolerance overrides") {
    const std::string text = "# a comment\n\n[tolerances]\nidentity = 1e-8 # trailing\n\n" +
                             entry_block("f", "x", 0.0, 1.0, "[1]");
    const CorpusConfig cfg = parse_config(text);
    CHECK(cfg.tolerances.identity == 1e-8);
    CHECK(cfg.tolerances.reference == 1e-12); // untouched default
}

TEST_CASE("config: diagnostics carry line and field") {
    // a < b violated: entry header is on line 1
    try {
        parse_config(entry_block("bad", "x", 2.0, 1.0, "[1]"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find("a < b") != std::string::npos);
        CHECK(std::string(e.what()).find("bad") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config("x = 1\n"), ConfigError);             // key outside section
    CHECK_THROWS_AS(parse_config("[what]\n"), ConfigError);            // unknown section
    CHECK_THROWS_AS(parse_config("[[entry]]\nwat = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[tolerances]\nidentity = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(entry_block("f", "x +", 0.0, 1.0, "[1]")), ConfigError);
    CHECK_THROWS_AS(parse_config(entry_block("f", "x", 0.0, 1.0, "[0]")), ConfigError);
    CHECK_THROWS_AS(parse_config(entry_block("f", "x", 0.0, 1.0, "[13]")), ConfigError);
    CHECK_THROWS_AS(parse_config(entry_block("f", "x", 0.0, 1.0, "[1.5]")), ConfigError);
    CHECK_THROWS_AS(parse_config(entry_block("f", "x", 0.0, 1.0, "[]")), ConfigError);
    CHECK_THROWS_AS(parse_config(entry_block("f", "x", 0.0, 1.0, "[1]", "[0.5]")), ConfigError);
    CHECK_THROWS_AS(parse_config("[[entry]]\nname = \"f\"\n"), ConfigError); // missing fields
    CHECK_THROWS_AS(parse_config("[[entry]]\nname = f\n"), ConfigError);     // unquoted string
    CHECK_THROWS_AS(parse_config("[[entry]]\na = zebra\n"), ConfigError);
    CHECK_THROWS_AS(midquad::load_config("/nonexistent/path.toml"), ConfigError);
}

TEST_CASE("run_check: builtin corpus passes with guaranteed rows in stable order") {
    const CorpusConfig cfg = parse_config(builtin_corpus());
    const CheckReport report = run_check(cfg);
    REQUIRE(report.rows.size() == 24); // 6 entries x n in {1,2,3,4}
    CHECK(report.identity_failures == 0);
    CHECK(report.violated_rows == 0);
    CHECK(report.exit_code() == 0);

    std::size_t i = 0;
    for (const auto& entry : cfg.entries) {
        for (int n : entry.n_values) {
            CHECK(report.rows[i].name == entry.name);
            CHECK(report.rows[i].n == n);
            ++i;
        }
    }
    for (const auto& row : report.rows) {
        CAPTURE(row.name, row.n);
        CHECK(row.hypothesis_status == HypothesisStatus::Guaranteed);
        CHECK(row.actual_error <= row.bound_convex * (1.0 + 1e-12) + 1e-12);
        CHECK(row.bound_holder_best.has_value());
        CHECK(row.bound_powermean_best.has_value());
    }
}

TEST_CASE("run_check: uncertified hypotheses downgrade to observed, not failure") {
    // |f''| = sin x is concave on (0, pi): nothing certifies at n = 2.
    const CorpusConfig cfg =
        parse_config(entry_block("sine", "sin(x)", 0.0, 3.141592653589793, "[2]"));
    const CheckReport report = run_check(cfg);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].hypothesis_status == HypothesisStatus::Observed);
    CHECK(report.exit_code() == 0);
}

TEST_CASE("run_check: identity failures produce exit code 1") {
    CorpusConfig cfg = parse_config(builtin_corpus());
    cfg.tolerances.identity = 1e-300; // stricter than binary64 can satisfy
    const CheckReport report = run_check(cfg);
    CHECK(report.identity_failures >= 1);
    CHECK(report.exit_code() == 1);
}

TEST_CASE("run_check: certified domination violations are flagged and fail the run") {
    // 0.01*(1 - cos(2 pi 128 x)): |f'| vanishes at every point of the
    // 129-point grid, so the certificate wrongly passes, while the actual
    // quadrature error (0.01) dwarfs the endpoint-derivative bounds (~1e-14).
    const CorpusConfig cfg = parse_config(entry_block(
        "bumpy_deriv", "0.01*(1 - cos(804.247719318987*x))", 0.0, 1.0, "[1]", "[1.0]"));
    const CheckReport report = run_check(cfg);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].hypothesis_status == HypothesisStatus::Violated);
    CHECK(report.identity_failures == 0); // the rule identity itself still holds
    CHECK(report.violated_rows == 1);
    CHECK(report.exit_code() == 1);
}

TEST_CASE("run_check: report bytes are independent of the worker count") {
    const CorpusConfig cfg = parse_config(builtin_corpus());
    const CheckReport serial = run_check(cfg, 1);
    const CheckReport threaded = run_check(cfg, 4);
    CHECK(midquad::check_report_csv(serial.rows, cfg.tolerances) ==
          midquad::check_report_csv(threaded.rows, cfg.tolerances));
    CHECK(midquad::check_report_json(serial.rows, cfg.tolerances) ==
          midquad::check_report_json(threaded.rows, cfg.tolerances));
}

TEST_CASE("run_table: shape and frozen bound values") {
    const CorpusConfig cfg = parse_config(builtin_corpus());
    const auto rows = run_table(cfg);
    REQUIRE(rows.size() == 120); // 6 entries x 4 orders x 5 qs

    bool found = false;
    for (const auto& row : rows) {
        if (row.name == "exp" && row.n == 2 && row.q == 2.0) {
            found = true;
            CHECK(row.eq3 == Catch::Approx(0.07746420475956345).epsilon(1e-12));
            REQUIRE(row.eq4.has_value());
            CHECK(*row.eq4 == Catch::Approx(0.11231258428505626).epsilon(1e-12));
            CHECK(row.actual_error == Catch::Approx(0.06956055775891709).epsilon(1e-9));
        }
        if (row.q == 1.0) CHECK_FALSE(row.eq4.has_value());
    }
    CHECK(found);
}

TEST_CASE("run_table: empty corpus yields a header-only CSV") {
    const CorpusConfig cfg = parse_config("# nothing here\n");
    CHECK(cfg.entries.empty());
    const auto rows = run_table(cfg);
    CHECK(rows.empty());
    const std::string csv = midquad::table_csv(rows, cfg.tolerances);
    CHECK(csv.find("name,n,q,actual_error,eq3,eq4,eq7\n") != std::string::npos);
    CHECK(csv.back() == '\n');
    // run_check on the same degenerate config also passes
    CHECK(run_check(cfg).exit_code() == 0);
}

TEST_CASE("format_number: 17 significant digits round-trip") {
    CHECK(format_number(0.25) == "0.25");
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(6.0) == "6");
    oracle::Rng rng(0x5eed3001ULL);
    for (int i = 0; i < 200; ++i) {
        const double v = rng.uniform(-1e6, 1e6) * std::pow(10.0, rng.uniform_int(-12, 12));
        CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("reports: CSV and JSON carry identical numeric tokens") {
    midquad::ReportRow row;
    row.name = "demo";
    row.n = 3;
    row.reference = 1.0 / 3.0;
    row.rule_value = 0.1;
    row.remainder = 1e-9;
    row.identity_residual = 2.5e-17;
    row.actual_error = 0.25;
    row.bound_convex = 2.0 / 3.0;
    row.bound_powermean_best = 0.75;
    row.best_theorem = midquad::Theorem::Convex;
    row.hypothesis_status = HypothesisStatus::Guaranteed;

    const midquad::Tolerances tol;
    const std::string csv = midquad::check_report_csv({row}, tol);
    const std::string json = midquad::check_report_json({row}, tol);
    for (double v : {row.reference, row.rule_value, row.remainder, row.identity_residual,
                     row.actual_error, row.bound_convex, *row.bound_powermean_best}) {
        CAPTURE(v);
        CHECK(csv.find(format_number(v)) != std::string::npos);
        CHECK(json.find(format_number(v)) != std::string::npos);
    }
    // absent holder bound: empty CSV field, JSON null
    CHECK(csv.find(",0.66666666666666663,,0.75,") != std::string::npos);
    CHECK(json.find("\"bound_holder_best\": null") != std::string::npos);
    // tolerances echoed into both headers
    CHECK(csv.find("# identity_tolerance = " + format_number(tol.identity)) != std::string::npos);
    CHECK(json.find("\"identity\": " + format_number(tol.identity)) != std::string::npos);
}

TEST_CASE("kernel_csv: fixed 1e-3 grid") {
    const std::string csv = midquad::kernel_csv(midquad::RuleOrder(1));
    CHECK(csv.rfind("t,value\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1002);
    CHECK(csv.find("\n0.25,0.25\n") != std::string::npos);
    CHECK(csv.find("\n1,0\n") != std::string::npos); // M_1(1) = 0
}

TEST_CASE("run_hh_sanity: convex, tight, and non-applicable entries") {
    CorpusConfig cfg = parse_config(
        entry_block("exp", "exp(x)", 0.0, 1.0, "[1]") + entry_block("id", "x", 0.0, 1.0, "[1]") +
        entry_block("cap", "-x^2", 0.0, 1.0, "[1]") +
        entry_block("log1p", "ln(1+x)", 0.0, 1.0, "[1]"));
    CHECK(run_hh_sanity(cfg.entries[0]) == HhSanity::Pass);
    CHECK(run_hh_sanity(cfg.entries[1]) == HhSanity::Pass); // affine: equality within slack
    CHECK(run_hh_sanity(cfg.entries[2]) == HhSanity::NotApplicable);
    CHECK(run_hh_sanity(cfg.entries[3]) == HhSanity::NotApplicable); // concave
}

TEST_CASE("run_hh_sanity: grid-fooled certificates still surface a Fail") {
    // cos(2 pi 128 x) is ~1 at every grid point of the 129-point grid, so the
    // sampled target looks affine and certifies, but the true function bulges
    // above its mean at the midpoint.
    const CorpusConfig cfg = parse_config(
        entry_block("bumpy", "x + 0.001*cos(804.24771931898705*x)", 0.0, 1.0, "[1]"));
    CHECK(run_hh_sanity(cfg.entries[0]) == HhSanity::Fail);
}

namespace {

int run_cli(const std::string& args) {
    const char* cli = std::getenv("MIDQUAD_CLI");
    REQUIRE(cli != nullptr);
    const int status = std::system((std::string(cli) + " " + args).c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("cli: exit codes and report files", "[cli]") {
    if (std::getenv("MIDQUAD_CLI") == nullptr) {
        SKIP("MIDQUAD_CLI not set (run through ctest)");
    }
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "midquad-harness-test";
    fs::create_directories(dir);

    const fs::path bad = dir / "bad.toml";
    std::ofstream(bad) << entry_block("bad", "x", 2.0, 1.0, "[1]");
    CHECK(run_cli("check " + bad.string() + " >/dev/null 2>&1") == 2);
    CHECK(run_cli("check --no-such-flag >/dev/null 2>&1") == 2);
    CHECK(run_cli("kernel --n 0 >/dev/null 2>&1") == 2);
    // domain error inside an otherwise valid corpus -> numeric failure
    const fs::path dom = dir / "domain.toml";
    std::ofstream(dom) << entry_block("pole", "1/x", -1.0, 1.0, "[1]");
    CHECK(run_cli("check " + dom.string() + " >/dev/null 2>&1") == 3);

    const fs::path out = dir / "report";
    CHECK(run_cli("check --out " + out.string() + " >/dev/null 2>&1") == 0);
    CHECK(fs::exists(out.string() + ".csv"));
    CHECK(fs::exists(out.string() + ".json"));

    // check failure (identity residuals cannot meet 1e-300)
    CHECK(run_cli("check --tolerance-identity 1e-300 >/dev/null 2>&1") == 1);

    fs::remove_all(dir);
}

/*
 * Copyright 2026 the midquad authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "midquad/midquad.hpp"

// Exit codes: 0 pass, 1 check failure, 2 usage/config error, 3 numeric
// failure. MIDQUAD_SINGLE_THREAD=<non-empty> forces --jobs 1 for debugging.

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw midquad::ConfigError("cannot write output file '" + path + "'");
    out << content;
}

int effective_jobs(int jobs) {
    const char* env = std::getenv("MIDQUAD_SINGLE_THREAD");
    if (env != nullptr && env[0] != '\0') return 1;
    return jobs;
}

midquad::CorpusConfig load(const std::string& config_path) {
    if (config_path.empty()) return midquad::parse_config(midquad::builtin_corpus());
    return midquad::load_config(config_path);
}

int cmd_check(const std::string& config_path, const std::string& out_base,
              const std::string& format, int jobs, double tolerance_identity) {
    midquad::CorpusConfig cfg = load(config_path);
    if (tolerance_identity > 0.0) cfg.tolerances.identity = tolerance_identity;

    const midquad::CheckReport report = midquad::run_check(cfg, effective_jobs(jobs));
    const std::string csv = midquad::check_report_csv(report.rows, report.tolerances);
    const std::string json = midquad::check_report_json(report.rows, report.tolerances);

    if (!out_base.empty()) {
        write_file(out_base + ".csv", csv);
        write_file(out_base + ".json", json);
        std::cout << "rows: " << report.rows.size() << "\n"
                  << "identity_failures: " << report.identity_failures << "\n"
                  << "violated_rows: " << report.violated_rows << "\n"
                  << "status: " << (report.passed() ? "PASS" : "FAIL") << "\n";
    } else {
        std::cout << (format == "json" ? json : csv);
    }
    return report.exit_code();
}

int cmd_table(const std::string& config_path, const std::string& out_path, int jobs) {
    const midquad::CorpusConfig cfg = load(config_path);
    const auto rows = midquad::run_table(cfg, effective_jobs(jobs));
    const std::string csv = midquad::table_csv(rows, cfg.tolerances);
    if (!out_path.empty()) write_file(out_path, csv);
    else std::cout << csv;
    return 0;
}

int cmd_kernel(int n, const std::string& out_path) {
    const std::string csv = midquad::kernel_csv(midquad::RuleOrder(n));
    if (!out_path.empty()) write_file(out_path, csv);
    else std::cout << csv;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"corrected midpoint quadrature with convexity-based error bounds"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_base;
    std::string format = "csv";
    int jobs = 1;
    double tolerance_identity = 0.0;

    CLI::App* check = app.add_subcommand(
        "check", "run identity and bound-domination checks over a corpus");
    check->add_option("config", config_path,
                      "corpus config file (bundled corpus when omitted)");
    check->add_option("--out", out_base, "report base path; writes <out>.csv and <out>.json");
    check->add_option("--format", format, "stdout report format when --out is not given")
        ->check(CLI::IsMember({"csv", "json"}));
    check->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    check->add_option("--tolerance-identity", tolerance_identity,
                      "override the identity residual tolerance")
        ->check(CLI::PositiveNumber);

    std::string table_config;
    std::string table_out;
    int table_jobs = 1;
    CLI::App* table =
        app.add_subcommand("table", "emit the per-(entry, n, q) bound-comparison table");
    table->add_option("config", table_config,
                      "corpus config file (bundled corpus when omitted)");
    table->add_option("--out", table_out, "output CSV path (stdout when omitted)");
    table->add_option("--jobs", table_jobs, "worker threads")->check(CLI::PositiveNumber);

    int kernel_n = 1;
    std::string kernel_out;
    CLI::App* kernel = app.add_subcommand("kernel", "dump (t, M_n(t)) pairs on a 1e-3 grid");
    kernel->add_option("--n", kernel_n, "rule order")->required();
    kernel->add_option("--out", kernel_out, "output CSV path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) return cmd_check(config_path, out_base, format, jobs, tolerance_identity);
        if (table->parsed()) return cmd_table(table_config, table_out, table_jobs);
        return cmd_kernel(kernel_n, kernel_out);
    } catch (const midquad::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const midquad::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const midquad::DomainError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const midquad::ConvergenceError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

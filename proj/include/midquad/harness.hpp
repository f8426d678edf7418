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

#ifndef MIDQUAD_HARNESS_HPP
#define MIDQUAD_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "midquad/bounds.hpp"
#include "midquad/config.hpp"
#include "midquad/convexity.hpp"
#include "midquad/quadrature.hpp"
#include "midquad/report.hpp"

namespace midquad {

// Corpus runner. Tasks are pure and write into preallocated slots keyed by
// (entry index, n), so reports are byte-identical for any worker count.

namespace detail {

template <class Fn>
void run_indexed_tasks(std::size_t count, int jobs, Fn&& body) {
    jobs = std::clamp(jobs, 1, 256);
    if (jobs == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : workers) t.join();
    // Rethrow the failure of the lowest task index so the reported error
    // does not depend on scheduling.
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

struct EntryOrderResult {
    double reference = 0.0;
    double rule_value = 0.0;
    double remainder = 0.0;
    double actual_error = 0.0;
    EndpointDerivs derivs{0.0, 0.0};
    ConvexityCertificate cert_abs;                 // |f^(n)| convex
    std::map<double, ConvexityCertificate> cert_q; // |f^(n)|^q convex, per grid q
    std::vector<double> qs;                        // ascending q grid
};

inline EntryOrderResult evaluate_entry_order(const Tolerances& tol, const CorpusEntry& entry,
                                             const Expression& f, int n_value) {
    const RuleOrder order(n_value);
    const Interval iv(entry.a, entry.b);
    EntryOrderResult r;
    r.reference = reference_integral(f, iv, tol.reference);
    r.rule_value = corrected_midpoint(f, iv, order);
    r.remainder = remainder_integral(f, iv, order);
    r.actual_error = std::abs(r.reference - r.rule_value);
    r.derivs = endpoint_derivs(f, iv, order);
    r.cert_abs = certify(f, iv, order, std::nullopt, kDefaultConvexityGrid, tol.convexity);
    r.qs = entry.q_grid;
    std::sort(r.qs.begin(), r.qs.end());
    for (double q : r.qs)
        r.cert_q.emplace(q, certify(f, iv, order, q, kDefaultConvexityGrid, tol.convexity));
    return r;
}

inline bool dominated(double actual, double bound, double slack) {
    return actual <= bound * (1.0 + slack) + slack;
}

} // namespace detail

struct CheckReport {
    Tolerances tolerances;
    std::vector<ReportRow> rows;
    std::size_t identity_failures = 0;
    std::size_t violated_rows = 0;

    bool passed() const { return identity_failures == 0 && violated_rows == 0; }
    int exit_code() const { return passed() ? 0 : 1; }
};

/// Runs identity and bound checks over every (entry, n) pair. A row is
/// "guaranteed" when the winning bound's convexity hypothesis certifies,
/// "violated" when any certified bound fails to dominate the actual error,
/// and "observed" otherwise.
inline CheckReport run_check(const CorpusConfig& cfg, int jobs = 1) {
    struct Task {
        std::size_t entry;
        int n;
    };
    std::vector<Task> tasks;
    std::vector<Expression> parsed;
    parsed.reserve(cfg.entries.size());
    for (std::size_t e = 0; e < cfg.entries.size(); ++e) {
        parsed.push_back(parse(cfg.entries[e].expression));
        for (int n : cfg.entries[e].n_values) tasks.push_back({e, n});
    }

    CheckReport report;
    report.tolerances = cfg.tolerances;
    report.rows.resize(tasks.size());
    std::vector<char> violated(tasks.size(), 0);

    detail::run_indexed_tasks(tasks.size(), jobs, [&](std::size_t i) {
        const Task& task = tasks[i];
        const CorpusEntry& entry = cfg.entries[task.entry];
        const Expression& f = parsed[task.entry];
        const Tolerances& tol = cfg.tolerances;
        const RuleOrder order(task.n);
        const Interval iv(entry.a, entry.b);
        const detail::EntryOrderResult r = detail::evaluate_entry_order(tol, entry, f, task.n);

        ReportRow row;
        row.name = entry.name;
        row.n = task.n;
        row.reference = r.reference;
        row.rule_value = r.rule_value;
        row.remainder = r.remainder;
        row.identity_residual = std::abs(r.rule_value + r.remainder - r.reference);
        row.actual_error = r.actual_error;
        row.bound_convex = bound_convex(order, iv, r.derivs);

        bool any_violation = false;
        if (r.cert_abs.certified &&
            !detail::dominated(r.actual_error, row.bound_convex, tol.domination_slack))
            any_violation = true;

        for (double q : r.qs) {
            const bool certified = r.cert_q.at(q).certified;
            if (q > 1.0) {
                const double eq4 = bound_holder(order, iv, r.derivs,
                                                HolderExponents::conjugate_of(q));
                if (!row.bound_holder_best || eq4 < *row.bound_holder_best)
                    row.bound_holder_best = eq4;
                if (certified && !detail::dominated(r.actual_error, eq4, tol.domination_slack))
                    any_violation = true;
            }
            const double eq7 = bound_power_mean(order, iv, r.derivs, q);
            if (!row.bound_powermean_best || eq7 < *row.bound_powermean_best)
                row.bound_powermean_best = eq7;
            if (certified && !detail::dominated(r.actual_error, eq7, tol.domination_slack))
                any_violation = true;
        }

        const BoundReport best = best_bound(order, iv, r.derivs, r.qs);
        row.best_theorem = best.theorem;
        const bool best_certified =
            best.theorem == Theorem::Convex ? r.cert_abs.certified
                                            : r.cert_q.at(*best.q_used).certified;
        row.hypothesis_status = any_violation          ? HypothesisStatus::Violated
                                : best_certified       ? HypothesisStatus::Guaranteed
                                                       : HypothesisStatus::Observed;
        violated[i] = any_violation ? 1 : 0;
        report.rows[i] = std::move(row);
    });

    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const ReportRow& row = report.rows[i];
        const double tol = cfg.tolerances.identity;
        if (!(row.identity_residual <= std::max(tol, tol * std::abs(row.reference))))
            ++report.identity_failures;
        if (violated[i]) ++report.violated_rows;
    }
    return report;
}

/// Emits the per-(entry, n, q) bound-comparison table.
inline std::vector<TableRow> run_table(const CorpusConfig& cfg, int jobs = 1) {
    struct Task {
        std::size_t entry;
        int n;
    };
    std::vector<Task> tasks;
    std::vector<Expression> parsed;
    parsed.reserve(cfg.entries.size());
    for (std::size_t e = 0; e < cfg.entries.size(); ++e) {
        parsed.push_back(parse(cfg.entries[e].expression));
        for (int n : cfg.entries[e].n_values) tasks.push_back({e, n});
    }

    std::vector<std::vector<TableRow>> groups(tasks.size());
    detail::run_indexed_tasks(tasks.size(), jobs, [&](std::size_t i) {
        const Task& task = tasks[i];
        const CorpusEntry& entry = cfg.entries[task.entry];
        const Expression& f = parsed[task.entry];
        const RuleOrder order(task.n);
        const Interval iv(entry.a, entry.b);

        const double reference = reference_integral(f, iv, cfg.tolerances.reference);
        const double rule_value = corrected_midpoint(f, iv, order);
        const double actual = std::abs(reference - rule_value);
        const EndpointDerivs d = endpoint_derivs(f, iv, order);
        const double eq3 = bound_convex(order, iv, d);

        std::vector<double> qs = entry.q_grid;
        std::sort(qs.begin(), qs.end());
        for (double q : qs) {
            TableRow row;
            row.name = entry.name;
            row.n = task.n;
            row.q = q;
            row.actual_error = actual;
            row.eq3 = eq3;
            if (q > 1.0) row.eq4 = bound_holder(order, iv, d, HolderExponents::conjugate_of(q));
            row.eq7 = bound_power_mean(order, iv, d, q);
            groups[i].push_back(std::move(row));
        }
    });

    std::vector<TableRow> rows;
    for (std::vector<TableRow>& g : groups)
        for (TableRow& r : g) rows.push_back(std::move(r));
    return rows;
}

enum class HhSanity { Pass, Fail, NotApplicable };

/// Checks the two-sided midpoint/endpoint sandwich of the mean value
///   f((a+b)/2) <= (1/(b-a)) * integral <= (f(a)+f(b))/2
/// for entries whose f itself (signed, order 0) certifies convex. Entries
/// that do not certify are reported NotApplicable, never Fail.
inline HhSanity run_hh_sanity(const CorpusEntry& entry,
                              double convexity_tol = kDefaultConvexityTol,
                              double reference_tol = 1e-12) {
    const Expression f = parse(entry.expression);
    const Interval iv(entry.a, entry.b);
    const detail::GridScan scan = detail::grid_convexity(
        [&](double x) { return eval(f, x); }, iv, kDefaultConvexityGrid, convexity_tol);
    if (!scan.certified) return HhSanity::NotApplicable;

    const double mean = reference_integral(f, iv, reference_tol) / iv.width();
    const double at_mid = eval(f, iv.midpoint());
    const double end_avg = 0.5 * (eval(f, iv.a()) + eval(f, iv.b()));
    constexpr double slack = 1e-12;
    return (at_mid <= mean + slack && mean <= end_avg + slack) ? HhSanity::Pass : HhSanity::Fail;
}

} // namespace midquad

#endif // MIDQUAD_HARNESS_HPP

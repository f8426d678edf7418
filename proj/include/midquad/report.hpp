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

#ifndef MIDQUAD_REPORT_HPP
#define MIDQUAD_REPORT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "midquad/bounds.hpp"
#include "midquad/config.hpp"
#include "midquad/format.hpp"
#include "midquad/kernel.hpp"

namespace midquad {

// Machine-readable reports. CSV and JSON writers share format_number, so
// both serializations carry bit-identical numeric values. Writers are
// deliberately hand-rolled: byte-stable output is part of the contract.

enum class HypothesisStatus { Guaranteed, Observed, Violated };

inline std::string_view to_string(HypothesisStatus s) {
    switch (s) {
    case HypothesisStatus::Guaranteed: return "guaranteed";
    case HypothesisStatus::Observed: return "observed";
    case HypothesisStatus::Violated: return "violated";
    }
    return "?";
}

/// One (entry, n) check result.
struct ReportRow {
    std::string name;
    int n = 1;
    double reference = 0.0;
    double rule_value = 0.0;
    double remainder = 0.0;
    double identity_residual = 0.0;
    double actual_error = 0.0;
    double bound_convex = 0.0;
    std::optional<double> bound_holder_best;    // empty when the q grid has no q > 1
    std::optional<double> bound_powermean_best; // empty only for an empty q grid
    Theorem best_theorem = Theorem::Convex;
    HypothesisStatus hypothesis_status = HypothesisStatus::Observed;
};

/// One (entry, n, q) bound-comparison result.
struct TableRow {
    std::string name;
    int n = 1;
    double q = 1.0;
    double actual_error = 0.0;
    double eq3 = 0.0;
    std::optional<double> eq4; // empty at q = 1
    double eq7 = 0.0;
};

namespace detail {

inline std::string csv_escape(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

inline std::string json_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

inline void append_tolerance_header(std::string& out, const Tolerances& tol) {
    out += "# identity_tolerance = " + format_number(tol.identity) + "\n";
    out += "# reference_tolerance = " + format_number(tol.reference) + "\n";
    out += "# convexity_tolerance = " + format_number(tol.convexity) + "\n";
    out += "# domination_slack = " + format_number(tol.domination_slack) + "\n";
}

} // namespace detail

inline std::string check_report_csv(const std::vector<ReportRow>& rows, const Tolerances& tol) {
    std::string out;
    detail::append_tolerance_header(out, tol);
    out += "name,n,reference,rule_value,remainder,identity_residual,actual_error,"
           "bound_convex,bound_holder_best,bound_powermean_best,best_theorem,hypothesis_status\n";
    for (const ReportRow& r : rows) {
        out += detail::csv_escape(r.name);
        out += ',' + std::to_string(r.n);
        out += ',' + format_number(r.reference);
        out += ',' + format_number(r.rule_value);
        out += ',' + format_number(r.remainder);
        out += ',' + format_number(r.identity_residual);
        out += ',' + format_number(r.actual_error);
        out += ',' + format_number(r.bound_convex);
        out += ',';
        if (r.bound_holder_best) out += format_number(*r.bound_holder_best);
        out += ',';
        if (r.bound_powermean_best) out += format_number(*r.bound_powermean_best);
        out += ',';
        out += to_string(r.best_theorem);
        out += ',';
        out += to_string(r.hypothesis_status);
        out += '\n';
    }
    return out;
}

inline std::string check_report_json(const std::vector<ReportRow>& rows, const Tolerances& tol) {
    std::string out = "{\n  \"tolerances\": {";
    out += "\"identity\": " + format_number(tol.identity);
    out += ", \"reference\": " + format_number(tol.reference);
    out += ", \"convexity\": " + format_number(tol.convexity);
    out += ", \"domination_slack\": " + format_number(tol.domination_slack);
    out += "},\n  \"rows\": [";
    bool first = true;
    for (const ReportRow& r : rows) {
        out += first ? "\n" : ",\n";
        first = false;
        out += "    {\"name\": \"" + detail::json_escape(r.name) + "\"";
        out += ", \"n\": " + std::to_string(r.n);
        out += ", \"reference\": " + format_number(r.reference);
        out += ", \"rule_value\": " + format_number(r.rule_value);
        out += ", \"remainder\": " + format_number(r.remainder);
        out += ", \"identity_residual\": " + format_number(r.identity_residual);
        out += ", \"actual_error\": " + format_number(r.actual_error);
        out += ", \"bound_convex\": " + format_number(r.bound_convex);
        out += ", \"bound_holder_best\": ";
        out += r.bound_holder_best ? format_number(*r.bound_holder_best) : "null";
        out += ", \"bound_powermean_best\": ";
        out += r.bound_powermean_best ? format_number(*r.bound_powermean_best) : "null";
        out += ", \"best_theorem\": \"" + std::string(to_string(r.best_theorem)) + "\"";
        out += ", \"hypothesis_status\": \"" + std::string(to_string(r.hypothesis_status)) + "\"}";
    }
    out += "\n  ]\n}\n";
    return out;
}

inline std::string table_csv(const std::vector<TableRow>& rows, const Tolerances& tol) {
    std::string out;
    detail::append_tolerance_header(out, tol);
    out += "name,n,q,actual_error,eq3,eq4,eq7\n";
    for (const TableRow& r : rows) {
        out += detail::csv_escape(r.name);
        out += ',' + std::to_string(r.n);
        out += ',' + format_number(r.q);
        out += ',' + format_number(r.actual_error);
        out += ',' + format_number(r.eq3);
        out += ',';
        if (r.eq4) out += format_number(*r.eq4);
        out += ',' + format_number(r.eq7);
        out += '\n';
    }
    return out;
}

/// Kernel dump for plotting: (t, M_n(t)) on the fixed 1e-3 grid.
inline std::string kernel_csv(RuleOrder order) {
    std::string out = "t,value\n";
    for (int i = 0; i <= 1000; ++i) {
        const double t = static_cast<double>(i) / 1000.0;
        out += format_number(t);
        out += ',' + format_number(kernel_value(order, t));
        out += '\n';
    }
    return out;
}

} // namespace midquad

#endif // MIDQUAD_REPORT_HPP

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

#ifndef MIDQUAD_CONFIG_HPP
#define MIDQUAD_CONFIG_HPP

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "midquad/errors.hpp"
#include "midquad/expr.hpp"
#include "midquad/kernel.hpp"

namespace midquad {

// Corpus configuration: a flat, diffable text format with one [[entry]]
// block per corpus item and an optional [tolerances] section.
//
//   [tolerances]
//   identity = 1e-9
//
//   [[entry]]
//   name = "exp"
//   expression = "exp(x)"
//   a = 0.0
//   b = 1.0
//   n_values = [1, 2, 3, 4]
//   q_grid = [1.0, 1.5, 2.0, 3.0, 5.0]

struct Tolerances {
    double identity = 1e-9;         // |rule + remainder - reference| gate
    double reference = 1e-12;       // trusted integrator relative tolerance
    double convexity = 1e-9;        // grid defect tolerance (relative to scale)
    double domination_slack = 1e-12; // slack in actual <= bound checks
};

struct CorpusEntry {
    std::string name;
    std::string expression;
    double a = 0.0;
    double b = 0.0;
    std::vector<int> n_values;
    std::vector<double> q_grid;
    std::size_t line = 0; // config line of the [[entry]] header
};

struct CorpusConfig {
    Tolerances tolerances;
    std::vector<CorpusEntry> entries;
};

/// The q grid used when an entry does not set one.
inline const std::vector<double>& default_q_grid() {
    static const std::vector<double> grid = {1.0, 1.5, 2.0, 3.0, 5.0};
    return grid;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_config_number(std::string_view text, std::size_t line) {
    const std::string_view t = trim(text);
    if (t.empty()) throw ConfigError("expected a number", line);
    std::string norm(t);
    if (norm.front() == '+') norm.erase(norm.begin());
    double v = 0.0;
    const auto res = std::from_chars(norm.data(), norm.data() + norm.size(), v);
    if (res.ec != std::errc() || res.ptr != norm.data() + norm.size() || !std::isfinite(v))
        throw ConfigError("malformed number '" + std::string(t) + "'", line);
    return v;
}

inline std::vector<double> parse_config_array(std::string_view text, std::size_t line) {
    std::string_view t = trim(text);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
        throw ConfigError("expected an array '[ ... ]'", line);
    t = trim(t.substr(1, t.size() - 2));
    std::vector<double> out;
    if (t.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = t.find(',', start);
        const std::string_view item =
            comma == std::string_view::npos ? t.substr(start) : t.substr(start, comma - start);
        out.push_back(parse_config_number(item, line));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::string parse_config_string(std::string_view text, std::size_t line) {
    const std::string_view t = trim(text);
    if (t.size() < 2 || t.front() != '"' || t.back() != '"')
        throw ConfigError("expected a quoted string", line);
    const std::string_view body = t.substr(1, t.size() - 2);
    if (body.find('"') != std::string_view::npos)
        throw ConfigError("embedded quotes are not supported in strings", line);
    return std::string(body);
}

} // namespace detail

/// Parses and validates corpus configuration text. Diagnostics carry the
/// 1-based line and the offending field.
inline CorpusConfig parse_config(std::string_view text) {
    CorpusConfig cfg;
    enum class Section { None, Tolerances, Entry };
    Section section = Section::None;

    struct EntryState {
        bool has_name = false, has_expression = false, has_a = false, has_b = false,
             has_n = false, has_q = false;
    };
    EntryState state;

    const auto finalize_entry = [&]() {
        if (cfg.entries.empty() || section != Section::Entry) return;
        CorpusEntry& e = cfg.entries.back();
        const std::size_t at = e.line;
        if (!state.has_name) throw ConfigError("entry is missing field 'name'", at);
        if (!state.has_expression)
            throw ConfigError("entry '" + e.name + "' is missing field 'expression'", at);
        if (!state.has_a || !state.has_b)
            throw ConfigError("entry '" + e.name + "' is missing field 'a' or 'b'", at);
        if (!state.has_n)
            throw ConfigError("entry '" + e.name + "' is missing field 'n_values'", at);
        if (!(e.a < e.b))
            throw ConfigError("entry '" + e.name + "': field 'a'/'b' requires a < b (a = " +
                                  format_number(e.a) + ", b = " + format_number(e.b) + ")",
                              at);
        if (!state.has_q) e.q_grid = default_q_grid();
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view raw =
            eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        // Strip comments (quotes in this format never contain '#').
        const std::size_t hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view line = detail::trim(raw);
        if (line.empty()) continue;

        if (line == "[[entry]]") {
            finalize_entry();
            section = Section::Entry;
            state = EntryState{};
            CorpusEntry e;
            e.line = line_no;
            cfg.entries.push_back(std::move(e));
            continue;
        }
        if (line == "[tolerances]") {
            finalize_entry();
            section = Section::Tolerances;
            continue;
        }
        if (line.front() == '[')
            throw ConfigError("unknown section '" + std::string(line) + "'", line_no);

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected 'key = value'", line_no);
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string_view value = line.substr(eq + 1);

        if (section == Section::Tolerances) {
            const double v = detail::parse_config_number(value, line_no);
            if (key == "identity") {
                if (!(v > 0.0)) throw ConfigError("field 'identity' must be positive", line_no);
                cfg.tolerances.identity = v;
            } else if (key == "reference") {
                if (!(v >= 1e-13))
                    throw ConfigError("field 'reference' must be >= 1e-13", line_no);
                cfg.tolerances.reference = v;
            } else if (key == "convexity") {
                if (!(v > 0.0)) throw ConfigError("field 'convexity' must be positive", line_no);
                cfg.tolerances.convexity = v;
            } else if (key == "domination_slack") {
                if (!(v >= 0.0))
                    throw ConfigError("field 'domination_slack' must be >= 0", line_no);
                cfg.tolerances.domination_slack = v;
            } else {
                throw ConfigError("unknown tolerances field '" + key + "'", line_no);
            }
            continue;
        }
        if (section != Section::Entry)
            throw ConfigError("key '" + key + "' outside any section", line_no);

        CorpusEntry& e = cfg.entries.back();
        if (key == "name") {
            e.name = detail::parse_config_string(value, line_no);
            if (e.name.empty()) throw ConfigError("field 'name' must be non-empty", line_no);
            state.has_name = true;
        } else if (key == "expression") {
            e.expression = detail::parse_config_string(value, line_no);
            try {
                (void)parse(e.expression);
            } catch (const ParseError& err) {
                throw ConfigError("field 'expression': " + std::string(err.what()), line_no);
            }
            state.has_expression = true;
        } else if (key == "a") {
            e.a = detail::parse_config_number(value, line_no);
            state.has_a = true;
        } else if (key == "b") {
            e.b = detail::parse_config_number(value, line_no);
            state.has_b = true;
        } else if (key == "n_values") {
            const auto raw_ns = detail::parse_config_array(value, line_no);
            if (raw_ns.empty())
                throw ConfigError("field 'n_values' must be non-empty", line_no);
            e.n_values.clear();
            for (double v : raw_ns) {
                if (v != std::rint(v) || v < 1.0 || v > kMaxRuleOrder)
                    throw ConfigError("field 'n_values' entries must be integers in [1, 12]",
                                      line_no);
                e.n_values.push_back(static_cast<int>(v));
            }
            state.has_n = true;
        } else if (key == "q_grid") {
            e.q_grid = detail::parse_config_array(value, line_no);
            if (e.q_grid.empty())
                throw ConfigError("field 'q_grid' must be non-empty", line_no);
            for (double v : e.q_grid)
                if (!(v >= 1.0))
                    throw ConfigError("field 'q_grid' entries must be >= 1", line_no);
            state.has_q = true;
        } else {
            throw ConfigError("unknown entry field '" + key + "'", line_no);
        }
    }
    finalize_entry();
    return cfg;
}

/// Reads and parses a configuration file.
inline CorpusConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

/// The bundled default corpus (also shipped as data/corpus.toml).
inline std::string_view builtin_corpus() {
    static constexpr std::string_view text = R"corpus(# Bundled verification corpus.

[tolerances]
identity = 1e-9
reference = 1e-12
convexity = 1e-9
domination_slack = 1e-12

[[entry]]
name = "exp"
expression = "exp(x)"
a = 0.0
b = 1.0
n_values = [1, 2, 3, 4]
q_grid = [1.0, 1.5, 2.0, 3.0, 5.0]

[[entry]]
name = "square"
expression = "x^2"
a = 0.0
b = 1.0
n_values = [1, 2, 3, 4]
q_grid = [1.0, 1.5, 2.0, 3.0, 5.0]

[[entry]]
name = "quartic"
expression = "x^4"
a = 0.0
b = 1.0
n_values = [1, 2, 3, 4]
q_grid = [1.0, 1.5, 2.0, 3.0, 5.0]

[[entry]]
name = "reciprocal"
expression = "1/(1+x)"
a = 0.0
b = 1.0
n_values = [1, 2, 3, 4]
q_grid = [1.0, 1.5, 2.0, 3.0, 5.0]

[[entry]]
name = "log1p"
expression = "ln(1+x)"
a = 0.0
b = 1.0
n_values = [1, 2, 3, 4]
q_grid = [1.0, 1.5, 2.0, 3.0, 5.0]

[[entry]]
name = "quartic_wide"
expression = "x^4"
a = 0.0
b = 2.0
n_values = [1, 2, 3, 4]
q_grid = [1.0, 1.5, 2.0, 3.0, 5.0]
)corpus";
    return text;
}

} // namespace midquad

#endif // MIDQUAD_CONFIG_HPP

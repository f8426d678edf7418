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

#ifndef MIDQUAD_ERRORS_HPP
#define MIDQUAD_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace midquad {

/// Base class of all midquad runtime failures.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Expression text could not be parsed. Carries the byte offset of the
/// offending position in the source string.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation left the domain of a subexpression: ln/sqrt of a non-positive
/// value, division by zero, fractional power of a non-positive base, or a
/// non-finite derivative value.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A quadrature refinement loop hit its panel/subdivision limit without
/// meeting its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Corpus configuration is malformed or fails validation. Carries the
/// 1-based config line the diagnostic refers to (0 when not line-specific).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, std::size_t line = 0)
        : Error(line != 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace midquad

#endif // MIDQUAD_ERRORS_HPP

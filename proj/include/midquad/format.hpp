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

#ifndef MIDQUAD_FORMAT_HPP
#define MIDQUAD_FORMAT_HPP

#include <cstdio>
#include <string>

namespace midquad {

/// Canonical number rendering used everywhere values leave the library:
/// 17 significant digits, lowercase exponent. 17 digits round-trip binary64
/// exactly, so emitted reports are usable as oracles.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

} // namespace midquad

#endif // MIDQUAD_FORMAT_HPP

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

#ifndef MIDQUAD_MIDQUAD_HPP
#define MIDQUAD_MIDQUAD_HPP

#include "midquad/bounds.hpp"
#include "midquad/config.hpp"
#include "midquad/convexity.hpp"
#include "midquad/errors.hpp"
#include "midquad/expr.hpp"
#include "midquad/format.hpp"
#include "midquad/harness.hpp"
#include "midquad/jet.hpp"
#include "midquad/kernel.hpp"
#include "midquad/quadrature.hpp"
#include "midquad/report.hpp"

#endif // MIDQUAD_MIDQUAD_HPP

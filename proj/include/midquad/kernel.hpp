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

#ifndef MIDQUAD_KERNEL_HPP
#define MIDQUAD_KERNEL_HPP

#include <cmath>
#include <stdexcept>

#include "midquad/jet.hpp"

namespace midquad {

inline constexpr int kMaxRuleOrder = 12;

/// Order n >= 1 of the corrected midpoint rule. Runtime-valued so order
/// sweeps stay a loop, not a template instantiation.
class RuleOrder {
public:
    explicit RuleOrder(int n) : n_(n) {
        if (n < 1 || n > kMaxRuleOrder)
            throw std::invalid_argument("rule order must be in [1, 12]");
    }

    int n() const noexcept { return n_; }

private:
    int n_;
};

namespace detail {

/// Deterministic integer power by square-and-multiply; only products, so
/// ipow(-t, n) == (-1)^n * ipow(t, n) bitwise.
inline double ipow(double base, int e) {
    double acc = 1.0;
    double sq = base;
    unsigned u = static_cast<unsigned>(e);
    while (u != 0) {
        if (u & 1u) acc *= sq;
        u >>= 1;
        if (u != 0) sq *= sq;
    }
    return acc;
}

} // namespace detail

/// Piecewise quadrature kernel: t^n/n! on [0, 1/2], (t-1)^n/n! on (1/2, 1].
/// t = 1/2 takes the left branch (the bracket is closed there); a
/// measure-zero choice, but it makes the function total.
inline double kernel_value(RuleOrder order, double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("kernel argument t must lie in [0, 1]");
    const int n = order.n();
    if (t <= 0.5) return detail::ipow(t, n) / kFactorial[static_cast<std::size_t>(n)];
    return detail::ipow(t - 1.0, n) / kFactorial[static_cast<std::size_t>(n)];
}

/// Closed form of the L1 norm: integral of |M_n| over [0,1] = 1/(2^n (n+1)!).
inline double kernel_l1_norm(RuleOrder order) {
    const int n = order.n();
    return 1.0 / (std::ldexp(1.0, n) * kFactorial[static_cast<std::size_t>(n) + 1]);
}

} // namespace midquad

#endif // MIDQUAD_KERNEL_HPP

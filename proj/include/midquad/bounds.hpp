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

#ifndef MIDQUAD_BOUNDS_HPP
#define MIDQUAD_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "midquad/quadrature.hpp"

namespace midquad {

// A-posteriori bounds on |integral - rule_value| for the order-n corrected
// midpoint rule, each valid under a convexity hypothesis on |f^(n)| (plain
// or raised to the q-th power).

/// Absolute n-th derivative values at the interval endpoints.
class EndpointDerivs {
public:
    EndpointDerivs(double at_a, double at_b) : at_a_(at_a), at_b_(at_b) {
        if (!(at_a >= 0.0) || !(at_b >= 0.0) || !std::isfinite(at_a) || !std::isfinite(at_b))
            throw std::invalid_argument("endpoint derivative magnitudes must be finite and >= 0");
    }

    double at_a() const noexcept { return at_a_; }
    double at_b() const noexcept { return at_b_; }

private:
    double at_a_;
    double at_b_;
};

/// Conjugate exponent pair with 1/p + 1/q = 1 and q > 1.
class HolderExponents {
public:
    HolderExponents(double p, double q) : p_(p), q_(q) {
        if (!(q > 1.0) || !std::isfinite(p) || !std::isfinite(q))
            throw std::invalid_argument("holder exponents require finite p and q > 1");
        if (std::abs(1.0 / p + 1.0 / q - 1.0) > 1e-12)
            throw std::invalid_argument("holder exponents must satisfy 1/p + 1/q = 1");
    }

    static HolderExponents conjugate_of(double q) {
        if (!(q > 1.0)) throw std::invalid_argument("holder conjugate requires q > 1");
        return HolderExponents(q / (q - 1.0), q);
    }

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }

private:
    double p_;
    double q_;
};

enum class Theorem { Convex, Holder, PowerMean };

inline std::string_view to_string(Theorem t) {
    switch (t) {
    case Theorem::Convex: return "convex";
    case Theorem::Holder: return "holder";
    case Theorem::PowerMean: return "power_mean";
    }
    return "?";
}

/// One bound evaluation plus the status the harness fills in afterwards.
struct BoundReport {
    Theorem theorem = Theorem::Convex;
    double value = 0.0;
    std::optional<double> q_used;   // empty for the convex bound
    bool hypothesis_certified = false;
    double actual_error = std::numeric_limits<double>::quiet_NaN();
};

/// Bound under "|f^(n)| convex":
///   (b-a)^(n+1) / (2^n (n+1)!) * (A + B) / 2.
inline double bound_convex(RuleOrder order, Interval iv, const EndpointDerivs& d) {
    const int n = order.n();
    const double pref = detail::ipow(iv.width(), n + 1) /
                        (std::ldexp(1.0, n) * kFactorial[static_cast<std::size_t>(n) + 1]);
    return pref * 0.5 * (d.at_a() + d.at_b());
}

/// Bound under "|f^(n)|^q convex", via the Holder inequality:
///   (b-a)^(n+1) / (2^(n+1) n!) * (1/(np+1))^(1/p)
///     * { ((A^q + 3 B^q)/4)^(1/q) + ((3 A^q + B^q)/4)^(1/q) }.
inline double bound_holder(RuleOrder order, Interval iv, const EndpointDerivs& d,
                           const HolderExponents& exps) {
    const int n = order.n();
    const double p = exps.p();
    const double q = exps.q();
    const double pref = detail::ipow(iv.width(), n + 1) /
                        (std::ldexp(1.0, n + 1) * kFactorial[static_cast<std::size_t>(n)]);
    const double kernel_lp = std::pow(1.0 / (n * p + 1.0), 1.0 / p);
    const double aq = std::pow(d.at_a(), q);
    const double bq = std::pow(d.at_b(), q);
    const double brackets =
        std::pow((aq + 3.0 * bq) / 4.0, 1.0 / q) + std::pow((3.0 * aq + bq) / 4.0, 1.0 / q);
    return pref * kernel_lp * brackets;
}

/// Bound under "|f^(n)|^q convex" for q >= 1, via the power-mean inequality:
///   (b-a)^(n+1) / (2^(n+1) (n+1)!)
///     * { [ (n+1)/(2n+4) A^q + (n+3)/(2n+4) B^q ]^(1/q)
///       + [ (n+3)/(2n+4) A^q + (n+1)/(2n+4) B^q ]^(1/q) }.
/// At q = 1 the weights sum to 1 and this collapses onto bound_convex.
inline double bound_power_mean(RuleOrder order, Interval iv, const EndpointDerivs& d, double q) {
    if (!(q >= 1.0) || !std::isfinite(q))
        throw std::invalid_argument("power-mean exponent requires q >= 1");
    const int n = order.n();
    const double pref = detail::ipow(iv.width(), n + 1) /
                        (std::ldexp(1.0, n + 1) * kFactorial[static_cast<std::size_t>(n) + 1]);
    const double w_lo = (n + 1.0) / (2.0 * n + 4.0);
    const double w_hi = (n + 3.0) / (2.0 * n + 4.0);
    const double aq = std::pow(d.at_a(), q);
    const double bq = std::pow(d.at_b(), q);
    const double brackets = std::pow(w_lo * aq + w_hi * bq, 1.0 / q) +
                            std::pow(w_hi * aq + w_lo * bq, 1.0 / q);
    return pref * brackets;
}

/// Evaluates every applicable bound over the q grid and returns the
/// smallest. Ties break toward the lower theorem (Convex < Holder <
/// PowerMean), then toward smaller q.
inline BoundReport best_bound(RuleOrder order, Interval iv, const EndpointDerivs& d,
                              std::span<const double> q_grid) {
    if (q_grid.empty()) throw std::invalid_argument("q grid must be non-empty");
    std::vector<double> qs(q_grid.begin(), q_grid.end());
    for (double q : qs)
        if (!(q >= 1.0) || !std::isfinite(q))
            throw std::invalid_argument("q grid entries must be finite and >= 1");
    std::sort(qs.begin(), qs.end());

    BoundReport best;
    best.theorem = Theorem::Convex;
    best.value = bound_convex(order, iv, d);
    for (double q : qs) {
        if (q > 1.0) {
            const double v = bound_holder(order, iv, d, HolderExponents::conjugate_of(q));
            if (v < best.value) {
                best.theorem = Theorem::Holder;
                best.value = v;
                best.q_used = q;
            }
        }
    }
    for (double q : qs) {
        const double v = bound_power_mean(order, iv, d, q);
        if (v < best.value) {
            best.theorem = Theorem::PowerMean;
            best.value = v;
            best.q_used = q;
        }
    }
    return best;
}

/// |f^(n)| at the interval endpoints, from order-n jets.
inline EndpointDerivs endpoint_derivs(const Expression& f, Interval iv, RuleOrder order) {
    const auto n = static_cast<std::size_t>(order.n());
    const double at_a = std::abs(eval_jet(f, iv.a(), order.n()).derivs[n]);
    const double at_b = std::abs(eval_jet(f, iv.b(), order.n()).derivs[n]);
    return EndpointDerivs(at_a, at_b);
}

} // namespace midquad

#endif // MIDQUAD_BOUNDS_HPP

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

#ifndef MIDQUAD_QUADRATURE_HPP
#define MIDQUAD_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "midquad/errors.hpp"
#include "midquad/jet.hpp"
#include "midquad/kernel.hpp"

namespace midquad {

/// Integration interval with finite endpoints and a < b.
class Interval {
public:
    Interval(double a, double b) : a_(a), b_(b) {
        if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
            throw std::invalid_argument("interval requires finite endpoints with a < b");
    }

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double width() const noexcept { return b_ - a_; }
    double midpoint() const noexcept { return 0.5 * (a_ + b_); }

private:
    double a_;
    double b_;
};

/// The three measured pieces of the rule identity. The residual is always
/// recomputed from them, never stored.
struct QuadratureResult {
    double rule_value = 0.0;
    double remainder = 0.0;
    double reference = 0.0;

    double identity_residual() const { return std::abs(rule_value + remainder - reference); }
};

namespace detail {

// 10-point Gauss-Legendre nodes/weights on [-1, 1], ascending.
inline constexpr std::array<double, 10> kGauss10Node = {
    -0.97390652851717172008, -0.86506336668898451073, -0.67940956829902440623,
    -0.43339539412924719080, -0.14887433898163121089, 0.14887433898163121089,
    0.43339539412924719080,  0.67940956829902440623,  0.86506336668898451073,
    0.97390652851717172008,
};
inline constexpr std::array<double, 10> kGauss10Weight = {
    0.066671344308688137594, 0.14945134915058059315, 0.21908636251598204400,
    0.26926671930999635509,  0.29552422471475287017, 0.29552422471475287017,
    0.26926671930999635509,  0.21908636251598204400, 0.14945134915058059315,
    0.066671344308688137594,
};

inline constexpr int kMaxRefinementPanels = 1 << 16;
inline constexpr double kRemainderRelTol = 1e-11;

/// Composite fixed-order Gauss panels over [lo, hi], doubling the panel
/// count until two successive refinements agree. The 1e-15 * L1 term lets
/// identically-zero and heavily cancelling integrands converge at roundoff
/// level instead of chasing an unattainable relative target.
template <class F>
double refine_gauss_panels(F&& g, double lo, double hi, double rel_tol = kRemainderRelTol) {
    double prev = 0.0;
    bool have_prev = false;
    for (int panels = 1; panels <= kMaxRefinementPanels; panels *= 2) {
        const double h = (hi - lo) / panels;
        const double half = 0.5 * h;
        double sum = 0.0;
        double l1 = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double mid = lo + (p + 0.5) * h;
            for (int j = 0; j < 10; ++j) {
                const double w = kGauss10Weight[static_cast<std::size_t>(j)] * half;
                const double v = g(mid + half * kGauss10Node[static_cast<std::size_t>(j)]);
                sum += w * v;
                l1 += w * std::abs(v);
            }
        }
        if (have_prev && std::abs(sum - prev) <= rel_tol * std::abs(sum) + 1e-15 * l1)
            return sum;
        prev = sum;
        have_prev = true;
    }
    throw ConvergenceError("gauss panel refinement did not converge within 2^16 panels");
}

// Gauss-Kronrod 7-15 pair. Positive abscissae in decreasing order; odd
// indices (and the centre) form the embedded 7-point Gauss rule.
inline constexpr std::array<double, 7> kGk15Node = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760,
};
inline constexpr std::array<double, 8> kGk15WeightK = {
    0.022935322010529224964, 0.063092092629978553291, 0.10479001032225018384,
    0.14065325971552591875,  0.16900472663926790283,  0.19035057806478540991,
    0.20443294007529889241,  0.20948214108472782801,
};
inline constexpr std::array<double, 4> kGk15WeightG = {
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776,
};

struct GkEstimate {
    double value = 0.0;
    double error = 0.0;
    double resabs = 0.0; // integral of |f|, same rule
};

template <class F>
GkEstimate gk15(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double resg = kGk15WeightG[3] * fc;
    double resk = kGk15WeightK[7] * fc;
    double resabs = kGk15WeightK[7] * std::abs(fc);

    std::array<double, 7> lo_vals{};
    std::array<double, 7> hi_vals{};
    for (int j = 0; j < 7; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        const double dx = half * kGk15Node[ju];
        lo_vals[ju] = f(center - dx);
        hi_vals[ju] = f(center + dx);
        const double fsum = lo_vals[ju] + hi_vals[ju];
        resk += kGk15WeightK[ju] * fsum;
        resabs += kGk15WeightK[ju] * (std::abs(lo_vals[ju]) + std::abs(hi_vals[ju]));
        if (j % 2 == 1) resg += kGk15WeightG[static_cast<std::size_t>((j - 1) / 2)] * fsum;
    }

    const double reskh = 0.5 * resk;
    double resasc = kGk15WeightK[7] * std::abs(fc - reskh);
    for (std::size_t j = 0; j < 7; ++j)
        resasc += kGk15WeightK[j] * (std::abs(lo_vals[j] - reskh) + std::abs(hi_vals[j] - reskh));

    GkEstimate est;
    est.value = resk * half;
    est.resabs = resabs * std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    // Round-off floor: the estimate cannot honestly fall below ~50 eps of
    // the absolute integral.
    err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * est.resabs);
    est.error = err;
    return est;
}

inline constexpr int kMaxBisectionDepth = 60;

template <class F>
double adaptive_bisect(F&& f, double a, double b, const GkEstimate& est, double abs_budget,
                       int depth) {
    if (est.error <= abs_budget) return est.value;
    if (depth >= kMaxBisectionDepth)
        throw ConvergenceError("adaptive quadrature exceeded subdivision depth 60");
    const double mid = 0.5 * (a + b);
    const GkEstimate left = gk15(f, a, mid);
    const GkEstimate right = gk15(f, mid, b);
    return adaptive_bisect(f, a, mid, left, 0.5 * abs_budget, depth + 1) +
           adaptive_bisect(f, mid, b, right, 0.5 * abs_budget, depth + 1);
}

} // namespace detail

/// The corrected midpoint rule of order n:
///   sum over k = 0 .. n-1 of
///     (1 + (-1)^k) / (2^(k+1) (k+1)!) * (b-a)^(k+1) * f^(k)((a+b)/2).
/// Coefficients follow the literal formula; odd-k terms are exactly zero.
inline double corrected_midpoint(const Expression& f, Interval iv, RuleOrder order) {
    const int n = order.n();
    const Jet jet = eval_jet(f, iv.midpoint(), n - 1);
    double sum = 0.0;
    double width_pow = 1.0;
    for (int k = 0; k < n; ++k) {
        width_pow *= iv.width(); // (b-a)^(k+1)
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        const double coeff =
            (1.0 + sign) / (std::ldexp(1.0, k + 1) * kFactorial[static_cast<std::size_t>(k) + 1]);
        sum += coeff * width_pow * jet.derivs[static_cast<std::size_t>(k)];
    }
    return sum;
}

/// Exact remainder of the order-n rule:
///   (b-a)^(n+1) * integral over [0,1] of M_n(t) f^(n)(t a + (1-t) b) dt.
/// The kernel is non-smooth at t = 1/2, so the integral runs as two smooth
/// pieces split there.
inline double remainder_integral(const Expression& f, Interval iv, RuleOrder order) {
    const int n = order.n();
    const auto integrand = [&](double t) {
        const double x = t * iv.a() + (1.0 - t) * iv.b();
        return kernel_value(order, t) * eval_jet(f, x, n).derivs[static_cast<std::size_t>(n)];
    };
    const double left = detail::refine_gauss_panels(integrand, 0.0, 0.5);
    const double right = detail::refine_gauss_panels(integrand, 0.5, 1.0);
    return detail::ipow(iv.width(), n + 1) * (left + right);
}

/// Trusted reference value of the integral of f over [a, b]: adaptive
/// bisection with an embedded Gauss-Kronrod 7-15 error estimate. The error
/// budget is relative to the scale of the first whole-interval estimate.
inline double reference_integral(const Expression& f, Interval iv, double rel_tol = 1e-12) {
    if (!(rel_tol >= 1e-13))
        throw std::invalid_argument("reference tolerance must be >= 1e-13");
    const auto func = [&](double x) { return eval(f, x); };
    const detail::GkEstimate first = detail::gk15(func, iv.a(), iv.b());
    const double scale = std::max(std::abs(first.value), first.resabs);
    const double budget = scale > 0.0 ? rel_tol * scale : rel_tol;
    return detail::adaptive_bisect(func, iv.a(), iv.b(), first, budget, 0);
}

/// Evaluates all three pieces of the rule identity for one (f, [a,b], n).
inline QuadratureResult check_identity(const Expression& f, Interval iv, RuleOrder order,
                                       double reference_tol = 1e-12) {
    QuadratureResult r;
    r.rule_value = corrected_midpoint(f, iv, order);
    r.remainder = remainder_integral(f, iv, order);
    r.reference = reference_integral(f, iv, reference_tol);
    return r;
}

} // namespace midquad

#endif // MIDQUAD_QUADRATURE_HPP

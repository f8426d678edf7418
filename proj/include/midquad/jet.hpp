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

#ifndef MIDQUAD_JET_HPP
#define MIDQUAD_JET_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "midquad/errors.hpp"
#include "midquad/expr.hpp"

namespace midquad {

/// Derivative orders above this lose too much precision to the factorial
/// rescaling of Taylor coefficients in binary64.
inline constexpr int kMaxJetOrder = 12;

/// 0! .. 13!, all exactly representable in binary64.
inline constexpr std::array<double, 14> kFactorial = {
    1.0,       1.0,        2.0,         6.0,          24.0,
    120.0,     720.0,      5040.0,      40320.0,      362880.0,
    3628800.0, 39916800.0, 479001600.0, 6227020800.0,
};

inline double factorial(int k) {
    if (k < 0 || k >= static_cast<int>(kFactorial.size()))
        throw std::invalid_argument("factorial argument must be in [0, 13]");
    return kFactorial[static_cast<std::size_t>(k)];
}

/// Derivative values of a function at a point: derivs[k] = f^(k)(point).
/// These are derivatives, not Taylor coefficients; the k! rescaling has
/// already been applied.
struct Jet {
    double point = 0.0;
    int order = 0;
    std::vector<double> derivs; // size order + 1
};

namespace detail {

// Truncated Taylor series c_0..c_N about the evaluation point. Every
// recurrence below computes c_k from prefixes c_0..c_k of its operands, so
// a series truncated at a higher order agrees bitwise with a shorter one on
// the shared prefix.
using Series = std::vector<double>;

inline Series constant_series(double c, std::size_t len) {
    Series s(len, 0.0);
    s[0] = c;
    return s;
}

inline Series mul_series(const Series& u, const Series& v) {
    const std::size_t len = u.size();
    Series w(len, 0.0);
    for (std::size_t k = 0; k < len; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= k; ++j) acc += u[j] * v[k - j];
        w[k] = acc;
    }
    return w;
}

inline Series div_series(const Series& u, const Series& v) {
    if (v[0] == 0.0) throw DomainError("division by zero");
    const std::size_t len = u.size();
    Series q(len, 0.0);
    for (std::size_t k = 0; k < len; ++k) {
        double acc = u[k];
        for (std::size_t j = 0; j < k; ++j) acc -= q[j] * v[k - j];
        q[k] = acc / v[0];
    }
    return q;
}

inline Series exp_series(const Series& u) {
    const std::size_t len = u.size();
    Series g(len, 0.0);
    g[0] = std::exp(u[0]);
    for (std::size_t k = 1; k < len; ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * u[j] * g[k - j];
        g[k] = acc / static_cast<double>(k);
    }
    return g;
}

inline Series ln_series(const Series& u) {
    if (!(u[0] > 0.0)) throw DomainError("ln of non-positive value");
    const std::size_t len = u.size();
    Series l(len, 0.0);
    l[0] = std::log(u[0]);
    for (std::size_t k = 1; k < len; ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j < k; ++j) acc += static_cast<double>(j) * l[j] * u[k - j];
        l[k] = (u[k] - acc / static_cast<double>(k)) / u[0];
    }
    return l;
}

inline Series sqrt_series(const Series& u) {
    if (!(u[0] > 0.0)) throw DomainError("sqrt of non-positive value");
    const std::size_t len = u.size();
    Series s(len, 0.0);
    s[0] = std::sqrt(u[0]);
    for (std::size_t k = 1; k < len; ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j < k; ++j) acc += s[j] * s[k - j];
        s[k] = (u[k] - acc) / (2.0 * s[0]);
    }
    return s;
}

// sin and cos are coupled through s' = u'·cos(u), c' = -u'·sin(u).
inline void sincos_series(const Series& u, Series& s, Series& c) {
    const std::size_t len = u.size();
    s.assign(len, 0.0);
    c.assign(len, 0.0);
    s[0] = std::sin(u[0]);
    c[0] = std::cos(u[0]);
    for (std::size_t k = 1; k < len; ++k) {
        double sacc = 0.0;
        double cacc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            const double ju = static_cast<double>(j) * u[j];
            sacc += ju * c[k - j];
            cacc += ju * s[k - j];
        }
        s[k] = sacc / static_cast<double>(k);
        c[k] = -cacc / static_cast<double>(k);
    }
}

inline Series scale_series(Series u, double c) {
    for (double& v : u) v *= c;
    return u;
}

// Integer powers go through repeated Taylor multiplication (square and
// multiply), which is valid for bases of any sign. Negative exponents take
// the reciprocal at the end.
inline Series pow_int_series(const Series& base, long long m) {
    const std::size_t len = base.size();
    if (m == 0) return constant_series(1.0, len);
    const bool reciprocal = m < 0;
    unsigned long long e =
        reciprocal ? 0ULL - static_cast<unsigned long long>(m) : static_cast<unsigned long long>(m);
    Series acc = constant_series(1.0, len);
    Series sq = base;
    while (true) {
        if (e & 1ULL) acc = mul_series(acc, sq);
        e >>= 1;
        if (e == 0) break;
        sq = mul_series(sq, sq);
    }
    if (reciprocal) acc = div_series(constant_series(1.0, len), acc);
    return acc;
}

inline Series eval_series(const Node& node, double x, std::size_t len) {
    switch (node.kind) {
    case NodeKind::Constant:
        return constant_series(node.value, len);
    case NodeKind::Variable: {
        Series s(len, 0.0);
        s[0] = x;
        if (len > 1) s[1] = 1.0;
        return s;
    }
    case NodeKind::Neg:
        return scale_series(eval_series(*node.lhs, x, len), -1.0);
    case NodeKind::Exp:
        return exp_series(eval_series(*node.lhs, x, len));
    case NodeKind::Ln:
        return ln_series(eval_series(*node.lhs, x, len));
    case NodeKind::Sqrt:
        return sqrt_series(eval_series(*node.lhs, x, len));
    case NodeKind::Sin:
    case NodeKind::Cos: {
        Series u = eval_series(*node.lhs, x, len);
        Series s, c;
        sincos_series(u, s, c);
        return node.kind == NodeKind::Sin ? s : c;
    }
    case NodeKind::Add: {
        Series u = eval_series(*node.lhs, x, len);
        const Series v = eval_series(*node.rhs, x, len);
        for (std::size_t k = 0; k < len; ++k) u[k] += v[k];
        return u;
    }
    case NodeKind::Sub: {
        Series u = eval_series(*node.lhs, x, len);
        const Series v = eval_series(*node.rhs, x, len);
        for (std::size_t k = 0; k < len; ++k) u[k] -= v[k];
        return u;
    }
    case NodeKind::Mul:
        return mul_series(eval_series(*node.lhs, x, len), eval_series(*node.rhs, x, len));
    case NodeKind::Div:
        return div_series(eval_series(*node.lhs, x, len), eval_series(*node.rhs, x, len));
    case NodeKind::Pow: {
        Series base = eval_series(*node.lhs, x, len);
        if (node.integer_exponent) return pow_int_series(base, node.exponent_int);
        if (!(base[0] > 0.0))
            throw DomainError("fractional power of non-positive base");
        return exp_series(scale_series(ln_series(base), node.exponent));
    }
    }
    throw std::logic_error("unreachable node kind");
}

} // namespace detail

/// Evaluates (f(x), f'(x), ..., f^(order)(x)) by propagating truncated
/// Taylor series through the AST and rescaling coefficient k by k!.
inline Jet eval_jet(const Expression& f, double x, int order) {
    if (order < 0 || order > kMaxJetOrder)
        throw std::invalid_argument("jet order must be in [0, 12]");
    if (!std::isfinite(x)) throw std::invalid_argument("jet point must be finite");
    const detail::Series coeffs =
        detail::eval_series(f.root(), x, static_cast<std::size_t>(order) + 1);
    Jet jet;
    jet.point = x;
    jet.order = order;
    jet.derivs.resize(static_cast<std::size_t>(order) + 1);
    for (int k = 0; k <= order; ++k) {
        const double d = coeffs[static_cast<std::size_t>(k)] * kFactorial[static_cast<std::size_t>(k)];
        if (!std::isfinite(d)) throw DomainError("non-finite derivative in jet");
        jet.derivs[static_cast<std::size_t>(k)] = d;
    }
    return jet;
}

/// Plain function value, f(x).
inline double eval(const Expression& f, double x) {
    return eval_jet(f, x, 0).derivs[0];
}

} // namespace midquad

#endif // MIDQUAD_JET_HPP

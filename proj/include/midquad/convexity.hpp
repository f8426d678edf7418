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

#ifndef MIDQUAD_CONVEXITY_HPP
#define MIDQUAD_CONVEXITY_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "midquad/bounds.hpp"
#include "midquad/quadrature.hpp"

namespace midquad {

// Empirical convexity certification of the theorem hypotheses. A grid scan
// of midpoint-convexity defects is a certificate, not a proof: downstream
// reporting labels domination "guaranteed" only for certified rows and
// "observed" otherwise.

enum class ConvexityTarget { AbsDeriv, AbsDerivPowQ };

struct ConvexityCertificate {
    ConvexityTarget target = ConvexityTarget::AbsDeriv;
    std::optional<double> q;
    int grid_points = 0;
    double max_violation = 0.0;
    bool certified = false;
};

/// Power-of-two-plus-one default keeps every pair midpoint on the grid.
inline constexpr int kDefaultConvexityGrid = 129;
inline constexpr double kDefaultConvexityTol = 1e-9;

namespace detail {

struct GridScan {
    double max_violation = 0.0;
    bool certified = false;
};

/// Maximum midpoint-convexity defect g((x_i+x_j)/2) - (g(x_i)+g(x_j))/2
/// over all grid pairs whose midpoint lands on the grid. Degenerate pairs
/// (i = j) contribute an exact zero, so the maximum is never negative.
inline GridScan midpoint_defect_scan(const std::vector<double>& vals, double tol) {
    const std::size_t m = vals.size();
    double max_abs = 0.0;
    for (double v : vals) max_abs = std::max(max_abs, std::abs(v));
    double max_defect = 0.0;
    for (std::size_t i = 0; i + 2 < m; ++i) {
        for (std::size_t j = i + 2; j < m; j += 2) {
            const double defect = vals[(i + j) / 2] - 0.5 * (vals[i] + vals[j]);
            if (defect > max_defect) max_defect = defect;
        }
    }
    return {max_defect, max_defect <= tol * (1.0 + max_abs)};
}

/// Samples a callable on the uniform m-point grid over [a, b] and runs the
/// defect scan. Endpoints are pinned to a and b exactly.
template <class G>
GridScan grid_convexity(G&& g, Interval iv, int m, double tol) {
    if (m < 3) throw std::invalid_argument("convexity grid needs at least 3 points");
    std::vector<double> vals(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double x;
        if (i == 0) x = iv.a();
        else if (i == m - 1) x = iv.b();
        else x = iv.a() + iv.width() * (static_cast<double>(i) / (m - 1));
        vals[static_cast<std::size_t>(i)] = g(x);
    }
    return midpoint_defect_scan(vals, tol);
}

} // namespace detail

/// Certifies convexity of |f^(n)| (q empty) or |f^(n)|^q (q >= 1) on [a, b]
/// by grid midpoint-convexity testing.
inline ConvexityCertificate certify(const Expression& f, Interval iv, RuleOrder order,
                                    std::optional<double> q, int m = kDefaultConvexityGrid,
                                    double tol = kDefaultConvexityTol) {
    if (q && (!(*q >= 1.0) || !std::isfinite(*q)))
        throw std::invalid_argument("convexity exponent requires q >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("convexity tolerance must be positive");
    const int n = order.n();
    const auto target_fn = [&](double x) {
        const double d = std::abs(eval_jet(f, x, n).derivs[static_cast<std::size_t>(n)]);
        return q ? std::pow(d, *q) : d;
    };
    const detail::GridScan scan = detail::grid_convexity(target_fn, iv, m, tol);
    ConvexityCertificate cert;
    cert.target = q ? ConvexityTarget::AbsDerivPowQ : ConvexityTarget::AbsDeriv;
    cert.q = q;
    cert.grid_points = m;
    cert.max_violation = scan.max_violation;
    cert.certified = scan.certified;
    return cert;
}

} // namespace midquad

#endif // MIDQUAD_CONVEXITY_HPP

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>

#include "midquad/convexity.hpp"

using midquad::certify;
using midquad::ConvexityCertificate;
using midquad::ConvexityTarget;
using midquad::DomainError;
using midquad::Interval;
using midquad::parse;
using midquad::RuleOrder;

TEST_CASE("certify: |f''| = 12 x^2 is convex on [0, 2]") {
    const auto cert =
        certify(parse("x^4"), Interval(0.0, 2.0), RuleOrder(2), std::nullopt, 129);
    CHECK(cert.certified);
    CHECK(cert.target == ConvexityTarget::AbsDeriv);
    CHECK_FALSE(cert.q.has_value());
    CHECK(cert.grid_points == 129);
}

TEST_CASE("certify: |f''| = sin x is concave on (0, pi), so certification fails") {
    const auto cert =
        certify(parse("sin(x)"), Interval(0.0, 3.14159265), RuleOrder(2), std::nullopt, 129);
    CHECK_FALSE(cert.certified);
    CHECK(cert.max_violation > 0.0);
}

TEST_CASE("certify: |f'''|^2 = e^(2x) is convex") {
    const auto cert = certify(parse("exp(x)"), Interval(0.0, 1.0), RuleOrder(3), 2.0, 65);
    CHECK(cert.certified);
    CHECK(cert.target == ConvexityTarget::AbsDerivPowQ);
    CHECK(cert.q == 2.0);
    CHECK(cert.grid_points == 65);
}

TEST_CASE("certify: affine target has exact midpoint equality") {
    // |f'| of x^2 on [0,1] is 2x: every on-grid defect is exactly zero.
    const auto cert = certify(parse("x^2"), Interval(0.0, 1.0), RuleOrder(1), std::nullopt);
    CHECK(cert.certified);
    CHECK(cert.max_violation <= 1e-12);
}

TEST_CASE("certify: max violation is never negative") {
    for (const char* text : {"exp(x)", "x^4", "sin(x)"}) {
        const auto cert =
            certify(parse(text), Interval(0.1, 1.5), RuleOrder(1), std::nullopt, 65);
        CAPTURE(text);
        CHECK(cert.max_violation >= 0.0);
    }
}

TEST_CASE("certify: certification is monotone in the tolerance") {
    const Interval iv(0.2, 2.9);
    for (const char* text : {"exp(x)", "sin(x)", "x^4"}) {
        const auto tight = certify(parse(text), iv, RuleOrder(2), std::nullopt, 65, 1e-12);
        const auto loose = certify(parse(text), iv, RuleOrder(2), std::nullopt, 65, 1e-6);
        CAPTURE(text);
        if (tight.certified) CHECK(loose.certified);
    }
}

TEST_CASE("certify: strict concavity is resolved by every grid of 33+ points") {
    for (int m : {33, 65, 129, 257}) {
        const auto cert =
            certify(parse("sin(x)"), Interval(0.2, 2.9), RuleOrder(2), std::nullopt, m);
        CAPTURE(m);
        CHECK_FALSE(cert.certified);
    }
}

TEST_CASE("certify: validation and error propagation") {
    const auto f = parse("x^2");
    CHECK_THROWS_AS(certify(f, Interval(0.0, 1.0), RuleOrder(1), std::nullopt, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(certify(f, Interval(0.0, 1.0), RuleOrder(1), 0.5), std::invalid_argument);
    CHECK_THROWS_AS(certify(f, Interval(0.0, 1.0), RuleOrder(1), std::nullopt, 129, 0.0),
                    std::invalid_argument);
    // ln is undefined on part of the grid
    CHECK_THROWS_AS(certify(parse("ln(x)"), Interval(-1.0, 1.0), RuleOrder(1), std::nullopt),
                    DomainError);
}

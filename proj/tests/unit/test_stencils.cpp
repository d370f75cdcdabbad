#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "ccfd/errors.hpp"
#include "ccfd/stencils.hpp"
#include "oracles.hpp"

using namespace ccfd;
using ccfd::testing::rel_diff;

namespace {

MomentSolution match(const MomentStencil& s, int first, const std::vector<double>& coords)
{
    return taylor_match(s, NodePositions{first, coords});
}

/// Truncation error of the interior row applied to sin around x0.
double interior_truncation(double h, double x0)
{
    const auto r = compact_interior_coeffs(h, h);
    auto f = [](double x) { return std::sin(x); };
    auto d2 = [](double x) { return -std::sin(x); };
    return r.alpha * d2(x0 - h) + d2(x0) + r.beta * d2(x0 + h) -
           (r.a * f(x0 - h) + r.b * f(x0) + r.c * f(x0 + h));
}

double boundary_truncation(double h, double x0, BoundaryClosure closure)
{
    const std::array<double, 3> dx{h, h, h};
    const auto row = compact_boundary_coeffs(dx, Side::left, closure);
    double lhs = row.boundary_weight * -std::sin(x0) + row.adjacent_weight * -std::sin(x0 + h);
    double rhs = 0.0;
    for (std::size_t k = 0; k < row.explicit_count; ++k) rhs += row.weights[k] * std::sin(x0 + k * h);
    return lhs - rhs;
}

}  // namespace

TEST(ClassicalCoeffs, Uniform)
{
    const auto c = classical_coeffs(0.1, 0.1);
    EXPECT_NEAR(c.a, 100.0, 1e-12);
    EXPECT_NEAR(c.b, -200.0, 1e-12);
    EXPECT_NEAR(c.c, 100.0, 1e-12);
}

TEST(ClassicalCoeffs, NonUniform)
{
    const auto c = classical_coeffs(0.1, 0.2);
    EXPECT_NEAR(c.a, 200.0 / 3.0, 1e-12);
    EXPECT_NEAR(c.b, -100.0, 1e-12);
    EXPECT_NEAR(c.c, 100.0 / 3.0, 1e-12);
}

TEST(ClassicalCoeffs, RejectsNonPositiveSpacing)
{
    EXPECT_THROW(classical_coeffs(0.0, 0.1), ValidationError);
    EXPECT_THROW(classical_coeffs(0.1, -0.1), ValidationError);
    EXPECT_THROW(compact_interior_coeffs(0.1, 0.0), ValidationError);
    EXPECT_THROW(compact_boundary_coeffs(std::array<double, 2>{0.1, -1.0}, Side::left), ValidationError);
}

TEST(ClassicalCoeffsProperty, MomentInvariants)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(1e-3, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double l = u(rng), r = u(rng);
        const auto c = classical_coeffs(l, r);
        const double scale = std::abs(c.b);
        EXPECT_LE(std::abs(c.a + c.b + c.c) / scale, 1e-13);
        EXPECT_LE(std::abs(-c.a * l + c.c * r) / (scale * std::max(l, r)), 1e-13);
        EXPECT_NEAR(c.a * l * l + c.c * r * r, 2.0, 1e-12);
    }
}

TEST(ClassicalCoeffsProperty, MatchesTaylorOracle)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(1e-3, 1.0);
    const MomentStencil stencil{{0}, {-1, 0, 1}, 0};
    for (int trial = 0; trial < 1000; ++trial) {
        const double l = u(rng), r = u(rng);
        const auto c = classical_coeffs(l, r);
        const auto sol = match(stencil, -1, {-l, 0.0, r});
        EXPECT_LE(rel_diff(c.a, sol.explicit_weights[0]), 1e-10);
        EXPECT_LE(rel_diff(c.b, sol.explicit_weights[1]), 1e-10);
        EXPECT_LE(rel_diff(c.c, sol.explicit_weights[2]), 1e-10);
    }
}

TEST(CompactInterior, UniformIsTheStandardPadeRow)
{
    for (double h : {1.0, 0.1, 1e-3}) {
        const auto r = compact_interior_coeffs(h, h);
        EXPECT_NEAR(r.alpha, 0.1, 1e-13);
        EXPECT_NEAR(r.beta, 0.1, 1e-13);
        EXPECT_LE(rel_diff(r.a, 6.0 / (5.0 * h * h)), 1e-12);
        EXPECT_LE(rel_diff(r.c, 6.0 / (5.0 * h * h)), 1e-12);
        EXPECT_LE(rel_diff(r.b, -12.0 / (5.0 * h * h)), 1e-12);
    }
    const auto r = compact_interior_coeffs(0.1, 0.1);
    EXPECT_NEAR(r.a, 120.0, 1e-10);
    EXPECT_NEAR(r.b, -240.0, 1e-10);
    EXPECT_NEAR(r.c, 120.0, 1e-10);
}

TEST(CompactInterior, NonUniformGolden)
{
    const auto r = compact_interior_coeffs(0.1, 0.2);
    EXPECT_NEAR(r.alpha, -2.0 / 33.0, 1e-14);
    EXPECT_NEAR(r.beta, 5.0 / 33.0, 1e-14);
    EXPECT_LE(rel_diff(r.a, 800.0 / 11.0), 1e-12);
    EXPECT_LE(rel_diff(r.b, -1200.0 / 11.0), 1e-12);
    EXPECT_LE(rel_diff(r.c, 400.0 / 11.0), 1e-12);
}

TEST(CompactInteriorProperty, MatchesClosedFormAndMoments)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(1e-3, 1.0);
    const MomentStencil stencil{{-1, 0, 1}, {-1, 0, 1}, 0};
    for (int trial = 0; trial < 1000; ++trial) {
        const double l = u(rng), r = u(rng);
        const auto got = compact_interior_coeffs(l, r);
        const auto want = ccfd::testing::compact_interior_closed_form(l, r);
        EXPECT_NEAR(got.alpha, want.alpha, 1e-11);
        EXPECT_NEAR(got.beta, want.beta, 1e-11);
        EXPECT_LE(rel_diff(got.a, want.a), 1e-10);
        EXPECT_LE(rel_diff(got.b, want.b), 1e-10);
        EXPECT_LE(rel_diff(got.c, want.c), 1e-10);

        const std::vector<double> x{-l, 0.0, r};
        const auto sol = taylor_match(stencil, NodePositions{-1, x});
        for (int m = 0; m <= 4; ++m) {
            EXPECT_LE(moment_residual(stencil, sol, NodePositions{-1, x}, m), 1e-12);
        }
    }
}

TEST(CompactInteriorProperty, MirrorSymmetry)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(1e-2, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double l = u(rng), r = u(rng);
        const auto p = compact_interior_coeffs(l, r);
        const auto q = compact_interior_coeffs(r, l);
        EXPECT_NEAR(p.alpha, q.beta, 1e-12);
        EXPECT_NEAR(p.beta, q.alpha, 1e-12);
        EXPECT_LE(rel_diff(p.a, q.c), 1e-11);
        EXPECT_LE(rel_diff(p.c, q.a), 1e-11);
        EXPECT_LE(rel_diff(p.b, q.b), 1e-11);
    }
}

TEST(CompactInteriorProperty, FourthOrderTruncation)
{
    for (double x0 : {0.3, 1.0}) {
        const double ratio = interior_truncation(0.1, x0) / interior_truncation(0.05, x0);
        EXPECT_NEAR(ratio, 16.0, 16.0 * 0.15) << "x0 = " << x0;
    }
}

TEST(CompactBoundary, ThreePointNonUniformGolden)
{
    const auto row = compact_boundary_coeffs(std::array<double, 2>{0.1, 0.2}, Side::left);
    EXPECT_EQ(row.explicit_count, 3u);
    EXPECT_DOUBLE_EQ(row.adjacent_weight, 1.0);
    EXPECT_NEAR(row.boundary_weight, -0.25, 1e-13);
    EXPECT_NEAR(row.weights[0], 50.0, 1e-10);
    EXPECT_NEAR(row.weights[1], -75.0, 1e-10);
    EXPECT_NEAR(row.weights[2], 25.0, 1e-10);
    EXPECT_EQ(row.weights[3], 0.0);
}

TEST(CompactBoundary, ThreePointUniformReducesToClassical)
{
    const double h = 0.1;
    const auto row = compact_boundary_coeffs(std::array<double, 2>{h, h}, Side::left);
    EXPECT_NEAR(row.boundary_weight, 0.0, 1e-14);
    EXPECT_NEAR(row.weights[0], 1.0 / (h * h), 1e-10);
    EXPECT_NEAR(row.weights[1], -2.0 / (h * h), 1e-10);
    EXPECT_NEAR(row.weights[2], 1.0 / (h * h), 1e-10);
}

TEST(CompactBoundary, FourPointUniformGolden)
{
    const double h = 0.1;
    const auto row = compact_boundary_coeffs(std::array<double, 3>{h, h, h}, Side::left,
                                             BoundaryClosure::four_point);
    EXPECT_EQ(row.explicit_count, 4u);
    EXPECT_DOUBLE_EQ(row.boundary_weight, 1.0);
    EXPECT_NEAR(row.adjacent_weight, 11.0, 1e-12);
    const std::array<double, 4> want{13.0, -27.0, 15.0, -1.0};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(row.weights[k] * h * h, want[k], 1e-11);
}

TEST(CompactBoundaryProperty, MatchesClosedForm)
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(1e-3, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double d1 = u(rng), d2 = u(rng);
        const auto got = compact_boundary_coeffs(std::array<double, 2>{d1, d2}, Side::left);
        const auto want = ccfd::testing::three_point_closed_form(d1, d2);
        EXPECT_NEAR(got.boundary_weight, want.boundary_weight, 1e-11);
        for (std::size_t k = 0; k < 3; ++k) EXPECT_LE(rel_diff(got.weights[k], want.weights[k]), 1e-10);
    }
}

TEST(CompactBoundaryProperty, MomentResiduals)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(1e-3, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const double d1 = u(rng), d2 = u(rng), d3 = u(rng);
        // three-point closure, moments 0..3
        {
            const MomentStencil s{{0, 1}, {0, 1, 2}, 1};
            const std::vector<double> x{0.0, d1, d1 + d2};
            const auto sol = taylor_match(s, NodePositions{0, x});
            for (int m = 0; m <= 3; ++m) EXPECT_LE(moment_residual(s, sol, NodePositions{0, x}, m), 1e-12);
        }
        // four-point closure, moments 0..4
        {
            const MomentStencil s{{0, 1}, {0, 1, 2, 3}, 0};
            const std::vector<double> x{0.0, d1, d1 + d2, d1 + d2 + d3};
            const auto sol = taylor_match(s, NodePositions{0, x});
            for (int m = 0; m <= 4; ++m) EXPECT_LE(moment_residual(s, sol, NodePositions{0, x}, m), 1e-12);
        }
    }
}

TEST(CompactBoundaryProperty, RightSideMirrorsLeft)
{
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(1e-2, 1.0);
    for (auto closure : {BoundaryClosure::three_point, BoundaryClosure::four_point}) {
        for (int trial = 0; trial < 100; ++trial) {
            const std::array<double, 3> dx{u(rng), u(rng), u(rng)};
            const auto l = compact_boundary_coeffs(dx, Side::left, closure);
            const auto r = compact_boundary_coeffs(dx, Side::right, closure);
            EXPECT_NEAR(l.boundary_weight, r.boundary_weight, 1e-12);
            EXPECT_NEAR(l.adjacent_weight, r.adjacent_weight, 1e-12);
            for (std::size_t k = 0; k < 4; ++k) {
                EXPECT_NEAR(l.weights[k], r.weights[k], 1e-9 * std::max(1.0, std::abs(l.weights[k])));
            }
        }
    }
    const auto l = compact_boundary_coeffs(std::array<double, 2>{0.1, 0.1}, Side::left);
    const auto r = compact_boundary_coeffs(std::array<double, 2>{0.1, 0.1}, Side::right);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(l.weights[k], r.weights[k], 1e-10);
}

TEST(CompactBoundaryProperty, TruncationOrder)
{
    // The three-point closure matches moments through degree 3 and the
    // four-point one through degree 4.
    const double x0 = 0.4;
    const double three = boundary_truncation(0.1, x0, BoundaryClosure::three_point) /
                         boundary_truncation(0.05, x0, BoundaryClosure::three_point);
    const double four = boundary_truncation(0.1, x0, BoundaryClosure::four_point) /
                        boundary_truncation(0.05, x0, BoundaryClosure::four_point);
    EXPECT_GE(std::abs(three), 4.0 * 0.85);
    EXPECT_GE(std::abs(four), 8.0 * 0.85);
}

TEST(TaylorMatch, ReproducesClassicalUniform)
{
    const double h = 0.25;
    const auto sol = match(MomentStencil{{0}, {-1, 0, 1}, 0}, -1, {-h, 0.0, h});
    EXPECT_NEAR(sol.explicit_weights[0], 16.0, 1e-12);
    EXPECT_NEAR(sol.explicit_weights[1], -32.0, 1e-12);
    EXPECT_NEAR(sol.explicit_weights[2], 16.0, 1e-12);
    EXPECT_LT(sol.max_relative_residual, 1e-14);
}

TEST(TaylorMatch, InteriorSelfConsistency)
{
    const auto sol = match(MomentStencil{{-1, 0, 1}, {-1, 0, 1}, 0}, -1, {-0.1, 0.0, 0.2});
    const auto row = compact_interior_coeffs(0.1, 0.2);
    EXPECT_DOUBLE_EQ(sol.implicit_weights[1], 1.0);
    EXPECT_NEAR(sol.implicit_weights[0], row.alpha, 1e-15);
    EXPECT_NEAR(sol.implicit_weights[2], row.beta, 1e-15);
    EXPECT_NEAR(sol.explicit_weights[0], row.a, 1e-12);
    EXPECT_NEAR(sol.explicit_weights[1], row.b, 1e-12);
    EXPECT_NEAR(sol.explicit_weights[2], row.c, 1e-12);
}

TEST(TaylorMatch, BoundaryNormalisedAtBoundaryNode)
{
    // Normalising the three-point closure on the boundary derivative gives
    // the same row divided by its boundary weight, which vanishes on
    // uniform spacing.
    const auto sol = match(MomentStencil{{0, 1}, {0, 1, 2}, 0}, 0, {0.0, 0.1, 0.3});
    const auto row = compact_boundary_coeffs(std::array<double, 2>{0.1, 0.2}, Side::left);
    const double w0 = row.boundary_weight;
    EXPECT_NEAR(sol.implicit_weights[1], 1.0 / w0, 1e-12);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_LE(rel_diff(sol.explicit_weights[k], row.weights[k] / w0), 1e-11);
    }
}

TEST(TaylorMatch, SingularUniformThreePointBoundary)
{
    try {
        match(MomentStencil{{0, 1}, {0, 1, 2}, 0}, 0, {0.0, 0.1, 0.2});
        FAIL() << "expected DegenerateStencilError";
    } catch (const DegenerateStencilError& e) {
        EXPECT_GT(e.condition_estimate(), 1e12);
    }
}

TEST(TaylorMatch, RejectsBadStencils)
{
    EXPECT_THROW(match(MomentStencil{{0}, {-1, 0, 1}, 1}, -1, {-1.0, 0.0, 1.0}), ValidationError);
    EXPECT_THROW(match(MomentStencil{{0}, {-1, 0, 2}, 0}, -1, {-1.0, 0.0, 1.0}), ValidationError);
    EXPECT_THROW(match(MomentStencil{{0}, {-1, 0, 1}, 0}, -1, {0.0, 0.0, 0.0}), ValidationError);
    EXPECT_THROW(match(MomentStencil{{0}, {}, 0}, 0, {0.0}), ValidationError);
}

TEST(AxisStencils, CacheMatchesPointwiseCoefficients)
{
    std::mt19937_64 rng(23);
    const auto axis = ccfd::testing::random_axis(rng, 12);
    for (auto closure : {BoundaryClosure::three_point, BoundaryClosure::four_point}) {
        const auto s = build_axis_stencils(axis, closure);
        ASSERT_EQ(s.size(), 12u);
        ASSERT_TRUE(s.has_compact);
        EXPECT_EQ(s.closure, closure);
        const auto dx = axis.spacings();
        for (std::size_t i = 1; i + 1 < 12; ++i) {
            const auto c = classical_coeffs(dx[i - 1], dx[i]);
            const auto r = compact_interior_coeffs(dx[i - 1], dx[i]);
            EXPECT_EQ(s.classical[i].a, c.a);
            EXPECT_EQ(s.classical[i].c, c.c);
            EXPECT_EQ(s.interior[i].alpha, r.alpha);
            EXPECT_EQ(s.interior[i].b, r.b);
        }
        const auto right = compact_boundary_coeffs(std::array<double, 3>{dx[10], dx[9], dx[8]},
                                                   Side::right, closure);
        EXPECT_EQ(s.right.boundary_weight, right.boundary_weight);
        EXPECT_EQ(s.right.weights, right.weights);
    }
}

TEST(AxisStencils, ThreeNodesHaveNoCompactRows)
{
    const auto s = build_axis_stencils(Axis({0.0, 0.4, 1.0}));
    EXPECT_FALSE(s.has_compact);
    EXPECT_NEAR(s.classical[1].a, 2.0 / (0.4 * 1.0), 1e-14);
}

TEST(BoundaryClosureNames, RoundTrip)
{
    for (auto c : {BoundaryClosure::three_point, BoundaryClosure::four_point}) {
        EXPECT_EQ(parse_boundary_closure(to_string(c)), c);
    }
    EXPECT_THROW(parse_boundary_closure("five-point"), ValidationError);
}

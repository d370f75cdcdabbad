#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "ccfd/benchmark.hpp"
#include "ccfd/errors.hpp"

using namespace ccfd;

namespace {

// Second-order central Laplacian with step h, used as an independent check
// of the analytic forcing terms.
double fd_laplacian(const PointFunction& u, std::vector<double> x, double h)
{
    double lap = 0.0;
    const double centre = u(x);
    for (std::size_t d = 0; d < x.size(); ++d) {
        auto xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        lap += (u(xp) - 2.0 * centre + u(xm)) / (h * h);
    }
    return lap;
}

}  // namespace

TEST(Catalog, TrivialValues)
{
    const std::array<double, 2> p{0.5, 0.0};
    EXPECT_NEAR((*problem_catalog(1).exact)(p), 1.0, 1e-15);
    const std::array<double, 4> origin{0, 0, 0, 0};
    EXPECT_DOUBLE_EQ((*problem_catalog(4).exact)(origin), 1.0);
    EXPECT_DOUBLE_EQ(problem_catalog(4).forcing(origin), 4.0);
    EXPECT_DOUBLE_EQ(problem_catalog(2).forcing(std::array<double, 2>{0, 0}), 2.0);
    EXPECT_EQ(problem_catalog(3).name, "problem-3");
    EXPECT_EQ(problem_dimension(1), 2u);
    EXPECT_EQ(problem_dimension(3), 3u);
    EXPECT_EQ(problem_dimension(4), 4u);
    EXPECT_THROW(problem_catalog(0), ValidationError);
    EXPECT_THROW(problem_dimension(5), ValidationError);
}

TEST(CatalogProperty, ForcingIsLaplacianOfExact)
{
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    for (int id = 1; id <= 4; ++id) {
        const auto p = problem_catalog(id);
        for (int k = 0; k < 10; ++k) {
            std::vector<double> x(problem_dimension(id));
            for (auto& v : x) v = u(rng);
            const double f = p.forcing(x);
            EXPECT_NEAR(fd_laplacian(*p.exact, x, 1e-3), f, 1e-5 * std::max(1.0, std::abs(f)))
                << "problem " << id;
            EXPECT_DOUBLE_EQ(p.dirichlet(x), (*p.exact)(x));
        }
    }
}

TEST(Errors, ExactSolutionGivesZero)
{
    const auto p = problem_catalog(2);
    const auto g = build_grid(std::vector<AxisSpec>{AxisSpec{1.0, 9}, AxisSpec{1.0, 7, AxisFamily::sinh}});
    const auto rep = compute_errors(sample(g, *p.exact), p, g);
    EXPECT_EQ(rep.e_max, 0.0);
    EXPECT_EQ(rep.e_ave, 0.0);
    EXPECT_FALSE(rep.order_max);
}

TEST(Errors, SingleNodePerturbation)
{
    const auto p = problem_catalog(1);
    const auto g = build_grid(std::vector<AxisSpec>{AxisSpec{1.0, 11}, AxisSpec{1.0, 11}});
    auto field = sample(g, *p.exact);
    field[g.linearize(MultiIndex{4, 6})] += 1e-3;
    const auto interior = compute_errors(field, p, g, ErrorNodes::interior);
    const auto all = compute_errors(field, p, g, ErrorNodes::all);
    EXPECT_NEAR(interior.e_max, 1e-3, 1e-15);
    EXPECT_NEAR(interior.e_ave, 1e-3 / 81.0, 1e-16);
    EXPECT_NEAR(all.e_ave, 1e-3 / 121.0, 1e-16);
}

TEST(Errors, MissingExactSolution)
{
    auto p = problem_catalog(1);
    p.exact.reset();
    const auto g = build_grid(std::vector<AxisSpec>{AxisSpec{1.0, 5}, AxisSpec{1.0, 5}});
    EXPECT_THROW(compute_errors(ScalarField(g), p, g), ValidationError);
}

TEST(Order, KnownValues)
{
    EXPECT_NEAR(convergence_order(4e-3, 1e-3, 10, 20), 2.0, 1e-12);
    EXPECT_NEAR(convergence_order(2.76e-3, 6.91e-4, 10, 20), 2.0, 0.01);
    EXPECT_NEAR(convergence_order(2.77e-4, 1.23e-4, 20, 30), 2.0, 0.01);
    EXPECT_NEAR(convergence_order(16.0, 1.0, 5, 10), 4.0, 1e-12);
    EXPECT_THROW(convergence_order(0.0, 1e-3, 10, 20), ValidationError);
    EXPECT_THROW(convergence_order(1e-3, -1.0, 10, 20), ValidationError);
    EXPECT_THROW(convergence_order(1e-3, 1e-4, 20, 20), ValidationError);
    EXPECT_THROW(convergence_order(1e-3, 1e-4, 0, 20), ValidationError);
}

TEST(Study, SingleLevelHasNoOrder)
{
    StudySpec spec;
    spec.levels = {8};
    const auto r = run_study(spec);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_FALSE(r.rows[0].errors.order_max);
    EXPECT_FALSE(r.rows[0].errors.order_ave);
    EXPECT_TRUE(r.all_converged());
}

TEST(Study, CompactOrderOnProblemOne)
{
    StudySpec spec;
    spec.method = Method::ccfdm;
    spec.levels = {10, 20, 40};
    spec.solver = reference_solver_config();
    const auto r = run_study(spec);
    ASSERT_TRUE(r.all_converged());
    for (std::size_t k = 1; k < r.rows.size(); ++k) {
        EXPECT_GE(*r.rows[k].errors.order_max, 3.3);
        EXPECT_LE(*r.rows[k].errors.order_max, 4.3);
    }
}

TEST(Study, RowsAreConsistent)
{
    StudySpec spec;
    spec.problem = 2;
    spec.method = Method::fdm;
    spec.families = {AxisFamily::sinh};
    spec.levels = {6, 12, 24};
    const auto r = run_study(spec);
    ASSERT_EQ(r.rows.size(), 3u);
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
        const auto& row = r.rows[k];
        EXPECT_EQ(row.intervals, spec.levels[k]);
        EXPECT_LE(row.errors.e_ave, row.errors.e_max);
        EXPECT_GT(row.sweeps, 0u);
        EXPECT_EQ(row.correction_passes, 0u);
        EXPECT_GE(row.seconds, 0.0);
        if (k > 0) {
            EXPECT_LT(row.errors.e_max, r.rows[k - 1].errors.e_max);
            EXPECT_NEAR(*row.errors.order_max, 2.0, 0.3);
        }
    }
}

TEST(Study, StretchedFamiliesBeatUniformOnProblemTwo)
{
    // The solution grows toward x = y = 1, where sinh places its nodes.
    auto e_of = [](AxisFamily family) {
        StudySpec spec;
        spec.problem = 2;
        spec.families = {family};
        spec.levels = {20};
        return run_study(spec).rows[0].errors.e_max;
    };
    const double uniform = e_of(AxisFamily::uniform);
    const double sinh = e_of(AxisFamily::sinh);
    const double tanh = e_of(AxisFamily::tanh);
    EXPECT_LT(sinh, uniform);
    EXPECT_LT(uniform, tanh);
}

TEST(Study, FailuresAreRecordedPerRow)
{
    StudySpec spec;
    spec.method = Method::ccfdm;
    spec.solver.closure = BoundaryClosure::four_point;
    spec.levels = {3, 8};
    const auto r = run_study(spec);
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_TRUE(r.rows[0].failure);
    EXPECT_FALSE(r.rows[1].failure);
    EXPECT_FALSE(r.rows[1].errors.order_max);
    EXPECT_FALSE(r.all_converged());
}

TEST(Study, Validation)
{
    StudySpec spec;
    spec.levels = {};
    EXPECT_THROW(validate(spec), ValidationError);
    spec.levels = {20, 10};
    EXPECT_THROW(validate(spec), ValidationError);
    spec.levels = {10, 20};
    spec.families = {AxisFamily::sinh, AxisFamily::tanh, AxisFamily::uniform};
    EXPECT_THROW(validate(spec), ValidationError);
    spec.families = {AxisFamily::sinh, AxisFamily::tanh};
    EXPECT_NO_THROW(validate(spec));
    spec.problem = 9;
    EXPECT_THROW(validate(spec), ValidationError);
}

TEST(Study, AxesHelper)
{
    const auto specs = study_axes(3, {AxisFamily::sinh}, 0.5, 12);
    ASSERT_EQ(specs.size(), 3u);
    for (const auto& s : specs) {
        EXPECT_EQ(s.node_count, 13u);
        EXPECT_EQ(s.family, AxisFamily::sinh);
        EXPECT_DOUBLE_EQ(s.gamma, 0.5);
    }
}

TEST(Study, OrdersSeparateTheMethods)
{
    StudySpec spec;
    spec.problem = 2;
    spec.families = {AxisFamily::sinh};
    spec.levels = {10, 20};
    spec.solver = reference_solver_config();
    const auto low = run_study(spec);
    spec.method = Method::ccfdm;
    const auto high = run_study(spec);
    EXPECT_GE(*high.rows[1].errors.order_max - *low.rows[1].errors.order_max, 1.5);
    EXPECT_LT(high.rows[1].errors.e_max, low.rows[1].errors.e_max);
}

TEST(GammaSweep, SinglePoint)
{
    GammaSweepSpec spec;
    spec.intervals = 10;
    spec.gammas = {0.5};
    const auto pts = gamma_sweep(spec);
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_DOUBLE_EQ(pts[0].gamma, 0.5);
    EXPECT_GT(pts[0].e_ave, 0.0);
    EXPECT_LE(pts[0].e_ave, pts[0].e_max);
    EXPECT_TRUE(pts[0].converged);
}

TEST(GammaSweep, Validation)
{
    GammaSweepSpec spec;
    spec.intervals = 10;
    spec.gammas = {};
    EXPECT_THROW(gamma_sweep(spec), ValidationError);
    spec.gammas = {0.5, 0.2};
    EXPECT_THROW(gamma_sweep(spec), ValidationError);
    spec.gammas = {0.0, 0.5};
    EXPECT_THROW(gamma_sweep(spec), ValidationError);
}

TEST(GammaSweep, DefaultValues)
{
    const auto g = default_gamma_values();
    ASSERT_EQ(g.size(), 21u);
    EXPECT_DOUBLE_EQ(g.front(), 0.01);
    EXPECT_DOUBLE_EQ(g[1], 0.05);
    EXPECT_DOUBLE_EQ(g.back(), 1.0);
    for (std::size_t k = 1; k < g.size(); ++k) EXPECT_GT(g[k], g[k - 1]);
}

#include "ccfd/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ccfd/errors.hpp"

namespace ccfd {

namespace {

constexpr double pi = std::numbers::pi;

double coord_sum(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

PoissonProblem make_problem(std::string name, PointFunction exact, PointFunction forcing)
{
    PoissonProblem p;
    p.name = std::move(name);
    p.forcing = std::move(forcing);
    p.dirichlet = exact;
    p.exact = std::move(exact);
    return p;
}

}  // namespace

std::size_t problem_dimension(int id)
{
    switch (id) {
    case 1:
    case 2: return 2;
    case 3: return 3;
    case 4: return 4;
    default: throw ValidationError("unknown problem id " + std::to_string(id));
    }
}

PoissonProblem problem_catalog(int id)
{
    switch (id) {
    case 1:
        return make_problem(
            "problem-1",
            [](std::span<const double> x) { return std::sin(pi * x[0]) * std::cos(pi * x[1]); },
            [](std::span<const double> x) {
                return -2.0 * pi * pi * std::sin(pi * x[0]) * std::cos(pi * x[1]);
            });
    case 2:
        return make_problem(
            "problem-2", [](std::span<const double> x) { return std::exp(x[0] + x[1]); },
            [](std::span<const double> x) { return 2.0 * std::exp(x[0] + x[1]); });
    case 3: {
        auto exact = [](std::span<const double> x) {
            return std::exp(-2.0 * pi * x[0] - 2.0 * pi * x[1]) * std::sin(x[2]);
        };
        return make_problem("problem-3", exact, [exact](std::span<const double> x) {
            return (8.0 * pi * pi - 1.0) * exact(x);
        });
    }
    case 4:
        return make_problem(
            "problem-4", [](std::span<const double> x) { return std::exp(coord_sum(x)); },
            [](std::span<const double> x) { return 4.0 * std::exp(coord_sum(x)); });
    default: throw ValidationError("unknown problem id " + std::to_string(id));
    }
}

ErrorReport compute_errors(const ScalarField& solution, const PoissonProblem& problem,
                           const TensorGrid& grid, ErrorNodes nodes)
{
    if (!problem.exact) throw ValidationError("problem '" + problem.name + "' has no exact solution");
    require_matching(solution, grid);
    ErrorReport report;
    double total = 0.0;
    std::size_t counted = 0;
    const auto& exact = *problem.exact;
    for_each_node(grid, [&](std::size_t linear, std::span<const std::size_t> index,
                            std::span<const double> x) {
        const double e = std::abs(solution[linear] - exact(x));
        report.e_max = std::max(report.e_max, e);
        if (nodes == ErrorNodes::all || !grid.is_boundary(index)) {
            total += e;
            ++counted;
        }
    });
    report.e_ave = counted > 0 ? total / static_cast<double>(counted) : 0.0;
    return report;
}

double convergence_order(double e_coarse, double e_fine, double n_coarse, double n_fine)
{
    if (!(e_coarse > 0.0) || !(e_fine > 0.0)) {
        throw ValidationError("convergence order needs positive errors");
    }
    if (!(n_coarse > 0.0) || !(n_fine > n_coarse)) {
        throw ValidationError("convergence order needs 0 < n_coarse < n_fine");
    }
    return std::log(e_coarse / e_fine) / std::log(n_fine / n_coarse);
}

void validate(const StudySpec& spec)
{
    const std::size_t dim = problem_dimension(spec.problem);
    if (spec.families.size() != 1 && spec.families.size() != dim) {
        throw ValidationError("expected 1 or " + std::to_string(dim) + " grid families, got " +
                              std::to_string(spec.families.size()));
    }
    if (spec.levels.empty()) throw ValidationError("study needs at least one level");
    for (std::size_t i = 0; i < spec.levels.size(); ++i) {
        if (spec.levels[i] < 2) throw ValidationError("levels need at least 2 intervals");
        if (i > 0 && spec.levels[i] <= spec.levels[i - 1]) {
            throw ValidationError("levels must be strictly increasing");
        }
    }
    validate(spec.solver);
}

std::vector<AxisSpec> study_axes(std::size_t dimension, const std::vector<AxisFamily>& families,
                                 double gamma, std::size_t intervals)
{
    if (families.size() != 1 && families.size() != dimension) {
        throw ValidationError("grid family count does not match the dimension");
    }
    std::vector<AxisSpec> axes(dimension);
    for (std::size_t d = 0; d < dimension; ++d) {
        axes[d].length = 1.0;
        axes[d].node_count = intervals + 1;
        axes[d].family = families.size() == 1 ? families[0] : families[d];
        axes[d].gamma = gamma;
    }
    return axes;
}

bool StudyResult::all_converged() const
{
    return std::all_of(rows.begin(), rows.end(),
                       [](const StudyRow& r) { return !r.failure && r.converged; });
}

StudyResult run_study(const StudySpec& spec)
{
    validate(spec);
    const std::size_t dim = problem_dimension(spec.problem);
    const auto problem = problem_catalog(spec.problem);

    StudyResult result;
    result.spec = spec;
    const StudyRow* previous = nullptr;
    for (std::size_t level : spec.levels) {
        StudyRow row;
        row.intervals = level;
        try {
            const auto axes = study_axes(dim, spec.families, spec.gamma, level);
            const auto grid = build_grid(axes);
            const auto report = solve(spec.method, problem, grid, spec.solver);
            row.errors = compute_errors(report.solution, problem, grid, spec.error_nodes);
            row.sweeps = report.inner_iterations;
            row.correction_passes = report.correction_passes_used;
            row.seconds = report.wall_time;
            row.converged = report.converged;
        } catch (const Error& e) {
            row.failure = e.what();
        }
        if (!row.failure && previous && !previous->failure) {
            const auto n0 = static_cast<double>(previous->intervals);
            const auto n1 = static_cast<double>(level);
            if (previous->errors.e_max > 0.0 && row.errors.e_max > 0.0) {
                row.errors.order_max = convergence_order(previous->errors.e_max, row.errors.e_max, n0, n1);
            }
            if (previous->errors.e_ave > 0.0 && row.errors.e_ave > 0.0) {
                row.errors.order_ave = convergence_order(previous->errors.e_ave, row.errors.e_ave, n0, n1);
            }
        }
        result.rows.push_back(std::move(row));
        previous = &result.rows.back();
    }
    return result;
}

std::vector<GammaPoint> gamma_sweep(const GammaSweepSpec& spec)
{
    const std::size_t dim = problem_dimension(spec.problem);
    if (spec.gammas.empty()) throw ValidationError("gamma sweep needs at least one value");
    for (std::size_t i = 0; i < spec.gammas.size(); ++i) {
        if (!(spec.gammas[i] > 0.0)) throw ValidationError("gamma values must be positive");
        if (i > 0 && !(spec.gammas[i] > spec.gammas[i - 1])) {
            throw ValidationError("gamma values must be ascending");
        }
    }
    validate(spec.solver);
    const auto problem = problem_catalog(spec.problem);

    std::vector<GammaPoint> points;
    points.reserve(spec.gammas.size());
    for (double gamma : spec.gammas) {
        GammaPoint point;
        point.gamma = gamma;
        try {
            const auto grid = build_grid(study_axes(dim, {spec.family}, gamma, spec.intervals));
            const auto report = solve(spec.method, problem, grid, spec.solver);
            const auto errors = compute_errors(report.solution, problem, grid, spec.error_nodes);
            point.e_ave = errors.e_ave;
            point.e_max = errors.e_max;
            point.converged = report.converged;
        } catch (const Error& e) {
            point.failure = e.what();
        }
        points.push_back(point);
    }
    return points;
}

std::vector<double> default_gamma_values()
{
    std::vector<double> values{0.01};
    for (int k = 1; k <= 20; ++k) values.push_back(0.05 * k);
    return values;
}

SolverConfig reference_solver_config()
{
    SolverConfig config;
    config.correction_mode = CorrectionMode::single_pass;
    return config;
}

}  // namespace ccfd

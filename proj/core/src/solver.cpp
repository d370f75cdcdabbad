#include "ccfd/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "ccfd/derivative.hpp"
#include "ccfd/errors.hpp"

namespace ccfd {

namespace {

/// Calls fn(base, index) for every interior line along axis 0, where `base`
/// is the linear index of the line's node with i_0 = 0.
template <class Fn>
void for_each_interior_line(const TensorGrid& grid, bool reverse, Fn&& fn)
{
    const std::size_t dim = grid.dimension();
    MultiIndex index(dim, 0);
    for (std::size_t d = 1; d < dim; ++d) index[d] = reverse ? grid.extent(d) - 2 : 1;
    for (;;) {
        std::size_t base = 0;
        for (std::size_t d = 1; d < dim; ++d) base += index[d] * grid.stride(d);
        fn(base, index);
        std::size_t d = 1;
        for (; d < dim; ++d) {
            if (!reverse) {
                if (++index[d] + 1 < grid.extent(d)) break;
                index[d] = 1;
            } else {
                if (index[d] > 1) {
                    --index[d];
                    break;
                }
                index[d] = grid.extent(d) - 2;
            }
        }
        if (d >= dim) break;
    }
}

/// Neighbour weights of the axes other than axis 0 along one line.
struct CrossWeights {
    std::vector<double> minus, plus;
    std::vector<std::size_t> stride;

    void load(const OperatorCoeffs& coeffs, const TensorGrid& grid, const MultiIndex& index)
    {
        const std::size_t dim = grid.dimension();
        minus.resize(dim - 1);
        plus.resize(dim - 1);
        stride.resize(dim - 1);
        for (std::size_t d = 1; d < dim; ++d) {
            minus[d - 1] = coeffs.a_minus(d, index[d]);
            plus[d - 1] = coeffs.a_plus(d, index[d]);
            stride[d - 1] = grid.stride(d);
        }
    }
};

/// Right-hand side of the normalised equation at node n, times a_p.
inline double neighbour_sum(const double* phi, std::size_t n, double m0, double p0,
                            const CrossWeights& cross)
{
    double s = m0 * phi[n - 1] + p0 * phi[n + 1];
    for (std::size_t k = 0; k < cross.stride.size(); ++k) {
        s += cross.minus[k] * phi[n - cross.stride[k]] + cross.plus[k] * phi[n + cross.stride[k]];
    }
    return s;
}

void sweep(const OperatorCoeffs& coeffs, const TensorGrid& grid, ScalarField& field,
           const ScalarField* extra, bool reverse)
{
    double* phi = field.values().data();
    const double* b = coeffs.source().values().data();
    const double* bs = extra ? extra->values().data() : nullptr;
    const double* inv = coeffs.inverse_diagonal().data();
    const std::size_t n0 = grid.extent(0);
    CrossWeights cross;
    for_each_interior_line(grid, reverse, [&](std::size_t base, const MultiIndex& index) {
        cross.load(coeffs, grid, index);
        auto update = [&](std::size_t i) {
            const std::size_t n = base + i;
            double s = neighbour_sum(phi, n, coeffs.a_minus(0, i), coeffs.a_plus(0, i), cross) + b[n];
            if (bs) s += bs[n];
            phi[n] = s * inv[n];
        };
        if (!reverse) {
            for (std::size_t i = 1; i + 1 < n0; ++i) update(i);
        } else {
            for (std::size_t i = n0 - 2; i >= 1; --i) update(i);
        }
    });
}

double scaled_max_change(const ScalarField& a, const ScalarField& b, std::span<const double> inv)
{
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        best = std::max(best, std::abs(a[i] - b[i]) * inv[i]);
    }
    return best;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string_view to_string(Method method)
{
    return method == Method::fdm ? "fdm" : "ccfdm";
}

std::string_view to_string(ResidualReading reading)
{
    return reading == ResidualReading::absolute ? "absolute" : "relative";
}

std::string_view to_string(CorrectionMode mode)
{
    return mode == CorrectionMode::fixed_point ? "fixed-point" : "single-pass";
}

Method parse_method(std::string_view name)
{
    if (name == "fdm") return Method::fdm;
    if (name == "ccfdm") return Method::ccfdm;
    throw ValidationError("unknown method '" + std::string(name) + "'");
}

ResidualReading parse_residual_reading(std::string_view name)
{
    if (name == "absolute") return ResidualReading::absolute;
    if (name == "relative") return ResidualReading::relative;
    throw ValidationError("unknown residual reading '" + std::string(name) + "'");
}

CorrectionMode parse_correction_mode(std::string_view name)
{
    if (name == "fixed-point") return CorrectionMode::fixed_point;
    if (name == "single-pass") return CorrectionMode::single_pass;
    throw ValidationError("unknown correction mode '" + std::string(name) + "'");
}

void validate(const SolverConfig& config)
{
    if (!(config.residual_tolerance > 0.0)) {
        throw ValidationError("residual_tolerance must be positive");
    }
    if (!(config.correction_tolerance > 0.0)) {
        throw ValidationError("correction_tolerance must be positive");
    }
    if (config.max_sweeps == 0) throw ValidationError("max_sweeps must be positive");
}

OperatorCoeffs::OperatorCoeffs(const TensorGrid& grid, const PointFunction& forcing)
{
    const std::size_t dim = grid.dimension();
    minus_.resize(dim);
    plus_.resize(dim);
    center_.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        const auto dx = grid.axis(d).spacings();
        const std::size_t n = grid.extent(d);
        minus_[d].assign(n, 0.0);
        plus_[d].assign(n, 0.0);
        center_[d].assign(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double dl = dx[i - 1];
            const double dr = dx[i];
            minus_[d][i] = 2.0 / (dl * (dl + dr));
            plus_[d][i] = 2.0 / (dr * (dl + dr));
            center_[d][i] = 2.0 / (dl * dr);
        }
    }
    source_ = ScalarField(grid);
    inv_diag_.assign(grid.node_count(), 0.0);
    for_each_node(grid, [&](std::size_t linear, std::span<const std::size_t> index,
                            std::span<const double> x) {
        if (grid.is_boundary(index)) return;
        source_[linear] = -forcing(x);
        inv_diag_[linear] = 1.0 / a_p(index);
    });
}

double OperatorCoeffs::a_p(std::span<const std::size_t> index) const
{
    double s = 0.0;
    for (std::size_t d = 0; d < center_.size(); ++d) s += center_[d][index[d]];
    return s;
}

OperatorCoeffs assemble_operator(const TensorGrid& grid, const PoissonProblem& problem)
{
    if (grid.dimension() == 0) throw ValidationError("grid has no axes");
    if (!problem.forcing) throw ValidationError("problem has no forcing function");
    return OperatorCoeffs(grid, problem.forcing);
}

ScalarField initial_field(const TensorGrid& grid, const PoissonProblem& problem,
                          const SolverConfig& config)
{
    if (!problem.dirichlet) throw ValidationError("problem has no Dirichlet data");
    ScalarField field(grid);
    if (config.initial_guess) {
        require_matching(*config.initial_guess, grid);
        field = *config.initial_guess;
    }
    for_each_node(grid, [&](std::size_t linear, std::span<const std::size_t> index,
                            std::span<const double> x) {
        if (grid.is_boundary(index)) field[linear] = problem.dirichlet(x);
    });
    return field;
}

double mean_residual(const OperatorCoeffs& coeffs, const TensorGrid& grid,
                     const ScalarField& field, const ScalarField* extra_source)
{
    const double* phi = field.values().data();
    const double* b = coeffs.source().values().data();
    const double* bs = extra_source ? extra_source->values().data() : nullptr;
    const double* inv = coeffs.inverse_diagonal().data();
    const std::size_t n0 = grid.extent(0);
    double total = 0.0;
    CrossWeights cross;
    for_each_interior_line(grid, false, [&](std::size_t base, const MultiIndex& index) {
        cross.load(coeffs, grid, index);
        for (std::size_t i = 1; i + 1 < n0; ++i) {
            const std::size_t n = base + i;
            double s = neighbour_sum(phi, n, coeffs.a_minus(0, i), coeffs.a_plus(0, i), cross) + b[n];
            if (bs) s += bs[n];
            total += std::abs(s * inv[n] - phi[n]);
        }
    });
    return grid.interior_count() > 0 ? total / static_cast<double>(grid.interior_count()) : 0.0;
}

SweepResult gauss_seidel_solve(const OperatorCoeffs& coeffs, const TensorGrid& grid,
                               ScalarField field, const ScalarField* extra_source,
                               const SolverConfig& config)
{
    validate(config);
    require_matching(field, grid);
    require_matching(coeffs.source(), grid);
    if (extra_source) require_matching(*extra_source, grid);

    double threshold = config.residual_tolerance;
    if (config.residual_reading == ResidualReading::relative) {
        threshold *= mean_residual(coeffs, grid, field, extra_source);
    }
    const bool reverse = config.sweep_order == SweepOrder::reverse;

    SweepResult result;
    while (result.sweeps < config.max_sweeps) {
        sweep(coeffs, grid, field, extra_source, reverse);
        ++result.sweeps;
        const double r = mean_residual(coeffs, grid, field, extra_source);
        result.residual_history.push_back(r);
        if (!std::isfinite(r)) {
            throw DivergenceError("Gauss-Seidel iterate diverged after " +
                                  std::to_string(result.sweeps) + " sweeps");
        }
        if (r <= threshold) {
            result.converged = true;
            break;
        }
    }
    if (!field.all_finite()) throw DivergenceError("Gauss-Seidel produced non-finite values");
    result.solution = std::move(field);
    return result;
}

ScalarField compute_correction(const ScalarField& field, const TensorGrid& grid,
                               const StencilSet& stencils)
{
    require_matching(field, grid);
    if (stencils.dimension() != grid.dimension()) {
        throw ValidationError("stencil set dimension does not match the grid");
    }
    ScalarField correction(grid);
    CompactWorkspace work;
    std::vector<double> line, high, low;
    MultiIndex index(grid.dimension());
    for (std::size_t d = 0; d < grid.dimension(); ++d) {
        const std::size_t n = grid.extent(d);
        const std::size_t stride = grid.stride(d);
        line.resize(n);
        high.resize(n);
        low.resize(n);
        for (std::size_t start = 0; start < grid.node_count(); ++start) {
            if ((start / stride) % n != 0) continue;
            // Lines lying on the boundary carry no interior nodes.
            grid.delinearize(start, index);
            bool on_boundary = false;
            for (std::size_t e = 0; e < grid.dimension(); ++e) {
                if (e != d && (index[e] == 0 || index[e] + 1 == grid.extent(e))) {
                    on_boundary = true;
                    break;
                }
            }
            if (on_boundary) continue;
            for (std::size_t i = 0; i < n; ++i) line[i] = field[start + i * stride];
            compact_second_derivative(line, stencils.axis(d), high, work);
            classical_second_derivative(line, stencils.axis(d), low);
            for (std::size_t i = 1; i + 1 < n; ++i) correction[start + i * stride] += high[i] - low[i];
        }
    }
    return correction;
}

SolveReport solve_fdm(const PoissonProblem& problem, const TensorGrid& grid,
                      const SolverConfig& config)
{
    validate(config);
    const auto coeffs = assemble_operator(grid, problem);
    auto field = initial_field(grid, problem, config);

    const auto start = Clock::now();
    auto sweep_result = gauss_seidel_solve(coeffs, grid, std::move(field), nullptr, config);

    SolveReport report;
    report.method = Method::fdm;
    report.wall_time = seconds_since(start);
    report.inner_iterations = sweep_result.sweeps;
    report.final_solve_sweeps = sweep_result.sweeps;
    report.residual_history = std::move(sweep_result.residual_history);
    report.converged = sweep_result.converged;
    report.solution = std::move(sweep_result.solution);
    return report;
}

SolveReport solve_ccfdm(const PoissonProblem& problem, const TensorGrid& grid,
                        const SolverConfig& config)
{
    validate(config);
    const auto coeffs = assemble_operator(grid, problem);
    const StencilSet stencils(grid, config.closure);
    for (std::size_t d = 0; d < grid.dimension(); ++d) {
        if (!stencils.axis(d).has_compact) {
            throw ValidationError("axis " + std::to_string(d) + " has too few nodes for the " +
                                  std::string(to_string(config.closure)) + " compact closure");
        }
    }
    auto field = initial_field(grid, problem, config);

    const auto start = Clock::now();
    SolveReport report;
    report.method = Method::ccfdm;

    auto absorb = [&](SweepResult&& r) {
        report.inner_iterations += r.sweeps;
        report.final_solve_sweeps = r.sweeps;
        report.residual_history.insert(report.residual_history.end(), r.residual_history.begin(),
                                       r.residual_history.end());
        report.converged = r.converged;
        report.solution = std::move(r.solution);
    };

    // Classical solution first, then correction passes seeded from it.
    absorb(gauss_seidel_solve(coeffs, grid, std::move(field), nullptr, config));

    ScalarField previous(grid);
    const auto inv = coeffs.inverse_diagonal();
    while (report.converged) {
        ScalarField correction = compute_correction(report.solution, grid, stencils);
        const double change = scaled_max_change(correction, previous, inv);
        report.correction_changes.push_back(change);
        const bool all_zero = std::all_of(correction.values().begin(), correction.values().end(),
                                          [](double v) { return v == 0.0; });
        if (all_zero) break;

        absorb(gauss_seidel_solve(coeffs, grid, report.solution, &correction, config));
        ++report.correction_passes_used;

        if (config.correction_mode == CorrectionMode::single_pass) break;
        if (change <= config.correction_tolerance) break;
        if (report.correction_passes_used >= config.max_correction_passes) {
            report.correction_converged = false;
            break;
        }
        previous = std::move(correction);
    }
    report.converged = report.converged && report.correction_converged;
    report.wall_time = seconds_since(start);
    return report;
}

SolveReport solve(Method method, const PoissonProblem& problem, const TensorGrid& grid,
                  const SolverConfig& config)
{
    return method == Method::fdm ? solve_fdm(problem, grid, config)
                                 : solve_ccfdm(problem, grid, config);
}

}  // namespace ccfd

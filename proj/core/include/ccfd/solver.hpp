#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccfd/field.hpp"
#include "ccfd/grid.hpp"
#include "ccfd/stencils.hpp"

namespace ccfd {

/// Poisson problem  sum_d d2phi/dx_d2 = f  with Dirichlet data.
struct PoissonProblem {
    std::string name;
    PointFunction forcing;
    PointFunction dirichlet;
    std::optional<PointFunction> exact;
};

enum class Method { fdm, ccfdm };
enum class ResidualReading { absolute, relative };
enum class CorrectionMode { fixed_point, single_pass };
enum class SweepOrder { lexicographic, reverse };

std::string_view to_string(Method method);
std::string_view to_string(ResidualReading reading);
std::string_view to_string(CorrectionMode mode);
Method parse_method(std::string_view name);
ResidualReading parse_residual_reading(std::string_view name);
CorrectionMode parse_correction_mode(std::string_view name);

/**
 * Iteration controls.
 *
 * Residuals are those of the discrete equations divided by their diagonal
 * a_p, averaged in absolute value over the interior nodes. With the
 * `absolute` reading a solve stops once that mean drops to
 * `residual_tolerance`; with `relative` once it drops by that factor from
 * the initial guess. The correction fixed point uses the same scaling.
 */
struct SolverConfig {
    double residual_tolerance = 1e-14;
    std::size_t max_sweeps = 1'000'000;
    ResidualReading residual_reading = ResidualReading::absolute;
    CorrectionMode correction_mode = CorrectionMode::fixed_point;
    std::size_t max_correction_passes = 50;
    double correction_tolerance = 1e-12;
    SweepOrder sweep_order = SweepOrder::lexicographic;
    BoundaryClosure closure = BoundaryClosure::three_point;
    /// Interior values of the first iterate; boundary values are always
    /// replaced by the Dirichlet data. Zero when absent.
    std::optional<ScalarField> initial_guess;
};

void validate(const SolverConfig& config);

/**
 * 2n+1 point classical operator. Per axis and node the weights of the left
 * and right neighbours and the diagonal contribution 2/(dl*dr) are kept;
 * a_p at a node is the sum of the diagonal contributions over all axes.
 * The source is b = -f at interior nodes and zero on the boundary.
 */
class OperatorCoeffs {
public:
    OperatorCoeffs() = default;
    OperatorCoeffs(const TensorGrid& grid, const PointFunction& forcing);

    std::size_t dimension() const noexcept { return minus_.size(); }
    double a_minus(std::size_t d, std::size_t i) const { return minus_[d][i]; }
    double a_plus(std::size_t d, std::size_t i) const { return plus_[d][i]; }
    double a_center(std::size_t d, std::size_t i) const { return center_[d][i]; }
    double a_p(std::span<const std::size_t> index) const;

    const ScalarField& source() const noexcept { return source_; }
    /// 1/a_p per node, zero on the boundary.
    std::span<const double> inverse_diagonal() const noexcept { return inv_diag_; }

private:
    std::vector<std::vector<double>> minus_;
    std::vector<std::vector<double>> plus_;
    std::vector<std::vector<double>> center_;
    ScalarField source_;
    std::vector<double> inv_diag_;
};

OperatorCoeffs assemble_operator(const TensorGrid& grid, const PoissonProblem& problem);

/// Initial iterate: `config.initial_guess` (or zeros) with Dirichlet data on the boundary.
ScalarField initial_field(const TensorGrid& grid, const PoissonProblem& problem,
                          const SolverConfig& config);

struct SweepResult {
    ScalarField solution;
    std::size_t sweeps = 0;
    /// Mean scaled residual after every sweep.
    std::vector<double> residual_history;
    bool converged = false;
};

/// Mean scaled residual over interior nodes.
double mean_residual(const OperatorCoeffs& coeffs, const TensorGrid& grid,
                     const ScalarField& field, const ScalarField* extra_source = nullptr);

/**
 * Gauss-Seidel on  a_p phi = sum a_nb phi_nb + b + b*  (b* = extra_source).
 * Boundary values of `field` are kept. Runs at least one sweep. Throws
 * DivergenceError if the iterate stops being finite.
 */
SweepResult gauss_seidel_solve(const OperatorCoeffs& coeffs, const TensorGrid& grid,
                               ScalarField field, const ScalarField* extra_source,
                               const SolverConfig& config);

/// b* = sum_d (compact - classical) second derivative, at interior nodes.
ScalarField compute_correction(const ScalarField& field, const TensorGrid& grid,
                               const StencilSet& stencils);

struct SolveReport {
    Method method = Method::fdm;
    ScalarField solution;
    /// Sweeps summed over every inner solve.
    std::size_t inner_iterations = 0;
    /// Sweeps of the last inner solve only.
    std::size_t final_solve_sweeps = 0;
    std::size_t correction_passes_used = 0;
    /// Scaled max-norm change of b* per correction pass.
    std::vector<double> correction_changes;
    std::vector<double> residual_history;
    double wall_time = 0.0;
    bool converged = false;
    bool correction_converged = true;
};

SolveReport solve_fdm(const PoissonProblem& problem, const TensorGrid& grid,
                      const SolverConfig& config = {});
SolveReport solve_ccfdm(const PoissonProblem& problem, const TensorGrid& grid,
                        const SolverConfig& config = {});
SolveReport solve(Method method, const PoissonProblem& problem, const TensorGrid& grid,
                  const SolverConfig& config = {});

}  // namespace ccfd

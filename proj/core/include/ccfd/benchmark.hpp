#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ccfd/grid.hpp"
#include "ccfd/solver.hpp"

namespace ccfd {

/// Manufactured-solution problems 1..4 on the unit cube of their dimension.
PoissonProblem problem_catalog(int id);
std::size_t problem_dimension(int id);

/// Nodes entering the error metrics. Boundary errors vanish with exact
/// Dirichlet data, so the choice only changes the divisor of e_ave.
enum class ErrorNodes { interior, all };

struct ErrorReport {
    double e_max = 0.0;
    double e_ave = 0.0;
    std::optional<double> order_max;
    std::optional<double> order_ave;
};

ErrorReport compute_errors(const ScalarField& solution, const PoissonProblem& problem,
                           const TensorGrid& grid, ErrorNodes nodes = ErrorNodes::interior);

/// log(e_coarse/e_fine) / log(n_fine/n_coarse).
double convergence_order(double e_coarse, double e_fine, double n_coarse, double n_fine);

struct StudySpec {
    int problem = 1;
    Method method = Method::fdm;
    /// One family for every axis, or one per axis.
    std::vector<AxisFamily> families{AxisFamily::uniform};
    double gamma = 1.0;
    /// Intervals per axis at each level, strictly increasing.
    std::vector<std::size_t> levels;
    SolverConfig solver;
    ErrorNodes error_nodes = ErrorNodes::interior;
};

void validate(const StudySpec& spec);

/// Axis specs for `intervals` intervals on every axis.
std::vector<AxisSpec> study_axes(std::size_t dimension, const std::vector<AxisFamily>& families,
                                 double gamma, std::size_t intervals);

struct StudyRow {
    std::size_t intervals = 0;
    ErrorReport errors;
    std::size_t sweeps = 0;
    std::size_t correction_passes = 0;
    double seconds = 0.0;
    bool converged = false;
    /// Set when the solve threw; the other fields are then meaningless.
    std::optional<std::string> failure;
};

struct StudyResult {
    StudySpec spec;
    std::vector<StudyRow> rows;

    bool all_converged() const;
};

/// Orders are computed only between consecutive successful rows.
StudyResult run_study(const StudySpec& spec);

struct GammaPoint {
    double gamma = 0.0;
    double e_ave = 0.0;
    double e_max = 0.0;
    bool converged = false;
    std::optional<std::string> failure;
};

struct GammaSweepSpec {
    int problem = 2;
    Method method = Method::fdm;
    AxisFamily family = AxisFamily::sinh;
    std::size_t intervals = 40;
    std::vector<double> gammas;
    SolverConfig solver;
    ErrorNodes error_nodes = ErrorNodes::interior;
};

std::vector<GammaPoint> gamma_sweep(const GammaSweepSpec& spec);

/// 0.01, 0.05, 0.10, ..., 1.00
std::vector<double> default_gamma_values();

/// Solver settings behind the reference error values: single correction pass.
SolverConfig reference_solver_config();

}  // namespace ccfd

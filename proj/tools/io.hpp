#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccfd/benchmark.hpp"
#include "ccfd/derivative.hpp"
#include "ccfd/grid.hpp"
#include "ccfd/stencils.hpp"
#include "json.hpp"

namespace ccfd::io {

/// A file could not be created or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scientific notation with 6 significant digits.
std::string sci(double value);

/// axis,index,coordinate,spacing (spacing of the interval to the right; empty at the last node).
void write_axes_csv(std::ostream& out, const TensorGrid& grid);

/**
 * One row per node of the axis. LHS columns are the weights of D at the
 * previous node, the node itself and the next node; a..d are function
 * weights. Closure rows list their function weights from the boundary
 * inward.
 */
void write_stencils_csv(std::ostream& out, const AxisStencils& stencils);

/// index_0..index_{n-1}, x_0..x_{n-1}, value[, exact, error].
void write_solution_csv(std::ostream& out, const TensorGrid& grid, const ScalarField& field,
                        const PoissonProblem* problem = nullptr);

/// Raw little-endian doubles plus a JSON sidecar describing the layout.
nlohmann::json field_header(const TensorGrid& grid);
void write_field_binary(const std::filesystem::path& data_path, const TensorGrid& grid,
                        const ScalarField& field);

/// Per-axis compact and classical second derivatives of a field.
void write_derivatives_csv(std::ostream& out, const TensorGrid& grid,
                           const std::vector<ScalarField>& high,
                           const std::vector<ScalarField>& low);

/// grid,e_max,order_max,e_ave,order_ave,sweeps,correction_passes,seconds,status
void write_study_csv(std::ostream& out, const StudyResult& result);
nlohmann::json study_to_json(const StudyResult& result);

/// Aligned table for terminals.
void print_study_table(std::ostream& out, const StudyResult& result);

/// gamma,e_ave
void write_gamma_csv(std::ostream& out, const std::vector<GammaPoint>& points);
nlohmann::json gamma_to_json(const std::vector<GammaPoint>& points);

}  // namespace ccfd::io

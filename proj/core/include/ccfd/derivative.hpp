#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ccfd/field.hpp"
#include "ccfd/grid.hpp"
#include "ccfd/stencils.hpp"

namespace ccfd {

/// lower[i] couples row i+1 to unknown i; upper[i] couples row i to unknown i+1.
struct TridiagonalSystem {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    std::vector<double> rhs;
};

/// Thomas algorithm. Throws SingularSystemError on a vanishing pivot.
std::vector<double> tdma_solve(const TridiagonalSystem& sys);

/// Allocation-free form; `scratch` must hold diag.size() values.
void tdma_solve(std::span<const double> lower, std::span<const double> diag,
                std::span<const double> upper, std::span<const double> rhs,
                std::span<double> x, std::span<double> scratch);

/**
 * Classical three-point second derivative along one line. The output has
 * the line's length; the two boundary entries are left at zero and carry no
 * meaning.
 */
void classical_second_derivative(std::span<const double> line, const AxisStencils& stencils,
                                 std::span<double> out);
std::vector<double> classical_second_derivative(std::span<const double> line,
                                                const AxisStencils& stencils);

/// Full (M+1)-row compact system for a line: boundary closures plus interior rows.
TridiagonalSystem assemble_compact_system(std::span<const double> line,
                                          const AxisStencils& stencils);

/// Reusable buffers for compact_second_derivative.
class CompactWorkspace {
public:
    void resize(std::size_t n);

    std::vector<double> lower, diag, upper, rhs, scratch, solution;
};

/**
 * Compact second derivative at every node of a line.
 *
 * The boundary derivatives are eliminated into the first and last interior
 * rows, the interior system is solved by TDMA, and the boundary values are
 * recovered afterwards. This keeps the solve well-posed when the three-point
 * closure puts zero weight on the boundary derivative.
 */
void compact_second_derivative(std::span<const double> line, const AxisStencils& stencils,
                               std::span<double> out, CompactWorkspace& work);
std::vector<double> compact_second_derivative(std::span<const double> line,
                                              const AxisStencils& stencils);

enum class Scheme { low, high };

/// One derivative field per axis. Low-scheme boundary entries are zero.
std::vector<ScalarField> field_second_derivatives(const ScalarField& field,
                                                  const TensorGrid& grid,
                                                  const StencilSet& stencils, Scheme scheme);

}  // namespace ccfd

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ccfd/grid.hpp"

namespace ccfd {

/// Explicit three-point second derivative: a*phi[i-1] + b*phi[i] + c*phi[i+1].
struct ClassicalCoeffs {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/**
 * Interior row of the compact scheme:
 *
 *     alpha*D[i-1] + D[i] + beta*D[i+1] = a*phi[i-1] + b*phi[i] + c*phi[i+1]
 *
 * where D is the second derivative. Exact for polynomials up to degree 4.
 */
struct CompactInteriorRow {
    double alpha = 0.0;
    double beta = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/**
 * Boundary closure families for the compact scheme.
 *
 * `three_point` couples the derivatives at the boundary node and its
 * neighbour to function values at the first three nodes (exact to degree 3).
 * It is normalised on the neighbour, because the weight on the boundary
 * derivative vanishes on uniform spacing, where the row reduces to the
 * classical stencil at the neighbour.
 *
 * `four_point` adds a fourth explicit node and is normalised on the boundary
 * derivative (exact to degree 4). On uniform spacing it is the familiar
 * D[0] + 11 D[1] = (13, -27, 15, -1) / h^2 closure.
 */
enum class BoundaryClosure { three_point, four_point };

std::string_view to_string(BoundaryClosure closure);
BoundaryClosure parse_boundary_closure(std::string_view name);

enum class Side { left, right };

/**
 * boundary_weight*D[0] + adjacent_weight*D[1] = sum_k weights[k]*phi[k],
 * with node k counted inward from the boundary. Entries past
 * `explicit_count` are zero.
 */
struct CompactBoundaryRow {
    double boundary_weight = 0.0;
    double adjacent_weight = 1.0;
    std::array<double, 4> weights{};
    std::size_t explicit_count = 3;
};

ClassicalCoeffs classical_coeffs(double dx_left, double dx_right);
CompactInteriorRow compact_interior_coeffs(double dx_left, double dx_right);

/// `inward_spacings` are the interval widths starting at the boundary and
/// moving inward (three are read for `four_point`, two for `three_point`).
CompactBoundaryRow compact_boundary_coeffs(std::span<const double> inward_spacings, Side side,
                                           BoundaryClosure closure = BoundaryClosure::three_point);

// ---------------------------------------------------------------------------
// Moment matching

/// Node coordinates addressed by signed offset from the evaluation node.
struct NodePositions {
    int first_offset = 0;
    std::span<const double> coords;

    double at(int offset) const;
};

/**
 * Shape of a (possibly implicit) second-derivative stencil. The derivative is
 * approximated at offset 0; `normalized_offset` names the implicit node whose
 * weight is fixed to one.
 */
struct MomentStencil {
    std::vector<int> implicit_offsets;
    std::vector<int> explicit_offsets;
    int normalized_offset = 0;
};

struct MomentSolution {
    std::vector<double> implicit_weights;  ///< aligned with implicit_offsets
    std::vector<double> explicit_weights;  ///< aligned with explicit_offsets
    double condition_estimate = 0.0;
    double max_relative_residual = 0.0;
};

/**
 * Solves for the stencil weights that make
 *
 *     sum_j w_j p''(x_j) = sum_k e_k p(x_k)
 *
 * hold for p(x) = (x - x_0)^m, m = 0 .. unknowns - 1. Throws
 * DegenerateStencilError when the moment matrix is (numerically) singular.
 */
MomentSolution taylor_match(const MomentStencil& stencil, const NodePositions& positions);

/// Relative residual of moment condition m for a solved stencil.
double moment_residual(const MomentStencil& stencil, const MomentSolution& solution,
                       const NodePositions& positions, int m);

// ---------------------------------------------------------------------------
// Per-axis coefficient cache

/// Coefficients for every node of one axis; entries are indexed by node and
/// the boundary slots of `classical` / `interior` are unused.
struct AxisStencils {
    std::vector<ClassicalCoeffs> classical;
    std::vector<CompactInteriorRow> interior;
    CompactBoundaryRow left;
    CompactBoundaryRow right;
    BoundaryClosure closure = BoundaryClosure::three_point;
    /// False when the axis is too short for the closure (min_compact_nodes).
    bool has_compact = false;

    std::size_t size() const noexcept { return classical.size(); }
};

/// Shortest line on which the compact system is solvable with `closure`.
std::size_t min_compact_nodes(BoundaryClosure closure);

AxisStencils build_axis_stencils(const Axis& axis,
                                 BoundaryClosure closure = BoundaryClosure::three_point);

class StencilSet {
public:
    StencilSet() = default;
    explicit StencilSet(const TensorGrid& grid,
                        BoundaryClosure closure = BoundaryClosure::three_point);

    std::size_t dimension() const noexcept { return axes_.size(); }
    const AxisStencils& axis(std::size_t d) const { return axes_[d]; }
    BoundaryClosure closure() const noexcept { return closure_; }

private:
    std::vector<AxisStencils> axes_;
    BoundaryClosure closure_ = BoundaryClosure::three_point;
};

}  // namespace ccfd

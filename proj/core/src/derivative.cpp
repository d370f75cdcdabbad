#include "ccfd/derivative.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ccfd/errors.hpp"

namespace ccfd {

namespace {

constexpr double kAbsolutePivot = 1e-30;
constexpr double kRelativePivot = 64 * std::numeric_limits<double>::epsilon();

void check_pivot(double pivot, double row_scale, std::size_t row)
{
    if (!(std::abs(pivot) >= kAbsolutePivot) || std::abs(pivot) <= kRelativePivot * row_scale) {
        throw SingularSystemError("tridiagonal system is singular at row " + std::to_string(row),
                                  row);
    }
}

void require_line(std::span<const double> line, const AxisStencils& stencils)
{
    if (line.size() != stencils.size()) {
        throw ValidationError("line of length " + std::to_string(line.size()) +
                              " does not match stencils for " +
                              std::to_string(stencils.size()) + " nodes");
    }
    if (line.size() < 3) throw ValidationError("second derivative needs at least three nodes");
}

// Explicit weights of every row sum to zero, so the rows are evaluated on
// differences from one node. Summing the raw values loses about
// eps*|phi|/h^2 to cancellation.
double closure_rhs(const CompactBoundaryRow& row, std::span<const double> line, Side side)
{
    const std::size_t last = line.size() - 1;
    const double ref = line[side == Side::left ? 0 : last];
    double s = 0.0;
    for (std::size_t k = 1; k < row.explicit_count; ++k) {
        s += row.weights[k] * (line[side == Side::left ? k : last - k] - ref);
    }
    return s;
}

double interior_rhs(const CompactInteriorRow& row, std::span<const double> line, std::size_t i)
{
    return row.a * (line[i - 1] - line[i]) + row.c * (line[i + 1] - line[i]);
}

}  // namespace

void tdma_solve(std::span<const double> lower, std::span<const double> diag,
                std::span<const double> upper, std::span<const double> rhs,
                std::span<double> x, std::span<double> scratch)
{
    const std::size_t n = diag.size();
    if (n == 0) return;
    if (lower.size() + 1 != n || upper.size() + 1 != n || rhs.size() != n || x.size() != n ||
        scratch.size() < n) {
        throw ValidationError("inconsistent tridiagonal system sizes");
    }
    double scale = std::abs(diag[0]) + (n > 1 ? std::abs(upper[0]) : 0.0);
    check_pivot(diag[0], scale, 0);
    double pivot = diag[0];
    x[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i - 1] = upper[i - 1] / pivot;
        pivot = diag[i] - lower[i - 1] * scratch[i - 1];
        scale = std::abs(lower[i - 1]) + std::abs(diag[i]) + (i + 1 < n ? std::abs(upper[i]) : 0.0);
        check_pivot(pivot, scale, i);
        x[i] = (rhs[i] - lower[i - 1] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= scratch[i] * x[i + 1];
    }
}

std::vector<double> tdma_solve(const TridiagonalSystem& sys)
{
    std::vector<double> x(sys.diag.size());
    std::vector<double> scratch(sys.diag.size());
    tdma_solve(sys.lower, sys.diag, sys.upper, sys.rhs, x, scratch);
    return x;
}

void classical_second_derivative(std::span<const double> line, const AxisStencils& stencils,
                                 std::span<double> out)
{
    require_line(line, stencils);
    const std::size_t n = line.size();
    out[0] = 0.0;
    out[n - 1] = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const auto& c = stencils.classical[i];
        out[i] = c.a * (line[i - 1] - line[i]) + c.c * (line[i + 1] - line[i]);
    }
}

std::vector<double> classical_second_derivative(std::span<const double> line,
                                                const AxisStencils& stencils)
{
    std::vector<double> out(line.size());
    classical_second_derivative(line, stencils, out);
    return out;
}

TridiagonalSystem assemble_compact_system(std::span<const double> line,
                                          const AxisStencils& stencils)
{
    require_line(line, stencils);
    if (!stencils.has_compact) {
        throw ValidationError("line too short for the compact scheme with this closure");
    }
    const std::size_t n = line.size();
    TridiagonalSystem sys;
    sys.lower.resize(n - 1);
    sys.diag.resize(n);
    sys.upper.resize(n - 1);
    sys.rhs.resize(n);

    sys.diag[0] = stencils.left.boundary_weight;
    sys.upper[0] = stencils.left.adjacent_weight;
    sys.rhs[0] = closure_rhs(stencils.left, line, Side::left);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const auto& row = stencils.interior[i];
        sys.lower[i - 1] = row.alpha;
        sys.diag[i] = 1.0;
        sys.upper[i] = row.beta;
        sys.rhs[i] = interior_rhs(row, line, i);
    }
    sys.lower[n - 2] = stencils.right.adjacent_weight;
    sys.diag[n - 1] = stencils.right.boundary_weight;
    sys.rhs[n - 1] = closure_rhs(stencils.right, line, Side::right);
    return sys;
}

void CompactWorkspace::resize(std::size_t n)
{
    lower.resize(n);
    diag.resize(n);
    upper.resize(n);
    rhs.resize(n);
    scratch.resize(n);
    solution.resize(n);
}

void compact_second_derivative(std::span<const double> line, const AxisStencils& stencils,
                               std::span<double> out, CompactWorkspace& work)
{
    require_line(line, stencils);
    if (!stencils.has_compact) {
        throw ValidationError("line too short for the compact scheme with this closure");
    }
    const std::size_t n = line.size();
    const std::size_t last = n - 1;
    const std::size_t m = n - 2;  // interior unknowns, nodes 1..n-2
    work.resize(m);

    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = k + 1;
        const auto& row = stencils.interior[i];
        work.diag[k] = 1.0;
        work.rhs[k] = interior_rhs(row, line, i);
        if (k > 0) work.lower[k - 1] = row.alpha;
        if (k + 1 < m) work.upper[k] = row.beta;
    }

    // Fold the boundary closures into the first and last interior rows.
    const auto& left = stencils.left;
    const auto& first = stencils.interior[1];
    const double r_left = closure_rhs(left, line, Side::left);
    work.diag[0] = left.boundary_weight - first.alpha * left.adjacent_weight;
    work.upper[0] = left.boundary_weight * first.beta;
    work.rhs[0] = left.boundary_weight * work.rhs[0] - first.alpha * r_left;

    const auto& right = stencils.right;
    const auto& final = stencils.interior[last - 1];
    const double r_right = closure_rhs(right, line, Side::right);
    work.lower[m - 2] = right.boundary_weight * final.alpha;
    work.diag[m - 1] = right.boundary_weight - final.beta * right.adjacent_weight;
    work.rhs[m - 1] = right.boundary_weight * work.rhs[m - 1] - final.beta * r_right;

    tdma_solve(std::span(work.lower.data(), m - 1), std::span(work.diag.data(), m),
               std::span(work.upper.data(), m - 1), std::span(work.rhs.data(), m),
               std::span(work.solution.data(), m), std::span(work.scratch.data(), m));

    for (std::size_t k = 0; k < m; ++k) out[k + 1] = work.solution[k];

    // Recover the boundary derivatives from whichever row weights them more.
    if (std::abs(left.boundary_weight) >= std::abs(first.alpha)) {
        out[0] = (r_left - left.adjacent_weight * out[1]) / left.boundary_weight;
    } else {
        out[0] = (interior_rhs(first, line, 1) - out[1] - first.beta * out[2]) / first.alpha;
    }
    if (std::abs(right.boundary_weight) >= std::abs(final.beta)) {
        out[last] = (r_right - right.adjacent_weight * out[last - 1]) / right.boundary_weight;
    } else {
        out[last] = (interior_rhs(final, line, last - 1) - out[last - 1] -
                     final.alpha * out[last - 2]) /
                    final.beta;
    }
}

std::vector<double> compact_second_derivative(std::span<const double> line,
                                              const AxisStencils& stencils)
{
    std::vector<double> out(line.size());
    CompactWorkspace work;
    compact_second_derivative(line, stencils, out, work);
    return out;
}

std::vector<ScalarField> field_second_derivatives(const ScalarField& field,
                                                  const TensorGrid& grid,
                                                  const StencilSet& stencils, Scheme scheme)
{
    require_matching(field, grid);
    if (stencils.dimension() != grid.dimension()) {
        throw ValidationError("stencil set dimension does not match the grid");
    }
    std::vector<ScalarField> out;
    out.reserve(grid.dimension());
    CompactWorkspace work;
    std::vector<double> line, result;
    for (std::size_t d = 0; d < grid.dimension(); ++d) {
        ScalarField deriv(grid);
        const std::size_t n = grid.extent(d);
        const std::size_t stride = grid.stride(d);
        line.resize(n);
        result.resize(n);
        for (std::size_t start = 0; start < grid.node_count(); ++start) {
            if ((start / stride) % n != 0) continue;
            for (std::size_t i = 0; i < n; ++i) line[i] = field[start + i * stride];
            if (scheme == Scheme::low) {
                classical_second_derivative(line, stencils.axis(d), result);
            } else {
                compact_second_derivative(line, stencils.axis(d), result, work);
            }
            for (std::size_t i = 0; i < n; ++i) deriv[start + i * stride] = result[i];
        }
        out.push_back(std::move(deriv));
    }
    return out;
}

}  // namespace ccfd

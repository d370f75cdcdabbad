#include "ccfd/stencils.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ccfd/errors.hpp"

namespace ccfd {

namespace {

constexpr double kMaxCondition = 1e12;

void require_positive(double dx, const char* name)
{
    if (!(dx > 0.0) || !std::isfinite(dx)) {
        throw ValidationError(std::string(name) + " spacing must be positive, got " +
                              std::to_string(dx));
    }
}

double monomial(double t, int m)
{
    return m == 0 ? 1.0 : std::pow(t, m);
}

double monomial_second(double t, int m)
{
    return m < 2 ? 0.0 : m * (m - 1) * monomial(t, m - 2);
}

/// Dense LU with partial pivoting for the small moment systems.
class SmallLu {
public:
    explicit SmallLu(std::vector<std::vector<double>> a) : a_(std::move(a)), perm_(a_.size())
    {
        const std::size_t n = a_.size();
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            for (std::size_t i = k + 1; i < n; ++i) {
                if (std::abs(a_[i][k]) > std::abs(a_[p][k])) p = i;
            }
            std::swap(a_[k], a_[p]);
            std::swap(perm_[k], perm_[p]);
            if (a_[k][k] == 0.0) {
                singular_ = true;
                return;
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                a_[i][k] /= a_[k][k];
                for (std::size_t j = k + 1; j < n; ++j) a_[i][j] -= a_[i][k] * a_[k][j];
            }
        }
    }

    bool singular() const noexcept { return singular_; }

    std::vector<double> solve(const std::vector<double>& rhs) const
    {
        const std::size_t n = a_.size();
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = rhs[perm_[i]];
            for (std::size_t j = 0; j < i; ++j) s -= a_[i][j] * x[j];
            x[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= a_[i][j] * x[j];
            x[i] = s / a_[i][i];
        }
        return x;
    }

private:
    std::vector<std::vector<double>> a_;
    std::vector<std::size_t> perm_;
    bool singular_ = false;
};

double one_norm(const std::vector<std::vector<double>>& a)
{
    double best = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double s = 0.0;
        for (const auto& row : a) s += std::abs(row[j]);
        best = std::max(best, s);
    }
    return best;
}

}  // namespace

std::string_view to_string(BoundaryClosure closure)
{
    return closure == BoundaryClosure::three_point ? "three-point" : "four-point";
}

BoundaryClosure parse_boundary_closure(std::string_view name)
{
    if (name == "three-point") return BoundaryClosure::three_point;
    if (name == "four-point") return BoundaryClosure::four_point;
    throw ValidationError("unknown boundary closure '" + std::string(name) + "'");
}

double NodePositions::at(int offset) const
{
    int k = offset - first_offset;
    if (k < 0 || static_cast<std::size_t>(k) >= coords.size()) {
        throw ValidationError("stencil offset " + std::to_string(offset) +
                              " outside the supplied node positions");
    }
    return coords[static_cast<std::size_t>(k)];
}

MomentSolution taylor_match(const MomentStencil& stencil, const NodePositions& positions)
{
    const auto& imp = stencil.implicit_offsets;
    const auto& exp = stencil.explicit_offsets;
    auto norm_it = std::find(imp.begin(), imp.end(), stencil.normalized_offset);
    if (norm_it == imp.end()) {
        throw ValidationError("normalized offset must be one of the implicit offsets");
    }
    const std::size_t norm_pos = static_cast<std::size_t>(norm_it - imp.begin());
    const std::size_t n = imp.size() - 1 + exp.size();
    if (n == 0) throw ValidationError("stencil has no unknowns");

    const double x0 = positions.at(0);
    double scale = 0.0;
    for (int o : imp) scale = std::max(scale, std::abs(positions.at(o) - x0));
    for (int o : exp) scale = std::max(scale, std::abs(positions.at(o) - x0));
    if (!(scale > 0.0)) throw ValidationError("stencil nodes must be distinct");

    // Row m is divided by scale^(m-2) and explicit unknowns carry a factor
    // scale^2 so that every entry is O(1).
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    std::vector<double> rhs(n, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
        const int mi = static_cast<int>(m);
        std::size_t col = 0;
        for (std::size_t j = 0; j < imp.size(); ++j) {
            double t = (positions.at(imp[j]) - x0) / scale;
            if (j == norm_pos) {
                rhs[m] = -monomial_second(t, mi);
            } else {
                a[m][col++] = monomial_second(t, mi);
            }
        }
        for (int o : exp) {
            double t = (positions.at(o) - x0) / scale;
            a[m][col++] = -monomial(t, mi);
        }
    }

    SmallLu lu(a);
    if (lu.singular()) {
        throw DegenerateStencilError("moment matrix is singular",
                                     std::numeric_limits<double>::infinity());
    }
    double inv_norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        auto col = lu.solve(e);
        double s = 0.0;
        for (double v : col) s += std::abs(v);
        inv_norm = std::max(inv_norm, s);
    }
    const double condition = one_norm(a) * inv_norm;
    if (!(condition < kMaxCondition)) {
        throw DegenerateStencilError(
            "moment matrix is degenerate (condition estimate " + std::to_string(condition) + ")",
            condition);
    }
    auto x = lu.solve(rhs);

    MomentSolution out;
    out.condition_estimate = condition;
    out.implicit_weights.resize(imp.size());
    std::size_t col = 0;
    for (std::size_t j = 0; j < imp.size(); ++j) {
        out.implicit_weights[j] = j == norm_pos ? 1.0 : x[col++];
    }
    const double inv_scale2 = 1.0 / (scale * scale);
    for (std::size_t k = 0; k < exp.size(); ++k) {
        out.explicit_weights.push_back(x[col++] * inv_scale2);
    }
    for (std::size_t m = 0; m < n; ++m) {
        out.max_relative_residual = std::max(
            out.max_relative_residual, moment_residual(stencil, out, positions, static_cast<int>(m)));
    }
    return out;
}

double moment_residual(const MomentStencil& stencil, const MomentSolution& solution,
                       const NodePositions& positions, int m)
{
    const double x0 = positions.at(0);
    double lhs = 0.0;
    double mag = 0.0;
    for (std::size_t j = 0; j < stencil.implicit_offsets.size(); ++j) {
        double term = solution.implicit_weights[j] *
                      monomial_second(positions.at(stencil.implicit_offsets[j]) - x0, m);
        lhs += term;
        mag += std::abs(term);
    }
    double rhs = 0.0;
    for (std::size_t k = 0; k < stencil.explicit_offsets.size(); ++k) {
        double term = solution.explicit_weights[k] *
                      monomial(positions.at(stencil.explicit_offsets[k]) - x0, m);
        rhs += term;
        mag += std::abs(term);
    }
    return mag > 0.0 ? std::abs(lhs - rhs) / mag : 0.0;
}

ClassicalCoeffs classical_coeffs(double dx_left, double dx_right)
{
    require_positive(dx_left, "left");
    require_positive(dx_right, "right");
    const double sum = dx_left + dx_right;
    return {2.0 / (dx_left * sum), -2.0 / (dx_left * dx_right), 2.0 / (dx_right * sum)};
}

CompactInteriorRow compact_interior_coeffs(double dx_left, double dx_right)
{
    require_positive(dx_left, "left");
    require_positive(dx_right, "right");
    const std::array<double, 3> x{-dx_left, 0.0, dx_right};
    const MomentStencil stencil{{-1, 0, 1}, {-1, 0, 1}, 0};
    auto sol = taylor_match(stencil, NodePositions{-1, x});
    return {sol.implicit_weights[0], sol.implicit_weights[2], sol.explicit_weights[0],
            sol.explicit_weights[1], sol.explicit_weights[2]};
}

CompactBoundaryRow compact_boundary_coeffs(std::span<const double> inward_spacings, Side side,
                                           BoundaryClosure closure)
{
    const std::size_t count = closure == BoundaryClosure::three_point ? 3 : 4;
    if (inward_spacings.size() < count - 1) {
        throw ValidationError("boundary closure needs " + std::to_string(count - 1) +
                              " spacings");
    }
    // Offsets point inward: +k on the left, -k on the right.
    const int dir = side == Side::left ? 1 : -1;
    std::array<double, 4> coords{};
    double pos = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        if (k > 0) {
            require_positive(inward_spacings[k - 1], "boundary");
            pos += inward_spacings[k - 1];
        }
        std::size_t slot = side == Side::left ? k : count - 1 - k;
        coords[slot] = dir * pos;
    }
    MomentStencil stencil;
    stencil.implicit_offsets = {0, dir};
    for (std::size_t k = 0; k < count; ++k) stencil.explicit_offsets.push_back(dir * static_cast<int>(k));
    stencil.normalized_offset = closure == BoundaryClosure::three_point ? dir : 0;
    const int first = side == Side::left ? 0 : -static_cast<int>(count - 1);
    auto sol = taylor_match(stencil, NodePositions{first, std::span<const double>(coords.data(), count)});

    CompactBoundaryRow row;
    row.boundary_weight = sol.implicit_weights[0];
    row.adjacent_weight = sol.implicit_weights[1];
    row.explicit_count = count;
    for (std::size_t k = 0; k < count; ++k) row.weights[k] = sol.explicit_weights[k];
    return row;
}

std::size_t min_compact_nodes(BoundaryClosure closure)
{
    return closure == BoundaryClosure::three_point ? 4 : 5;
}

AxisStencils build_axis_stencils(const Axis& axis, BoundaryClosure closure)
{
    const std::size_t n = axis.size();
    if (n < 3) throw ValidationError("stencils need at least three nodes");
    auto dx = axis.spacings();

    AxisStencils out;
    out.closure = closure;
    out.classical.resize(n);
    out.interior.resize(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out.classical[i] = classical_coeffs(dx[i - 1], dx[i]);
        out.interior[i] = compact_interior_coeffs(dx[i - 1], dx[i]);
    }
    // The four-point closure makes the 4-node system singular on uniform
    // spacing, so it needs one more node.
    if (n >= min_compact_nodes(closure)) {
        std::array<double, 3> inward{};
        const std::size_t needed = closure == BoundaryClosure::three_point ? 2 : 3;
        for (std::size_t k = 0; k < needed; ++k) inward[k] = dx[k];
        out.left = compact_boundary_coeffs(std::span(inward.data(), needed), Side::left, closure);
        for (std::size_t k = 0; k < needed; ++k) inward[k] = dx[n - 2 - k];
        out.right = compact_boundary_coeffs(std::span(inward.data(), needed), Side::right, closure);
        out.has_compact = true;
    }
    return out;
}

StencilSet::StencilSet(const TensorGrid& grid, BoundaryClosure closure) : closure_(closure)
{
    axes_.reserve(grid.dimension());
    for (const auto& axis : grid.axes()) axes_.push_back(build_axis_stencils(axis, closure));
}

}  // namespace ccfd

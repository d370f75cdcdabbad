#include "ccfd/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccfd/errors.hpp"

namespace ccfd {

ScalarField::ScalarField(const TensorGrid& grid, double value)
    : extents_(grid.extents().begin(), grid.extents().end()), values_(grid.node_count(), value)
{
}

ScalarField::ScalarField(std::vector<std::size_t> extents, std::vector<double> values)
    : extents_(std::move(extents)), values_(std::move(values))
{
    std::size_t total = extents_.empty() ? 0 : 1;
    for (auto e : extents_) total *= e;
    if (total != values_.size()) {
        throw ValidationError("field has " + std::to_string(values_.size()) +
                              " values but its extents describe " + std::to_string(total));
    }
}

bool ScalarField::matches(const TensorGrid& grid) const
{
    return std::equal(extents_.begin(), extents_.end(), grid.extents().begin(),
                      grid.extents().end());
}

bool ScalarField::all_finite() const
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void require_matching(const ScalarField& field, const TensorGrid& grid)
{
    if (!field.matches(grid)) {
        throw ValidationError("field dimensions do not match the grid");
    }
}

void for_each_node(const TensorGrid& grid,
                   const std::function<void(std::size_t, std::span<const std::size_t>,
                                            std::span<const double>)>& fn)
{
    const std::size_t dim = grid.dimension();
    MultiIndex index(dim, 0);
    std::vector<double> coords(dim);
    for (std::size_t d = 0; d < dim; ++d) coords[d] = grid.axis(d).coord(0);
    for (std::size_t linear = 0; linear < grid.node_count(); ++linear) {
        fn(linear, index, coords);
        for (std::size_t d = 0; d < dim; ++d) {
            if (++index[d] < grid.extent(d)) {
                coords[d] = grid.axis(d).coord(index[d]);
                break;
            }
            index[d] = 0;
            coords[d] = grid.axis(d).coord(0);
        }
    }
}

ScalarField sample(const TensorGrid& grid, const PointFunction& fn)
{
    ScalarField field(grid);
    for_each_node(grid, [&](std::size_t linear, std::span<const std::size_t>,
                            std::span<const double> x) { field[linear] = fn(x); });
    return field;
}

}  // namespace ccfd

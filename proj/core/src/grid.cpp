#include "ccfd/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ccfd/errors.hpp"

namespace ccfd {

std::string_view to_string(AxisFamily family)
{
    switch (family) {
    case AxisFamily::uniform: return "uniform";
    case AxisFamily::sinh: return "sinh";
    case AxisFamily::tanh: return "tanh";
    }
    return "unknown";
}

AxisFamily parse_axis_family(std::string_view name)
{
    if (name == "uniform") return AxisFamily::uniform;
    if (name == "sinh") return AxisFamily::sinh;
    if (name == "tanh") return AxisFamily::tanh;
    throw ValidationError("unknown grid family '" + std::string(name) + "'");
}

void validate(const AxisSpec& spec)
{
    if (!(spec.length > 0.0) || !std::isfinite(spec.length)) {
        throw ValidationError("axis length must be positive and finite");
    }
    if (spec.node_count < 3) {
        throw ValidationError("axis node_count must be at least 3, got " +
                              std::to_string(spec.node_count));
    }
    if (spec.family != AxisFamily::uniform &&
        (!(spec.gamma > 0.0) || !std::isfinite(spec.gamma))) {
        throw ValidationError("axis gamma must be positive for the " +
                              std::string(to_string(spec.family)) + " family");
    }
}

Axis::Axis(std::vector<double> coords) : coords_(std::move(coords))
{
    if (coords_.size() < 2) {
        throw ValidationError("an axis needs at least two nodes");
    }
    spacings_.resize(coords_.size() - 1);
    for (std::size_t i = 0; i + 1 < coords_.size(); ++i) {
        spacings_[i] = coords_[i + 1] - coords_[i];
        if (!(spacings_[i] > 0.0)) {
            throw ValidationError("axis coordinates must be strictly increasing (node " +
                                  std::to_string(i) + ")");
        }
    }
}

Axis build_axis(const AxisSpec& spec)
{
    validate(spec);
    const std::size_t m = spec.node_count - 1;
    const double length = spec.length;
    std::vector<double> x(spec.node_count);

    auto stretched = [&](auto&& shape) {
        const double denom = shape(spec.gamma);
        for (std::size_t i = 0; i <= m; ++i) {
            double xi = static_cast<double>(i) / static_cast<double>(m);
            x[i] = length * (1.0 - shape(spec.gamma * (1.0 - xi)) / denom);
        }
    };

    switch (spec.family) {
    case AxisFamily::uniform:
        for (std::size_t i = 0; i <= m; ++i) {
            x[i] = static_cast<double>(i) * length / static_cast<double>(m);
        }
        break;
    case AxisFamily::sinh:
        stretched([](double t) { return std::sinh(t); });
        break;
    case AxisFamily::tanh:
        stretched([](double t) { return std::tanh(t); });
        break;
    }
    x.front() = 0.0;
    x.back() = length;
    return Axis(std::move(x));
}

TensorGrid::TensorGrid(std::vector<Axis> axes) : axes_(std::move(axes))
{
    extents_.resize(axes_.size());
    strides_.resize(axes_.size());
    node_count_ = axes_.empty() ? 0 : 1;
    interior_count_ = node_count_;
    for (std::size_t d = 0; d < axes_.size(); ++d) {
        extents_[d] = axes_[d].size();
        strides_[d] = node_count_;
        node_count_ *= extents_[d];
        interior_count_ *= extents_[d] - 2;
    }
}

std::size_t TensorGrid::linearize(std::span<const std::size_t> index) const
{
    std::size_t linear = 0;
    for (std::size_t d = 0; d < extents_.size(); ++d) {
        linear += index[d] * strides_[d];
    }
    return linear;
}

void TensorGrid::delinearize(std::size_t linear, std::span<std::size_t> index) const
{
    for (std::size_t d = 0; d < extents_.size(); ++d) {
        index[d] = linear % extents_[d];
        linear /= extents_[d];
    }
}

MultiIndex TensorGrid::delinearize(std::size_t linear) const
{
    MultiIndex index(extents_.size());
    delinearize(linear, index);
    return index;
}

bool TensorGrid::is_boundary(std::span<const std::size_t> index) const
{
    for (std::size_t d = 0; d < extents_.size(); ++d) {
        if (index[d] == 0 || index[d] + 1 == extents_[d]) return true;
    }
    return false;
}

bool TensorGrid::is_boundary(std::size_t linear) const
{
    for (std::size_t d = 0; d < extents_.size(); ++d) {
        std::size_t i = linear % extents_[d];
        if (i == 0 || i + 1 == extents_[d]) return true;
        linear /= extents_[d];
    }
    return false;
}

void TensorGrid::coordinates(std::span<const std::size_t> index, std::span<double> out) const
{
    for (std::size_t d = 0; d < axes_.size(); ++d) {
        out[d] = axes_[d].coord(index[d]);
    }
}

TensorGrid build_grid(std::span<const AxisSpec> specs, const GridLimits& limits)
{
    if (specs.empty()) {
        throw ValidationError("grid needs at least one axis");
    }
    if (specs.size() > limits.max_dimension) {
        throw ValidationError("grid dimension " + std::to_string(specs.size()) +
                              " exceeds the configured maximum " +
                              std::to_string(limits.max_dimension));
    }
    std::size_t total = 1;
    for (const auto& spec : specs) {
        validate(spec);
        if (spec.node_count > limits.max_nodes / total) {
            throw ValidationError("grid node count exceeds the configured cap of " +
                                  std::to_string(limits.max_nodes));
        }
        total *= spec.node_count;
    }
    std::vector<Axis> axes;
    axes.reserve(specs.size());
    for (const auto& spec : specs) {
        axes.push_back(build_axis(spec));
    }
    return TensorGrid(std::move(axes));
}

}  // namespace ccfd

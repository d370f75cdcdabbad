#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ccfd {

enum class AxisFamily { uniform, sinh, tanh };

std::string_view to_string(AxisFamily family);
AxisFamily parse_axis_family(std::string_view name);

/**
 * Description of one grid axis on [0, length].
 *
 * `node_count` includes both boundary nodes, so an axis with M intervals has
 * M + 1 nodes. `gamma` controls the clustering of the stretched families and
 * is ignored for the uniform one.
 */
struct AxisSpec {
    double length = 1.0;
    std::size_t node_count = 11;
    AxisFamily family = AxisFamily::uniform;
    double gamma = 1.0;

    friend bool operator==(const AxisSpec&, const AxisSpec&) = default;
};

/// Throws ValidationError naming the offending field.
void validate(const AxisSpec& spec);

/// Node coordinates of one axis together with the interval widths.
class Axis {
public:
    Axis() = default;
    explicit Axis(std::vector<double> coords);

    std::size_t size() const noexcept { return coords_.size(); }
    std::size_t intervals() const noexcept { return spacings_.size(); }

    std::span<const double> coords() const noexcept { return coords_; }
    std::span<const double> spacings() const noexcept { return spacings_; }

    double coord(std::size_t i) const { return coords_[i]; }
    /// Width of the interval [x_i, x_{i+1}].
    double spacing(std::size_t i) const { return spacings_[i]; }

private:
    std::vector<double> coords_;
    std::vector<double> spacings_;
};

/**
 * Builds the nodes of one axis.
 *
 * Uniform: x_i = i L / M. Stretched families use
 *
 *     x_i = L (1 - s(gamma (1 - xi_i)) / s(gamma)),   xi_i = i / M,
 *
 * with s = sinh or tanh. The sinh family is coarse at x = 0 and fine at
 * x = L; the tanh family is the opposite. Both endpoints are set exactly.
 */
Axis build_axis(const AxisSpec& spec);

struct GridLimits {
    std::size_t max_dimension = 4;
    std::size_t max_nodes = std::size_t{1} << 27;
};

/// Multi-index over grid nodes, one entry per axis.
using MultiIndex = std::vector<std::size_t>;

/**
 * Tensor product of independent axes.
 *
 * Nodes are linearised with axis 0 varying fastest:
 * linear = i_0 + n_0 (i_1 + n_1 (i_2 + ...)).
 */
class TensorGrid {
public:
    TensorGrid() = default;
    explicit TensorGrid(std::vector<Axis> axes);

    std::size_t dimension() const noexcept { return axes_.size(); }
    const Axis& axis(std::size_t d) const { return axes_[d]; }
    std::span<const Axis> axes() const noexcept { return axes_; }

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t interior_count() const noexcept { return interior_count_; }
    std::size_t extent(std::size_t d) const { return extents_[d]; }
    std::span<const std::size_t> extents() const noexcept { return extents_; }
    /// Distance in linear index between neighbours along axis d.
    std::size_t stride(std::size_t d) const { return strides_[d]; }

    std::size_t linearize(std::span<const std::size_t> index) const;
    void delinearize(std::size_t linear, std::span<std::size_t> index) const;
    MultiIndex delinearize(std::size_t linear) const;

    bool is_boundary(std::span<const std::size_t> index) const;
    bool is_boundary(std::size_t linear) const;

    /// Physical coordinates of a node, written into `out` (size = dimension).
    void coordinates(std::span<const std::size_t> index, std::span<double> out) const;

private:
    std::vector<Axis> axes_;
    std::vector<std::size_t> extents_;
    std::vector<std::size_t> strides_;
    std::size_t node_count_ = 0;
    std::size_t interior_count_ = 0;
};

TensorGrid build_grid(std::span<const AxisSpec> specs, const GridLimits& limits = {});

}  // namespace ccfd

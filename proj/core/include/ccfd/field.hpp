#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ccfd/grid.hpp"

namespace ccfd {

/// Function of the node coordinates (one entry per axis).
using PointFunction = std::function<double(std::span<const double>)>;

/// Nodal values over a tensor grid, stored in the grid's linear order.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const TensorGrid& grid, double value = 0.0);
    ScalarField(std::vector<std::size_t> extents, std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const std::size_t> extents() const noexcept { return extents_; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    bool matches(const TensorGrid& grid) const;
    bool all_finite() const;

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    std::vector<std::size_t> extents_;
    std::vector<double> values_;
};

/// Throws ValidationError when the field does not live on `grid`.
void require_matching(const ScalarField& field, const TensorGrid& grid);

/// Calls fn(linear, index, coords) for every node in linear order.
void for_each_node(const TensorGrid& grid,
                   const std::function<void(std::size_t, std::span<const std::size_t>,
                                            std::span<const double>)>& fn);

ScalarField sample(const TensorGrid& grid, const PointFunction& fn);

}  // namespace ccfd

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fracvar {

/// Uniform rectangular space-time grid over [a_0,b_0] x ... x [a_n,b_n].
/// Axis 0 is time by convention; node layout is row-major with axis 0 slowest.
class Grid {
public:
    static Grid make(std::vector<double> lower, std::vector<double> upper,
                     std::vector<std::size_t> nodes);

    std::size_t dims() const { return lower_.size(); }
    double lower(std::size_t axis) const { return lower_[axis]; }
    double upper(std::size_t axis) const { return upper_[axis]; }
    std::size_t nodes(std::size_t axis) const { return nodes_[axis]; }
    double spacing(std::size_t axis) const { return spacing_[axis]; }

    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    const std::vector<std::size_t>& nodes() const { return nodes_; }
    const std::vector<double>& spacing() const { return spacing_; }

    std::size_t node_count() const { return node_count_; }
    /// Row-major stride of an axis (product of node counts of faster axes).
    std::size_t stride(std::size_t axis) const { return stride_[axis]; }
    /// Product of all spacings, the uniform rectangle-rule cell weight.
    double cell_weight() const;

    std::size_t flat_index(std::span<const std::size_t> idx) const;
    void unflatten(std::size_t flat, std::span<std::size_t> idx) const;
    double coordinate(std::size_t axis, std::size_t idx) const {
        return lower_[axis] + static_cast<double>(idx) * spacing_[axis];
    }
    void node_coordinates(std::size_t flat, std::span<double> coords) const;
    bool is_boundary_node(std::size_t flat) const;

    bool operator==(const Grid& other) const;
    bool operator!=(const Grid& other) const { return !(*this == other); }

private:
    Grid() = default;
    std::vector<double> lower_, upper_, spacing_;
    std::vector<std::size_t> nodes_, stride_;
    std::size_t node_count_ = 0;
};

Grid make_grid(std::vector<double> lower, std::vector<double> upper,
               std::vector<std::size_t> nodes);

/// Real-valued multicomponent function sampled on a Grid.
/// Values are stored flat, component-major: values[c * node_count + node].
class Field {
public:
    Field(Grid grid, std::size_t components);

    const Grid& grid() const { return grid_; }
    std::size_t components() const { return components_; }

    double& at(std::size_t component, std::size_t node) {
        return values_[component * grid_.node_count() + node];
    }
    double at(std::size_t component, std::size_t node) const {
        return values_[component * grid_.node_count() + node];
    }
    std::span<double> component(std::size_t c) {
        return std::span<double>(values_).subspan(c * grid_.node_count(), grid_.node_count());
    }
    std::span<const double> component(std::size_t c) const {
        return std::span<const double>(values_).subspan(c * grid_.node_count(), grid_.node_count());
    }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double max_abs() const;

private:
    Grid grid_;
    std::size_t components_;
    std::vector<double> values_;
};

/// Pointwise sampler: receives node coordinates, writes m component values.
using SampleFn = std::function<void(std::span<const double> coords, std::span<double> out)>;

/// Sample f at every node. Throws std::domain_error naming the offending node
/// if f produces a non-finite value anywhere (including on the boundary).
Field sample(const Grid& grid, std::size_t components, const SampleFn& f);

/// Scalar convenience overload for single-component fields.
Field sample(const Grid& grid, const std::function<double(std::span<const double>)>& f);

/// One flag per node, true iff the node lies on the domain boundary.
class BoundaryMask {
public:
    explicit BoundaryMask(const Grid& grid);
    const Grid& grid() const { return grid_; }
    bool boundary(std::size_t node) const { return flags_[node] != 0; }
    std::size_t interior_count() const { return interior_count_; }

private:
    Grid grid_;
    std::vector<unsigned char> flags_;
    std::size_t interior_count_ = 0;
};

/// Copy of field with boundary-node values zeroed, interior untouched.
Field interior_projection(const Field& field, const BoundaryMask& mask);

/// Max absolute value of a single-component span over interior nodes.
double interior_max_abs(const Grid& grid, std::span<const double> values);

}  // namespace fracvar

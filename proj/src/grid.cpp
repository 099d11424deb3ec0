#include "fracvar/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracvar {

Grid Grid::make(std::vector<double> lower, std::vector<double> upper,
                std::vector<std::size_t> nodes) {
    if (lower.empty() || lower.size() != upper.size() || lower.size() != nodes.size()) {
        throw std::invalid_argument("grid: lower/upper/nodes length mismatch");
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i])) {
            throw std::invalid_argument("grid: non-finite bound on axis " + std::to_string(i));
        }
        if (!(upper[i] > lower[i])) {
            throw std::invalid_argument("grid: degenerate interval on axis " + std::to_string(i));
        }
        if (nodes[i] < 3) {
            throw std::invalid_argument("grid: need at least 3 nodes on axis " + std::to_string(i));
        }
    }
    Grid g;
    g.lower_ = std::move(lower);
    g.upper_ = std::move(upper);
    g.nodes_ = std::move(nodes);
    const std::size_t dims = g.lower_.size();
    g.spacing_.resize(dims);
    g.stride_.resize(dims);
    g.node_count_ = 1;
    for (std::size_t i = 0; i < dims; ++i) {
        g.spacing_[i] = (g.upper_[i] - g.lower_[i]) / static_cast<double>(g.nodes_[i] - 1);
        g.node_count_ *= g.nodes_[i];
    }
    std::size_t s = 1;
    for (std::size_t i = dims; i-- > 0;) {
        g.stride_[i] = s;
        s *= g.nodes_[i];
    }
    return g;
}

Grid make_grid(std::vector<double> lower, std::vector<double> upper,
               std::vector<std::size_t> nodes) {
    return Grid::make(std::move(lower), std::move(upper), std::move(nodes));
}

double Grid::cell_weight() const {
    double w = 1.0;
    for (double h : spacing_) w *= h;
    return w;
}

std::size_t Grid::flat_index(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) flat += idx[i] * stride_[i];
    return flat;
}

void Grid::unflatten(std::size_t flat, std::span<std::size_t> idx) const {
    for (std::size_t i = 0; i < idx.size(); ++i) {
        idx[i] = flat / stride_[i];
        flat %= stride_[i];
    }
}

void Grid::node_coordinates(std::size_t flat, std::span<double> coords) const {
    for (std::size_t i = 0; i < dims(); ++i) {
        const std::size_t idx = flat / stride_[i];
        flat %= stride_[i];
        coords[i] = coordinate(i, idx);
    }
}

bool Grid::is_boundary_node(std::size_t flat) const {
    for (std::size_t i = 0; i < dims(); ++i) {
        const std::size_t idx = flat / stride_[i];
        flat %= stride_[i];
        if (idx == 0 || idx == nodes_[i] - 1) return true;
    }
    return false;
}

bool Grid::operator==(const Grid& other) const {
    return lower_ == other.lower_ && upper_ == other.upper_ && nodes_ == other.nodes_;
}

Field::Field(Grid grid, std::size_t components)
    : grid_(std::move(grid)), components_(components),
      values_(components * grid_.node_count(), 0.0) {
    if (components_ == 0) throw std::invalid_argument("field: need at least one component");
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

Field sample(const Grid& grid, std::size_t components, const SampleFn& f) {
    Field field(grid, components);
    std::vector<double> coords(grid.dims());
    std::vector<double> out(components);
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        grid.node_coordinates(node, coords);
        f(coords, out);
        for (std::size_t c = 0; c < components; ++c) {
            if (!std::isfinite(out[c])) {
                throw std::domain_error("sample: non-finite value at node " +
                                        std::to_string(node) + ", component " +
                                        std::to_string(c));
            }
            field.at(c, node) = out[c];
        }
    }
    return field;
}

Field sample(const Grid& grid, const std::function<double(std::span<const double>)>& f) {
    return sample(grid, 1, [&f](std::span<const double> coords, std::span<double> out) {
        out[0] = f(coords);
    });
}

BoundaryMask::BoundaryMask(const Grid& grid) : grid_(grid), flags_(grid.node_count(), 0) {
    for (std::size_t node = 0; node < grid_.node_count(); ++node) {
        flags_[node] = grid_.is_boundary_node(node) ? 1 : 0;
        if (!flags_[node]) ++interior_count_;
    }
}

Field interior_projection(const Field& field, const BoundaryMask& mask) {
    if (field.grid() != mask.grid()) {
        throw std::invalid_argument("interior_projection: field and mask grids differ");
    }
    Field out = field;
    for (std::size_t c = 0; c < out.components(); ++c) {
        auto vals = out.component(c);
        for (std::size_t node = 0; node < out.grid().node_count(); ++node) {
            if (mask.boundary(node)) vals[node] = 0.0;
        }
    }
    return out;
}

double interior_max_abs(const Grid& grid, std::span<const double> values) {
    double m = 0.0;
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        if (!grid.is_boundary_node(node)) m = std::max(m, std::abs(values[node]));
    }
    return m;
}

}  // namespace fracvar

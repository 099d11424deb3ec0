#include "fracvar/fracops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fracvar/threading.hpp"

namespace fracvar {

namespace {

void check_order(double alpha) {
    if (!(alpha > 0.0) || !(alpha <= 1.0)) {
        throw std::invalid_argument("fractional order must lie in (0, 1], got " +
                                    std::to_string(alpha));
    }
}

double derivative_scale(double alpha, double h) {
    return alpha == 1.0 ? 1.0 / h : std::pow(h, -alpha);
}

double integral_scale(double alpha, double h) {
    return alpha == 1.0 ? h : std::pow(h, alpha);
}

FracOp make_op(OpKind kind, double alpha, std::size_t axis, double spacing,
               std::size_t count) {
    check_order(alpha);
    if (!(spacing > 0.0)) throw std::invalid_argument("operator spacing must be positive");
    if (count == 0) throw std::invalid_argument("operator needs at least one weight");
    FracOp op;
    op.kind = kind;
    op.order = alpha;
    op.axis = axis;
    op.spacing = spacing;
    if (is_derivative(kind)) {
        op.weights = gl_weights(alpha, count);
        const double s = derivative_scale(alpha, spacing);
        for (double& w : op.weights) w *= s;
    } else {
        op.weights = rl_integral_weights(alpha, count);
        const double s = integral_scale(alpha, spacing);
        for (double& w : op.weights) w *= s;
    }
    return op;
}

}  // namespace

bool is_derivative(OpKind kind) {
    return kind == OpKind::LeftDerivative || kind == OpKind::RightDerivative;
}

bool is_left(OpKind kind) {
    return kind == OpKind::LeftDerivative || kind == OpKind::LeftIntegral;
}

FracOrder FracOrder::make(std::vector<double> alpha) {
    if (alpha.empty()) throw std::invalid_argument("order: need at least one axis");
    for (double a : alpha) check_order(a);
    return FracOrder{std::move(alpha)};
}

FracOrder FracOrder::uniform(double alpha, std::size_t dims) {
    return make(std::vector<double>(dims, alpha));
}

std::vector<double> gl_weights(double alpha, std::size_t count) {
    check_order(alpha);
    if (count == 0) throw std::invalid_argument("gl_weights: count must be >= 1");
    std::vector<double> w(count);
    w[0] = 1.0;
    for (std::size_t k = 1; k < count; ++k) {
        w[k] = w[k - 1] * ((static_cast<double>(k) - 1.0 - alpha) / static_cast<double>(k));
    }
    return w;
}

std::vector<double> rl_integral_weights(double alpha, std::size_t count) {
    check_order(alpha);
    if (count == 0) throw std::invalid_argument("rl_integral_weights: count must be >= 1");
    std::vector<double> w(count);
    const double inv_gamma = 1.0 / std::tgamma(alpha + 1.0);
    for (std::size_t k = 0; k < count; ++k) {
        const double kd = static_cast<double>(k);
        w[k] = (std::pow(kd + 1.0, alpha) - std::pow(kd, alpha)) * inv_gamma;
    }
    return w;
}

FracOp FracOp::left_derivative(double alpha, std::size_t axis, double spacing, std::size_t count) {
    return make_op(OpKind::LeftDerivative, alpha, axis, spacing, count);
}
FracOp FracOp::right_derivative(double alpha, std::size_t axis, double spacing, std::size_t count) {
    return make_op(OpKind::RightDerivative, alpha, axis, spacing, count);
}
FracOp FracOp::left_integral(double alpha, std::size_t axis, double spacing, std::size_t count) {
    return make_op(OpKind::LeftIntegral, alpha, axis, spacing, count);
}
FracOp FracOp::right_integral(double alpha, std::size_t axis, double spacing, std::size_t count) {
    return make_op(OpKind::RightIntegral, alpha, axis, spacing, count);
}

FracOp FracOp::for_grid(OpKind kind, double alpha, std::size_t axis, const Grid& grid) {
    if (axis >= grid.dims()) throw std::invalid_argument("operator axis out of range");
    return make_op(kind, alpha, axis, grid.spacing(axis), grid.nodes(axis));
}

FracOp FracOp::adjoint() const {
    FracOp out = *this;
    switch (kind) {
        case OpKind::LeftDerivative:  out.kind = OpKind::RightDerivative; break;
        case OpKind::RightDerivative: out.kind = OpKind::LeftDerivative;  break;
        case OpKind::LeftIntegral:    out.kind = OpKind::RightIntegral;   break;
        case OpKind::RightIntegral:   out.kind = OpKind::LeftIntegral;    break;
    }
    return out;
}

void apply_axis_raw(const FracOp& op, const Grid& grid,
                    std::span<const double> in, std::span<double> out) {
    if (op.axis >= grid.dims()) throw std::invalid_argument("apply_axis: axis out of range");
    const double h = grid.spacing(op.axis);
    if (std::abs(op.spacing - h) > 1e-12 * h) {
        throw std::invalid_argument("apply_axis: operator spacing does not match grid axis");
    }
    const std::size_t n = grid.nodes(op.axis);
    if (op.weights.size() < n) {
        throw std::invalid_argument("apply_axis: operator weight table shorter than axis");
    }
    const std::size_t stride = grid.stride(op.axis);
    const std::size_t lines = grid.node_count() / n;
    const bool left = is_left(op.kind);
    const double* w = op.weights.data();

    parallel_for(lines, [&](std::size_t line) {
        // Lines are enumerated by collapsing the axis: base offset splits into
        // the slower-axes block and the faster-axes remainder.
        const std::size_t outer = line / stride;
        const std::size_t inner = line % stride;
        const std::size_t base = outer * n * stride + inner;
        std::vector<double> buf(n);
        for (std::size_t l = 0; l < n; ++l) buf[l] = in[base + l * stride];
        if (left) {
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k <= j; ++k) acc += w[k] * buf[j - k];
                out[base + j * stride] = acc;
            }
        } else {
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                const std::size_t kmax = n - 1 - j;
                for (std::size_t k = 0; k <= kmax; ++k) acc += w[k] * buf[j + k];
                out[base + j * stride] = acc;
            }
        }
    });
}

Field apply_axis(const FracOp& op, const Field& field, std::size_t component) {
    if (component >= field.components()) {
        throw std::invalid_argument("apply_axis: component out of range");
    }
    Field out(field.grid(), 1);
    apply_axis_raw(op, field.grid(), field.component(component), out.component(0));
    return out;
}

std::vector<Field> frac_gradient(const FracOrder& order, const Field& field,
                                 std::size_t component) {
    const Grid& grid = field.grid();
    if (order.dims() != grid.dims()) {
        throw std::invalid_argument("frac_gradient: order length does not match grid dims");
    }
    std::vector<Field> grads;
    grads.reserve(grid.dims());
    for (std::size_t axis = 0; axis < grid.dims(); ++axis) {
        const FracOp op = FracOp::for_grid(OpKind::LeftDerivative, order.alpha[axis], axis, grid);
        grads.push_back(apply_axis(op, field, component));
    }
    return grads;
}

}  // namespace fracvar

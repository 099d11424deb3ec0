#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracvar/grid.hpp"

namespace fracvar {

/// Per-axis Riemann-Liouville orders, each in (0, 1]. The value 1 is admitted
/// as the exact classical-limit operator (backward difference / Riemann sum).
struct FracOrder {
    std::vector<double> alpha;

    static FracOrder make(std::vector<double> alpha);
    static FracOrder uniform(double alpha, std::size_t dims);
    std::size_t dims() const { return alpha.size(); }
};

enum class OpKind { LeftDerivative, RightDerivative, LeftIntegral, RightIntegral };

bool is_derivative(OpKind kind);
bool is_left(OpKind kind);

/// Grunwald-Letnikov derivative weights from the binomial recurrence
/// w_0 = 1, w_k = w_{k-1} * (k - 1 - alpha) / k.  Unscaled.
std::vector<double> gl_weights(double alpha, std::size_t count);

/// Left-rectangle-rule integral weights ((k+1)^a - k^a) / Gamma(a+1).  Unscaled.
std::vector<double> rl_integral_weights(double alpha, std::size_t count);

/// A discretized 1D left or right Riemann-Liouville operator along one grid
/// axis, stored as a triangular Toeplitz weight sequence scaled by h^{-alpha}
/// (derivatives) or h^{alpha} (integrals).  Right-kind application is the
/// exact matrix transpose of the left-kind application with equal weights.
struct FracOp {
    OpKind kind;
    double order;
    std::size_t axis;
    double spacing;
    std::vector<double> weights;

    static FracOp left_derivative(double alpha, std::size_t axis, double spacing, std::size_t count);
    static FracOp right_derivative(double alpha, std::size_t axis, double spacing, std::size_t count);
    static FracOp left_integral(double alpha, std::size_t axis, double spacing, std::size_t count);
    static FracOp right_integral(double alpha, std::size_t axis, double spacing, std::size_t count);

    /// Operator along `axis` of `grid`, sized to that axis.
    static FracOp for_grid(OpKind kind, double alpha, std::size_t axis, const Grid& grid);

    /// Opposite handedness, identical weights: the exact transpose.
    FracOp adjoint() const;
};

/// Applies op along its axis to one component of the field, all other axes
/// held fixed.  Left kinds: out_j = sum_{k=0..j} w_k f_{j-k};  right kinds:
/// out_j = sum_{k=0..N-1-j} w_k f_{j+k}.  Returns a single-component field.
Field apply_axis(const FracOp& op, const Field& field, std::size_t component);

/// Raw span version of apply_axis for internal composition.
void apply_axis_raw(const FracOp& op, const Grid& grid,
                    std::span<const double> in, std::span<double> out);

/// Left partial RL derivative of the given component along every axis:
/// the discrete nabla^alpha.  One single-component field per axis.
std::vector<Field> frac_gradient(const FracOrder& order, const Field& field,
                                 std::size_t component);

}  // namespace fracvar

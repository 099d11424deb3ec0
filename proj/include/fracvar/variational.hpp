#pragma once

#include "fracvar/lagrangian.hpp"

namespace fracvar {

/// Discrete fractional Euler-Lagrange residual
///   R_j(x) = dL/du_j + sum_i (right RL derivative along axis i of dL/dg_ij),
/// with the right derivative realized as the exact transpose of the discrete
/// left operator so that R is the exact gradient of the discrete action.
struct ElResidual {
    Field field;           // m components
    double interior_norm;  // max |R_j| over interior nodes
};

ElResidual el_residual(const LagrangianDensity& density, const FracOrder& order,
                       const Field& u);

struct GradCheckReport {
    double quotient = 0.0;         // [J(u+eps h) - J(u-eps h)] / (2 eps)
    double quotient_half = 0.0;    // same at eps/2
    double quotient_extrap = 0.0;  // Richardson combination (4 q_half - q) / 3
    double pairing = 0.0;          // <R(u), h> with uniform cell weights
    double defect = 0.0;           // |quotient - pairing|
    double scale = 1.0;            // max(1, |quotient|, |pairing|)
    double threshold = 0.0;
    double eps = 0.0;
    bool pass = false;
};

/// Certifies that the residual is the gradient of the discrete action along a
/// boundary-zero variation.  Throws if the variation is nonzero on the
/// boundary.  Passes iff the central quotient matches the pairing within
/// max(1e-8 * scale, the measured eps^2 Richardson allowance).
GradCheckReport gradient_check(const LagrangianDensity& density, const FracOrder& order,
                               const Field& u, const Field& variation, double eps);

}  // namespace fracvar

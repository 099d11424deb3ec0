#pragma once

#include "fracvar/lagrangian.hpp"
#include "fracvar/variational.hpp"

namespace fracvar {

/// Infinitesimal symmetry generator xi(x), sampled on the grid.
struct Generator {
    Field xi;
    std::string label;
};

/// The power-product generator that leaves the wave functional invariant,
///   xi = prod_i (x_i - a_i)^{alpha_i - 1},
/// each factor lying in the kernel of its axis's left derivative.  Sampled
/// with value 0 at any node where a factor is singular (index 0 on an axis
/// with alpha < 1); axes with alpha = 1 contribute a constant factor 1.
/// Selectable from the CLI as "paper-example".
Generator paper_generator(const Grid& grid, const FracOrder& order);

Generator constant_generator(const Grid& grid, std::size_t components);

/// Bilinear conservation operator along one axis:
///   D^gamma(f, g) = f * (left derivative of g) - g * (right derivative of f),
/// the right derivative being the exact transpose of the left one.
Field d_op(double gamma, std::size_t axis, const Field& f, const Field& g);

/// Left side of the invariance necessary condition at every node:
///   N1(x) = sum_j dL/du_j xi_j + sum_j sum_i dL/dg_ij * (left deriv of xi_j).
Field invariance_residual(const LagrangianDensity& density, const FracOrder& order,
                          const Field& u, const Generator& gen);

struct NoetherReport {
    Field invariance_residual;  // N1
    Field noether_sum;          // S = sum_ij D^alpha_i(dL/dg_ij, xi_j)
    Field el_pairing;           // sum_j R_j xi_j
    double identity_defect;     // max |S - N1 + pairing| over interior nodes
    double conservation_norm;   // max |S| over interior nodes
    double invariance_norm;     // max |N1| over interior nodes
    double el_interior_norm;    // max |R_j| over interior nodes
    double xi_max;              // max |xi| over all nodes
    double scale;               // max interior magnitude of the three fields
};

/// Evaluates the fractional conservation sum together with the exact discrete
/// identity S = N1 - sum_j R_j xi_j linking it to the invariance residual and
/// the Euler-Lagrange residual.
NoetherReport noether_sum(const LagrangianDensity& density, const FracOrder& order,
                          const Field& u, const Generator& gen);

/// Discrete divergence (staggered transpose-difference form) of the classical
/// Noether current sum_j dL/dg_ij * xi_j.  Requires every effective order to
/// equal 1 and coincides with noether_sum in that limit.
Field classical_current_divergence(const LagrangianDensity& density, const FracOrder& order,
                                   const Field& u, const Generator& gen);

}  // namespace fracvar

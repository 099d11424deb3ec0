#include "fracvar/variational.hpp"

#include <cmath>
#include <stdexcept>

namespace fracvar {

ElResidual el_residual(const LagrangianDensity& density, const FracOrder& order,
                       const Field& u) {
    const Grid& grid = u.grid();
    const std::size_t m = density.components;
    const auto parts = detail::evaluate_partials(density, order, u);
    const FracOrder eff = detail::effective_order(density, order);

    Field residual(grid, m);
    std::vector<double> tmp(grid.node_count());
    for (std::size_t j = 0; j < m; ++j) {
        auto out = residual.component(j);
        for (std::size_t node = 0; node < grid.node_count(); ++node) {
            out[node] = parts.du[j][node];
        }
        for (std::size_t axis = 0; axis < grid.dims(); ++axis) {
            const FracOp right =
                FracOp::for_grid(OpKind::LeftDerivative, eff.alpha[axis], axis, grid).adjoint();
            apply_axis_raw(right, grid, parts.dg[axis * m + j], tmp);
            for (std::size_t node = 0; node < grid.node_count(); ++node) out[node] += tmp[node];
        }
    }

    double norm = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        norm = std::max(norm, interior_max_abs(grid, residual.component(j)));
    }
    for (double v : residual.values()) {
        if (!std::isfinite(v)) throw std::domain_error("el_residual: non-finite value");
    }
    return ElResidual{std::move(residual), norm};
}

GradCheckReport gradient_check(const LagrangianDensity& density, const FracOrder& order,
                               const Field& u, const Field& variation, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("gradient_check: eps must be positive");
    if (variation.grid() != u.grid() || variation.components() != u.components()) {
        throw std::invalid_argument("gradient_check: variation shape does not match field");
    }
    const Grid& grid = u.grid();
    for (std::size_t j = 0; j < variation.components(); ++j) {
        auto vals = variation.component(j);
        for (std::size_t node = 0; node < grid.node_count(); ++node) {
            if (grid.is_boundary_node(node) && vals[node] != 0.0) {
                throw std::invalid_argument("gradient_check: variation is nonzero on the boundary");
            }
        }
    }

    auto shifted = [&](double t) {
        Field w = u;
        for (std::size_t i = 0; i < w.values().size(); ++i) {
            w.values()[i] += t * variation.values()[i];
        }
        return action(density, order, w);
    };

    GradCheckReport rep;
    rep.eps = eps;
    rep.quotient = (shifted(eps) - shifted(-eps)) / (2.0 * eps);
    rep.quotient_half = (shifted(eps / 2.0) - shifted(-eps / 2.0)) / eps;
    rep.quotient_extrap = (4.0 * rep.quotient_half - rep.quotient) / 3.0;

    const ElResidual res = el_residual(density, order, u);
    double pairing = 0.0;
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        for (std::size_t j = 0; j < u.components(); ++j) {
            pairing += res.field.at(j, node) * variation.at(j, node);
        }
    }
    rep.pairing = pairing * grid.cell_weight();

    rep.defect = std::abs(rep.quotient - rep.pairing);
    rep.scale = std::max({1.0, std::abs(rep.quotient), std::abs(rep.pairing)});
    // One Richardson step isolates the eps^2 discretization error; quadratic
    // densities leave it at round-off level so the 1e-8 floor governs.
    const double eps2_allowance = (8.0 / 3.0) * std::abs(rep.quotient - rep.quotient_half);
    rep.threshold = std::max(1e-8 * rep.scale, eps2_allowance);
    rep.pass = rep.defect <= rep.threshold;
    return rep;
}

}  // namespace fracvar

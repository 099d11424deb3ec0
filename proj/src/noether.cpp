#include "fracvar/noether.hpp"

#include <cmath>
#include <stdexcept>

namespace fracvar {

namespace {

void check_generator(const LagrangianDensity& density, const Field& u, const Generator& gen) {
    if (gen.xi.grid() != u.grid()) {
        throw std::invalid_argument("generator lives on a different grid");
    }
    if (gen.xi.components() != density.components) {
        throw std::invalid_argument("generator component count does not match density");
    }
}

// Adds the staggered-current forward difference of xi_{l-1} * p_l along one
// axis, the alpha = 1 degeneration of D^gamma(p, xi).
void add_staggered_divergence(const Grid& grid, std::size_t axis,
                              std::span<const double> p, std::span<const double> xi,
                              std::span<double> out) {
    const std::size_t n = grid.nodes(axis);
    const std::size_t stride = grid.stride(axis);
    const std::size_t lines = grid.node_count() / n;
    const double inv_h = 1.0 / grid.spacing(axis);
    std::vector<double> pbuf(n), xbuf(n), cbuf(n + 1);
    for (std::size_t line = 0; line < lines; ++line) {
        const std::size_t outer = line / stride;
        const std::size_t inner = line % stride;
        const std::size_t base = outer * n * stride + inner;
        for (std::size_t l = 0; l < n; ++l) {
            pbuf[l] = p[base + l * stride];
            xbuf[l] = xi[base + l * stride];
        }
        cbuf[0] = 0.0;
        cbuf[n] = 0.0;
        for (std::size_t l = 1; l < n; ++l) cbuf[l] = xbuf[l - 1] * pbuf[l];
        for (std::size_t l = 0; l < n; ++l) {
            out[base + l * stride] += (cbuf[l + 1] - cbuf[l]) * inv_h;
        }
    }
}

}  // namespace

Generator paper_generator(const Grid& grid, const FracOrder& order) {
    if (order.dims() != grid.dims()) {
        throw std::invalid_argument("paper_generator: order length does not match grid");
    }
    Field xi(grid, 1);
    std::vector<std::size_t> idx(grid.dims());
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        grid.unflatten(node, idx);
        double v = 1.0;
        for (std::size_t i = 0; i < grid.dims(); ++i) {
            const double a = order.alpha[i];
            if (a == 1.0) continue;
            if (idx[i] == 0) {
                v = 0.0;  // singular factor sampled by the boundary convention
                break;
            }
            v *= std::pow(grid.coordinate(i, idx[i]) - grid.lower(i), a - 1.0);
        }
        xi.at(0, node) = v;
    }
    return Generator{std::move(xi), "paper-example"};
}

Generator constant_generator(const Grid& grid, std::size_t components) {
    Field xi(grid, components);
    for (double& v : xi.values()) v = 1.0;
    return Generator{std::move(xi), "constant"};
}

Field d_op(double gamma, std::size_t axis, const Field& f, const Field& g) {
    if (f.grid() != g.grid()) throw std::invalid_argument("d_op: fields on different grids");
    if (f.components() != 1 || g.components() != 1) {
        throw std::invalid_argument("d_op: expects single-component fields");
    }
    const Grid& grid = f.grid();
    const FracOp left = FracOp::for_grid(OpKind::LeftDerivative, gamma, axis, grid);
    const FracOp right = left.adjoint();
    std::vector<double> lg(grid.node_count()), rf(grid.node_count());
    apply_axis_raw(left, grid, g.component(0), lg);
    apply_axis_raw(right, grid, f.component(0), rf);
    Field out(grid, 1);
    auto o = out.component(0);
    auto fv = f.component(0);
    auto gv = g.component(0);
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        o[node] = fv[node] * lg[node] - gv[node] * rf[node];
    }
    return out;
}

Field invariance_residual(const LagrangianDensity& density, const FracOrder& order,
                          const Field& u, const Generator& gen) {
    check_generator(density, u, gen);
    const Grid& grid = u.grid();
    const std::size_t m = density.components;
    const auto parts = detail::evaluate_partials(density, order, u);
    const FracOrder eff = detail::effective_order(density, order);

    Field out(grid, 1);
    auto o = out.component(0);
    for (std::size_t j = 0; j < m; ++j) {
        auto xj = gen.xi.component(j);
        for (std::size_t node = 0; node < grid.node_count(); ++node) {
            o[node] += parts.du[j][node] * xj[node];
        }
    }
    std::vector<double> axi(grid.node_count());
    for (std::size_t axis = 0; axis < grid.dims(); ++axis) {
        const FracOp op = FracOp::for_grid(OpKind::LeftDerivative, eff.alpha[axis], axis, grid);
        for (std::size_t j = 0; j < m; ++j) {
            apply_axis_raw(op, grid, gen.xi.component(j), axi);
            const auto& p = parts.dg[axis * m + j];
            for (std::size_t node = 0; node < grid.node_count(); ++node) {
                o[node] += p[node] * axi[node];
            }
        }
    }
    return out;
}

NoetherReport noether_sum(const LagrangianDensity& density, const FracOrder& order,
                          const Field& u, const Generator& gen) {
    check_generator(density, u, gen);
    const Grid& grid = u.grid();
    const std::size_t m = density.components;
    const std::size_t dims = grid.dims();
    const auto parts = detail::evaluate_partials(density, order, u);
    const FracOrder eff = detail::effective_order(density, order);

    // Shared sub-expressions: left derivatives of xi and transposes of dL/dg.
    std::vector<std::vector<double>> axi(dims * m), atp(dims * m);
    for (std::size_t axis = 0; axis < dims; ++axis) {
        const FracOp left = FracOp::for_grid(OpKind::LeftDerivative, eff.alpha[axis], axis, grid);
        const FracOp right = left.adjoint();
        for (std::size_t j = 0; j < m; ++j) {
            axi[axis * m + j].resize(grid.node_count());
            atp[axis * m + j].resize(grid.node_count());
            apply_axis_raw(left, grid, gen.xi.component(j), axi[axis * m + j]);
            apply_axis_raw(right, grid, parts.dg[axis * m + j], atp[axis * m + j]);
        }
    }

    Field n1(grid, 1), s(grid, 1), pairing(grid, 1);
    auto n1v = n1.component(0);
    auto sv = s.component(0);
    auto pv = pairing.component(0);
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        double acc_n1 = 0.0, acc_s = 0.0, acc_pair = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double xj = gen.xi.at(j, node);
            acc_n1 += parts.du[j][node] * xj;
            double rj = parts.du[j][node];
            for (std::size_t axis = 0; axis < dims; ++axis) {
                const double p = parts.dg[axis * m + j][node];
                const double ax = axi[axis * m + j][node];
                const double ap = atp[axis * m + j][node];
                acc_n1 += p * ax;
                acc_s += p * ax - xj * ap;
                rj += ap;
            }
            acc_pair += rj * xj;
        }
        n1v[node] = acc_n1;
        sv[node] = acc_s;
        pv[node] = acc_pair;
    }

    NoetherReport rep{std::move(n1), std::move(s), std::move(pairing), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    auto n1c = rep.invariance_residual.component(0);
    auto sc = rep.noether_sum.component(0);
    auto pc = rep.el_pairing.component(0);
    double defect = 0.0;
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        if (grid.is_boundary_node(node)) continue;
        defect = std::max(defect, std::abs(sc[node] - n1c[node] + pc[node]));
    }
    rep.identity_defect = defect;
    rep.conservation_norm = interior_max_abs(grid, sc);
    rep.invariance_norm = interior_max_abs(grid, n1c);
    rep.scale = std::max({rep.conservation_norm, rep.invariance_norm,
                          interior_max_abs(grid, pc)});
    rep.xi_max = gen.xi.max_abs();

    double el_norm = 0.0;
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        if (grid.is_boundary_node(node)) continue;
        for (std::size_t j = 0; j < m; ++j) {
            double rj = parts.du[j][node];
            for (std::size_t axis = 0; axis < dims; ++axis) rj += atp[axis * m + j][node];
            el_norm = std::max(el_norm, std::abs(rj));
        }
    }
    rep.el_interior_norm = el_norm;
    return rep;
}

Field classical_current_divergence(const LagrangianDensity& density, const FracOrder& order,
                                   const Field& u, const Generator& gen) {
    check_generator(density, u, gen);
    const FracOrder eff = detail::effective_order(density, order);
    for (double a : eff.alpha) {
        if (a != 1.0) {
            throw std::invalid_argument(
                "classical_current_divergence: every order must equal 1");
        }
    }
    const Grid& grid = u.grid();
    const std::size_t m = density.components;
    const auto parts = detail::evaluate_partials(density, order, u);

    Field out(grid, 1);
    auto o = out.component(0);
    for (std::size_t axis = 0; axis < grid.dims(); ++axis) {
        for (std::size_t j = 0; j < m; ++j) {
            add_staggered_divergence(grid, axis, parts.dg[axis * m + j],
                                     gen.xi.component(j), o);
        }
    }
    return out;
}

}  // namespace fracvar

#include "fracvar/lagrangian.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fracvar {

MaterialParams MaterialParams::make(double rho, double k) {
    if (!(rho > 0.0)) throw std::invalid_argument("material: rho must be positive");
    if (!(k > 0.0)) throw std::invalid_argument("material: k must be positive");
    return MaterialParams{rho, k};
}

LagrangianDensity builtin_poisson(Field source) {
    if (source.components() != 1) {
        throw std::invalid_argument("poisson density: source must be single-component");
    }
    LagrangianDensity d;
    d.components = 1;
    d.dims = source.grid().dims();
    d.label = "poisson";
    const std::size_t dims = d.dims;
    d.value = [dims](const DensityInput& in) {
        double s = 0.0;
        for (std::size_t i = 0; i < dims; ++i) s += in.g[i] * in.g[i];
        return 0.5 * s - in.coeff[0] * in.u[0];
    };
    d.du = [](const DensityInput& in, std::span<double> out) { out[0] = -in.coeff[0]; };
    d.dg = [dims](const DensityInput& in, std::span<double> out) {
        for (std::size_t i = 0; i < dims; ++i) out[i] = in.g[i];
    };
    d.coefficients.push_back(std::move(source));
    return d;
}

LagrangianDensity builtin_wave(const MaterialParams& params, bool fractional_space,
                               std::size_t dims) {
    if (dims < 2) throw std::invalid_argument("wave density: grid needs at least 2 axes");
    MaterialParams::make(params.rho, params.k);
    LagrangianDensity d;
    d.components = 1;
    d.dims = dims;
    d.label = fractional_space ? "wave-frac-space" : "wave-classical-space";
    const double rho = params.rho;
    const double k = params.k;
    d.value = [rho, k, dims](const DensityInput& in) {
        double spatial = 0.0;
        for (std::size_t i = 1; i < dims; ++i) spatial += in.g[i] * in.g[i];
        return 0.5 * (rho * in.g[0] * in.g[0] - k * spatial);
    };
    d.du = [](const DensityInput&, std::span<double> out) { out[0] = 0.0; };
    d.dg = [rho, k, dims](const DensityInput& in, std::span<double> out) {
        out[0] = rho * in.g[0];
        for (std::size_t i = 1; i < dims; ++i) out[i] = -k * in.g[i];
    };
    if (!fractional_space) {
        d.classical_axes.assign(dims, 0);
        for (std::size_t i = 1; i < dims; ++i) d.classical_axes[i] = 1;
    }
    return d;
}

LagrangianDensity with_source(LagrangianDensity base, Field source) {
    if (source.components() != 1) {
        throw std::invalid_argument("with_source: source must be single-component");
    }
    LagrangianDensity d = base;
    const std::size_t slot = d.coefficients.size();
    d.coefficients.push_back(std::move(source));
    d.label = base.label + "+source";
    auto base_value = base.value;
    auto base_du = base.du;
    d.value = [base_value, slot](const DensityInput& in) {
        return base_value(in) - in.coeff[slot] * in.u[0];
    };
    d.du = [base_du, slot](const DensityInput& in, std::span<double> out) {
        base_du(in, out);
        out[0] -= in.coeff[slot];
    };
    return d;
}

LagrangianDensity builtin_by_label(const std::string& label, const Grid& grid,
                                   const MaterialParams& params, const Field* source) {
    if (label == "poisson") {
        if (source == nullptr) throw std::invalid_argument("poisson density requires a source");
        return builtin_poisson(*source);
    }
    if (label == "wave-frac-space" || label == "wave-classical-space") {
        LagrangianDensity d = builtin_wave(params, label == "wave-frac-space", grid.dims());
        if (source != nullptr) d = with_source(std::move(d), *source);
        return d;
    }
    throw std::invalid_argument("unknown density label: " + label);
}

namespace detail {

void check_density_shape(const LagrangianDensity& density, const Field& u) {
    if (density.components != u.components()) {
        throw std::invalid_argument("density component count does not match field");
    }
    if (density.dims != u.grid().dims()) {
        throw std::invalid_argument("density axis count does not match grid");
    }
    for (const Field& c : density.coefficients) {
        if (c.grid() != u.grid()) {
            throw std::invalid_argument("density coefficient field lives on a different grid");
        }
    }
    if (!density.classical_axes.empty() && density.classical_axes.size() != density.dims) {
        throw std::invalid_argument("density classical_axes length does not match dims");
    }
}

FracOrder effective_order(const LagrangianDensity& density, const FracOrder& order) {
    FracOrder eff = order;
    if (!density.classical_axes.empty()) {
        for (std::size_t i = 0; i < eff.alpha.size() && i < density.classical_axes.size(); ++i) {
            if (density.classical_axes[i]) eff.alpha[i] = 1.0;
        }
    }
    return eff;
}

std::vector<std::vector<double>> compute_gradients(const LagrangianDensity& density,
                                                   const FracOrder& order, const Field& u) {
    const Grid& grid = u.grid();
    const FracOrder eff = effective_order(density, order);
    if (eff.dims() != grid.dims()) {
        throw std::invalid_argument("order length does not match grid dims");
    }
    const std::size_t m = u.components();
    std::vector<std::vector<double>> grad(grid.dims() * m);
    for (std::size_t axis = 0; axis < grid.dims(); ++axis) {
        const FracOp op = FracOp::for_grid(OpKind::LeftDerivative, eff.alpha[axis], axis, grid);
        for (std::size_t j = 0; j < m; ++j) {
            grad[axis * m + j].resize(grid.node_count());
            apply_axis_raw(op, grid, u.component(j), grad[axis * m + j]);
        }
    }
    return grad;
}

DensityPartials evaluate_partials(const LagrangianDensity& density, const FracOrder& order,
                                  const Field& u) {
    check_density_shape(density, u);
    const Grid& grid = u.grid();
    const std::size_t m = density.components;
    const std::size_t dims = density.dims;
    DensityPartials out;
    out.grad = compute_gradients(density, order, u);
    out.du.assign(m, std::vector<double>(grid.node_count()));
    out.dg.assign(dims * m, std::vector<double>(grid.node_count()));

    std::vector<double> ubuf(m), gbuf(m * dims), cbuf(density.coefficients.size());
    std::vector<double> dubuf(m), dgbuf(m * dims);
    DensityInput in{ubuf, gbuf, cbuf};
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        for (std::size_t j = 0; j < m; ++j) {
            ubuf[j] = u.at(j, node);
            for (std::size_t i = 0; i < dims; ++i) gbuf[j * dims + i] = out.grad[i * m + j][node];
        }
        for (std::size_t c = 0; c < cbuf.size(); ++c) cbuf[c] = density.coefficients[c].at(0, node);
        density.du(in, dubuf);
        density.dg(in, dgbuf);
        for (std::size_t j = 0; j < m; ++j) {
            out.du[j][node] = dubuf[j];
            for (std::size_t i = 0; i < dims; ++i) out.dg[i * m + j][node] = dgbuf[j * dims + i];
        }
    }
    return out;
}

}  // namespace detail

double action(const LagrangianDensity& density, const FracOrder& order, const Field& u) {
    detail::check_density_shape(density, u);
    const Grid& grid = u.grid();
    const std::size_t m = density.components;
    const std::size_t dims = density.dims;
    const auto grad = detail::compute_gradients(density, order, u);

    std::vector<double> ubuf(m), gbuf(m * dims), cbuf(density.coefficients.size());
    DensityInput in{ubuf, gbuf, cbuf};
    double total = 0.0;
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        for (std::size_t j = 0; j < m; ++j) {
            ubuf[j] = u.at(j, node);
            for (std::size_t i = 0; i < dims; ++i) gbuf[j * dims + i] = grad[i * m + j][node];
        }
        for (std::size_t c = 0; c < cbuf.size(); ++c) cbuf[c] = density.coefficients[c].at(0, node);
        const double v = density.value(in);
        if (!std::isfinite(v)) {
            throw std::domain_error("action: non-finite density value at node " +
                                    std::to_string(node));
        }
        total += v;
    }
    return total * grid.cell_weight();
}

PartialsReport validate_partials(const LagrangianDensity& density, std::size_t trials,
                                 std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("validate_partials: trials must be >= 1");
    const std::size_t m = density.components;
    const std::size_t dims = density.dims;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    std::size_t node_count = 1;
    if (!density.coefficients.empty()) node_count = density.coefficients[0].grid().node_count();

    PartialsReport report;
    std::vector<double> ubuf(m), gbuf(m * dims), cbuf(density.coefficients.size());
    std::vector<double> dubuf(m), dgbuf(m * dims);
    DensityInput in{ubuf, gbuf, cbuf};
    const double step = 1e-5;

    for (std::size_t trial = 0; trial < trials; ++trial) {
        for (double& v : ubuf) v = unit(rng);
        for (double& v : gbuf) v = unit(rng);
        const std::size_t node =
            node_count > 1 ? static_cast<std::size_t>(rng() % node_count) : 0;
        for (std::size_t c = 0; c < cbuf.size(); ++c) cbuf[c] = density.coefficients[c].at(0, node);

        density.du(in, dubuf);
        density.dg(in, dgbuf);
        auto record = [&](double analytic, double fd, const char* kind, std::size_t index) {
            const double err = std::abs(fd - analytic) / std::max(1.0, std::abs(analytic));
            if (err > report.max_rel_error) {
                report.max_rel_error = err;
                report.worst_trial = trial;
                report.worst_kind = kind;
                report.worst_index = index;
            }
        };
        for (std::size_t j = 0; j < m; ++j) {
            const double saved = ubuf[j];
            ubuf[j] = saved + step;
            const double plus = density.value(in);
            ubuf[j] = saved - step;
            const double minus = density.value(in);
            ubuf[j] = saved;
            record(dubuf[j], (plus - minus) / (2.0 * step), "du", j);
        }
        for (std::size_t idx = 0; idx < m * dims; ++idx) {
            const double saved = gbuf[idx];
            gbuf[idx] = saved + step;
            const double plus = density.value(in);
            gbuf[idx] = saved - step;
            const double minus = density.value(in);
            gbuf[idx] = saved;
            record(dgbuf[idx], (plus - minus) / (2.0 * step), "dg", idx);
        }
    }
    report.pass = report.max_rel_error <= 1e-6;
    return report;
}

}  // namespace fracvar

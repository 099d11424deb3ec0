#include "fracvar/solver.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fracvar/threading.hpp"

namespace fracvar {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

struct IterativeResult {
    std::vector<double> x;
    std::size_t iterations = 0;
    bool converged = false;
};

IterativeResult conjugate_gradient(const InteriorOperator& op, std::span<const double> b,
                                   double tol, std::size_t max_iter) {
    const std::size_t n = b.size();
    IterativeResult res;
    res.x.assign(n, 0.0);
    std::vector<double> r(b.begin(), b.end()), p(r), q(n);
    const double nb = norm2(b);
    double rs = dot(r, r);
    if (std::sqrt(rs) <= tol * nb) {
        res.converged = true;
        return res;
    }
    for (std::size_t it = 1; it <= max_iter; ++it) {
        op.apply(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) {
            res.iterations = it;
            return res;  // loss of positive definiteness; flagged by caller
        }
        const double alpha = rs / pq;
        for (std::size_t i = 0; i < n; ++i) res.x[i] += alpha * p[i];
        for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * q[i];
        const double rs_new = dot(r, r);
        res.iterations = it;
        if (std::sqrt(rs_new) <= tol * nb) {
            res.converged = true;
            return res;
        }
        const double beta = rs_new / rs;
        rs = rs_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    return res;
}

// Standard Paige-Saunders MINRES for the symmetric indefinite wave operator.
IterativeResult minres(const InteriorOperator& op, std::span<const double> b,
                       double tol, std::size_t max_iter) {
    const std::size_t n = b.size();
    IterativeResult res;
    res.x.assign(n, 0.0);
    const double beta1 = norm2(b);
    if (beta1 == 0.0) {
        res.converged = true;
        return res;
    }
    std::vector<double> r1(b.begin(), b.end()), r2(r1), y(r1);
    std::vector<double> v(n), w(n, 0.0), w1(n, 0.0), w2(n, 0.0), tmp(n);
    double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
    double cs = -1.0, sn = 0.0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        const double inv_beta = 1.0 / beta;
        for (std::size_t i = 0; i < n; ++i) v[i] = y[i] * inv_beta;
        op.apply(v, tmp);
        if (it >= 2) {
            const double c = beta / oldb;
            for (std::size_t i = 0; i < n; ++i) tmp[i] -= c * r1[i];
        }
        const double alfa = dot(v, tmp);
        const double c2 = alfa / beta;
        for (std::size_t i = 0; i < n; ++i) tmp[i] -= c2 * r2[i];
        r1 = r2;
        r2 = tmp;
        y = r2;
        oldb = beta;
        beta = norm2(y);

        const double oldeps = epsln;
        const double delta = cs * dbar + sn * alfa;
        const double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        double gamma = std::sqrt(gbar * gbar + beta * beta);
        gamma = std::max(gamma, 1e-300);
        cs = gbar / gamma;
        sn = beta / gamma;
        const double phi = cs * phibar;
        phibar = sn * phibar;

        const double denom = 1.0 / gamma;
        w1 = w2;
        w2 = w;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) * denom;
        }
        for (std::size_t i = 0; i < n; ++i) res.x[i] += phi * w[i];
        res.iterations = it;
        if (phibar <= tol * beta1) {
            res.converged = true;
            return res;
        }
    }
    return res;
}

struct DenseLU {
    std::size_t n = 0;
    std::vector<double> a;  // row-major, overwritten with LU factors
    std::vector<std::size_t> piv;
    double cond_estimate = 0.0;
    bool near_singular = false;
};

DenseLU dense_factor(std::vector<double> a, std::size_t n) {
    DenseLU lu;
    lu.n = n;
    lu.a = std::move(a);
    lu.piv.resize(n);
    double* m = lu.a.data();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(m[k * n + k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(m[i * n + k]);
            if (v > best) {
                best = v;
                p = i;
            }
        }
        lu.piv[k] = p;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[p * n + j]);
        }
        const double pivot = m[k * n + k];
        if (pivot == 0.0) {
            lu.near_singular = true;
            continue;
        }
        parallel_for(n - k - 1, [&](std::size_t t) {
            const std::size_t i = k + 1 + t;
            const double l = m[i * n + k] / pivot;
            m[i * n + k] = l;
            const double* rowk = m + k * n;
            double* rowi = m + i * n;
            for (std::size_t j = k + 1; j < n; ++j) rowi[j] -= l * rowk[j];
        });
    }
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const double d = std::abs(m[k * n + k]);
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    lu.cond_estimate = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();
    if (!(dmin > 1e-14 * dmax)) lu.near_singular = true;
    return lu;
}

std::vector<double> dense_solve(const DenseLU& lu, std::span<const double> b) {
    const std::size_t n = lu.n;
    const double* m = lu.a.data();
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t k = 0; k < n; ++k) {
        if (lu.piv[k] != k) std::swap(x[k], x[lu.piv[k]]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = k + 1; i < n; ++i) x[i] -= m[i * n + k] * x[k];
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t j = k + 1; j < n; ++j) x[k] -= m[k * n + j] * x[j];
        x[k] /= m[k * n + k];
    }
    return x;
}

}  // namespace

std::string kind_label(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::Poisson: return "poisson";
        case ProblemKind::WaveFracSpace: return "wave-frac-space";
        case ProblemKind::WaveClassicalSpace: return "wave-classical-space";
    }
    return "unknown";
}

ProblemKind kind_from_label(const std::string& label) {
    if (label == "poisson") return ProblemKind::Poisson;
    if (label == "wave-frac-space") return ProblemKind::WaveFracSpace;
    if (label == "wave-classical-space") return ProblemKind::WaveClassicalSpace;
    throw std::invalid_argument("unknown problem kind: " + label);
}

LinearProblem LinearProblem::make(ProblemKind kind, Grid grid, FracOrder order,
                                  std::optional<MaterialParams> params,
                                  std::optional<Field> source, Field dirichlet) {
    if (order.dims() != grid.dims()) {
        throw std::invalid_argument("problem: order length does not match grid");
    }
    if (dirichlet.grid() != grid || dirichlet.components() != 1) {
        throw std::invalid_argument("problem: dirichlet field must be single-component on the grid");
    }
    if (kind == ProblemKind::Poisson) {
        if (!source.has_value()) throw std::invalid_argument("poisson problem requires a source");
    } else {
        if (!params.has_value()) throw std::invalid_argument("wave problem requires material params");
        if (grid.dims() < 2) throw std::invalid_argument("wave problem needs at least 2 axes");
        if (params) MaterialParams::make(params->rho, params->k);
    }
    if (source && (source->grid() != grid || source->components() != 1)) {
        throw std::invalid_argument("problem: source field must be single-component on the grid");
    }
    return LinearProblem{kind, std::move(grid), std::move(order), std::move(params),
                         std::move(source), std::move(dirichlet)};
}

FracOrder LinearProblem::effective_order() const {
    FracOrder eff = order;
    if (kind == ProblemKind::WaveClassicalSpace) {
        for (std::size_t i = 1; i < eff.alpha.size(); ++i) eff.alpha[i] = 1.0;
    }
    return eff;
}

LagrangianDensity LinearProblem::density() const {
    if (kind == ProblemKind::Poisson) return builtin_poisson(*source);
    LagrangianDensity d = builtin_wave(*params, kind == ProblemKind::WaveFracSpace, grid.dims());
    if (source.has_value()) d = with_source(std::move(d), *source);
    return d;
}

ProblemOperator::ProblemOperator(ProblemKind kind, const Grid& grid, const FracOrder& order,
                                 std::optional<MaterialParams> params)
    : grid_(grid) {
    if (order.dims() != grid.dims()) {
        throw std::invalid_argument("operator: order length does not match grid");
    }
    FracOrder eff = order;
    if (kind == ProblemKind::WaveClassicalSpace) {
        for (std::size_t i = 1; i < eff.alpha.size(); ++i) eff.alpha[i] = 1.0;
    }
    const bool wave = kind != ProblemKind::Poisson;
    if (wave && !params.has_value()) {
        throw std::invalid_argument("operator: wave kinds require material params");
    }
    for (std::size_t axis = 0; axis < grid.dims(); ++axis) {
        left_.push_back(FracOp::for_grid(OpKind::LeftDerivative, eff.alpha[axis], axis, grid));
        right_.push_back(left_.back().adjoint());
        double c = 1.0;
        if (wave) c = axis == 0 ? params->rho : -params->k;
        axis_coeff_.push_back(c);
    }
}

void ProblemOperator::full_apply(std::span<const double> u, std::span<double> out) const {
    const std::size_t count = grid_.node_count();
    std::vector<double> a(count), b(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = 0.0;
    for (std::size_t axis = 0; axis < grid_.dims(); ++axis) {
        apply_axis_raw(left_[axis], grid_, u, a);
        apply_axis_raw(right_[axis], grid_, a, b);
        const double c = axis_coeff_[axis];
        for (std::size_t i = 0; i < count; ++i) out[i] += c * b[i];
    }
}

InteriorOperator::InteriorOperator(const LinearProblem& problem)
    : op_(problem.kind, problem.grid, problem.order, problem.params) {
    const Grid& grid = problem.grid;
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        if (!grid.is_boundary_node(node)) interior_.push_back(node);
    }
    full_in_.resize(grid.node_count());
    full_out_.resize(grid.node_count());

    // Dirichlet lifting: b = f_I - (W u_b)_I with u_b boundary-supported.
    std::vector<double> lift(grid.node_count(), 0.0), lifted(grid.node_count());
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        if (grid.is_boundary_node(node)) lift[node] = problem.dirichlet.at(0, node);
    }
    op_.full_apply(lift, lifted);
    rhs_.resize(interior_.size());
    for (std::size_t i = 0; i < interior_.size(); ++i) {
        const double f = problem.source ? problem.source->at(0, interior_[i]) : 0.0;
        rhs_[i] = f - lifted[interior_[i]];
    }
}

void InteriorOperator::apply(std::span<const double> v, std::span<double> out) const {
    std::fill(full_in_.begin(), full_in_.end(), 0.0);
    for (std::size_t i = 0; i < interior_.size(); ++i) full_in_[interior_[i]] = v[i];
    op_.full_apply(full_in_, full_out_);
    for (std::size_t i = 0; i < interior_.size(); ++i) out[i] = full_out_[interior_[i]];
}

std::vector<double> InteriorOperator::folded_rhs() const { return rhs_; }

SolveResult solve(const LinearProblem& problem, const SolveOptions& options) {
    if (!(options.tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
    const Grid& grid = problem.grid;
    InteriorOperator op(problem);
    const std::vector<double> b = op.folded_rhs();
    const std::size_t n = op.unknowns();
    const double nb = norm2(b);

    SolveResult result{Field(grid, 1)};
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        result.u.at(0, node) =
            grid.is_boundary_node(node) ? problem.dirichlet.at(0, node) : 0.0;
    }

    SolveMethod method = options.method;
    if (method == SolveMethod::Auto) {
        if (problem.kind == ProblemKind::Poisson) {
            method = SolveMethod::ConjugateGradient;
        } else {
            method = n <= options.dense_cap ? SolveMethod::DenseDirect : SolveMethod::Minres;
        }
    }
    if (method == SolveMethod::DenseDirect && n > options.dense_cap) {
        throw std::invalid_argument("solve: dense direct method exceeds the unknown-count cap");
    }

    std::vector<double> x(n, 0.0);
    if (nb == 0.0) {
        result.method = "trivial";
        result.converged = true;
    } else if (method == SolveMethod::ConjugateGradient) {
        IterativeResult it = conjugate_gradient(op, b, options.tol, options.max_iter);
        x = std::move(it.x);
        result.iterations = it.iterations;
        result.converged = it.converged;
        result.method = "cg";
    } else if (method == SolveMethod::Minres) {
        IterativeResult it = minres(op, b, options.tol, options.max_iter);
        x = std::move(it.x);
        result.iterations = it.iterations;
        result.converged = it.converged;
        result.method = "minres";
    } else {
        std::vector<double> mat(n * n);
        std::vector<double> e(n, 0.0), col(n);
        for (std::size_t j = 0; j < n; ++j) {
            e[j] = 1.0;
            op.apply(e, col);
            e[j] = 0.0;
            for (std::size_t i = 0; i < n; ++i) mat[i * n + j] = col[i];
        }
        DenseLU lu = dense_factor(std::move(mat), n);
        result.condition_estimate = lu.cond_estimate;
        result.flagged_near_singular = lu.near_singular;
        if (!lu.near_singular) {
            x = dense_solve(lu, b);
            result.converged = true;
        }
        result.iterations = 1;
        result.method = "dense-lu";
    }

    for (std::size_t i = 0; i < op.interior_nodes().size(); ++i) {
        result.u.at(0, op.interior_nodes()[i]) = x[i];
    }

    if (nb > 0.0) {
        std::vector<double> r(n);
        op.apply(x, r);
        for (std::size_t i = 0; i < n; ++i) r[i] -= b[i];
        result.linear_residual = norm2(r) / nb;
        if (result.converged && result.method != "dense-lu" &&
            result.linear_residual > options.tol * 1.01) {
            result.converged = false;
        }
    }

    const ElResidual res = el_residual(problem.density(), problem.order, result.u);
    result.residual_norm = res.interior_norm;
    return result;
}

SolveResult solve(const LinearProblem& problem, double tol, std::size_t max_iter) {
    SolveOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    return solve(problem, opt);
}

Field manufacture_source(ProblemKind kind, const FracOrder& order, const Grid& grid,
                         const Field& u_target, std::optional<MaterialParams> params) {
    if (u_target.grid() != grid || u_target.components() != 1) {
        throw std::invalid_argument("manufacture_source: target must be single-component on grid");
    }
    if (kind != ProblemKind::Poisson && !params.has_value()) {
        params = MaterialParams{1.0, 1.0};
    }
    ProblemOperator op(kind, grid, order, params);
    Field f(grid, 1);
    op.full_apply(u_target.component(0), f.component(0));
    return f;
}

Field sine_bump(const Grid& grid) {
    return sample(grid, [&grid](std::span<const double> coords) {
        double v = 1.0;
        for (std::size_t i = 0; i < grid.dims(); ++i) {
            const double t = (coords[i] - grid.lower(i)) / (grid.upper(i) - grid.lower(i));
            v *= std::sin(std::numbers::pi * t);
        }
        return v;
    });
}

}  // namespace fracvar

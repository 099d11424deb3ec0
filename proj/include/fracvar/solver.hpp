#pragma once

#include <optional>
#include <string>

#include "fracvar/lagrangian.hpp"
#include "fracvar/variational.hpp"

namespace fracvar {

enum class ProblemKind { Poisson, WaveFracSpace, WaveClassicalSpace };

std::string kind_label(ProblemKind kind);
ProblemKind kind_from_label(const std::string& label);

/// Dirichlet boundary-value problem for the quadratic Euler-Lagrange systems:
///   poisson:  sum_i Ai^T Ai u = f
///   wave:     rho A0^T A0 u - k sum_{i>=1} Ai^T Ai u = f   (f = 0 by default)
/// where Ai is the discrete left RL derivative along axis i.  The source on
/// the wave kinds supports manufactured-solution round trips.
struct LinearProblem {
    ProblemKind kind;
    Grid grid;
    FracOrder order;
    std::optional<MaterialParams> params;
    std::optional<Field> source;
    Field dirichlet;  // full-domain field; interior entries ignored

    static LinearProblem make(ProblemKind kind, Grid grid, FracOrder order,
                              std::optional<MaterialParams> params,
                              std::optional<Field> source, Field dirichlet);

    /// Order actually applied: wave-classical-space forces spatial entries to 1.
    FracOrder effective_order() const;

    /// Density whose Euler-Lagrange residual this problem sets to zero,
    /// including the source coupling when a source is present.
    LagrangianDensity density() const;
};

/// Axis-wise application of the full-domain problem operator (triangular
/// Toeplitz passes per axis; the matrix is never materialized here).
class ProblemOperator {
public:
    ProblemOperator(ProblemKind kind, const Grid& grid, const FracOrder& order,
                    std::optional<MaterialParams> params);
    const Grid& grid() const { return grid_; }
    void full_apply(std::span<const double> u, std::span<double> out) const;

private:
    Grid grid_;
    std::vector<FracOp> left_, right_;
    std::vector<double> axis_coeff_;
};

/// The symmetric interior operator with Dirichlet data folded into the RHS.
class InteriorOperator {
public:
    explicit InteriorOperator(const LinearProblem& problem);
    std::size_t unknowns() const { return interior_.size(); }
    const std::vector<std::size_t>& interior_nodes() const { return interior_; }
    void apply(std::span<const double> v, std::span<double> out) const;
    std::vector<double> folded_rhs() const;

private:
    ProblemOperator op_;
    std::vector<std::size_t> interior_;
    std::vector<double> rhs_;
    mutable std::vector<double> full_in_, full_out_;
};

enum class SolveMethod { Auto, ConjugateGradient, DenseDirect, Minres };

struct SolveOptions {
    double tol = 1e-10;
    std::size_t max_iter = 10000;
    SolveMethod method = SolveMethod::Auto;
    std::size_t dense_cap = 20000;
};

struct SolveResult {
    Field u;
    double residual_norm = 0.0;      // independent el_residual interior norm
    std::size_t iterations = 0;
    std::string method;
    bool converged = false;
    double linear_residual = 0.0;    // recomputed ||Mx - b|| / ||b||
    std::optional<double> condition_estimate;  // dense method only
    bool flagged_near_singular = false;
};

SolveResult solve(const LinearProblem& problem, const SolveOptions& options);
SolveResult solve(const LinearProblem& problem, double tol, std::size_t max_iter);

/// f := discrete problem operator applied to u_target, making u_target the
/// exact discrete solution with its own trace as Dirichlet data.
Field manufacture_source(ProblemKind kind, const FracOrder& order, const Grid& grid,
                         const Field& u_target,
                         std::optional<MaterialParams> params = std::nullopt);

/// prod_i sin(pi (x_i - a_i) / (b_i - a_i)), the manufactured-solution target.
Field sine_bump(const Grid& grid);

}  // namespace fracvar

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracvar/fracops.hpp"
#include "fracvar/grid.hpp"

namespace fracvar {

/// Per-node arguments handed to density callbacks: the field values u_j, the
/// fractional gradient entries g_ij laid out g[j * dims + i], and the values
/// of any sampled coefficient fields (e.g. the Poisson source) at the node.
struct DensityInput {
    std::span<const double> u;
    std::span<const double> g;
    std::span<const double> coeff;
};

/// Lagrangian density L(u, nabla^alpha u) with user-supplied partials.
/// Callbacks must be pure; evaluation at distinct nodes may run concurrently.
struct LagrangianDensity {
    std::size_t components = 1;                      // m
    std::size_t dims = 1;                            // n+1
    std::function<double(const DensityInput&)> value;
    std::function<void(const DensityInput&, std::span<double>)> du;   // m outputs
    std::function<void(const DensityInput&, std::span<double>)> dg;   // m*dims outputs, [j*dims+i]
    std::string label;
    std::vector<Field> coefficients;                 // node-sampled coefficient fields
    std::vector<unsigned char> classical_axes;       // axes evaluated with alpha = 1
};

struct MaterialParams {
    double rho;
    double k;

    static MaterialParams make(double rho, double k);
    double c2() const { return k / rho; }
};

/// Density 1/2 sum_i g_i^2 - f*u with du = -f and dg_i = g_i (single component).
LagrangianDensity builtin_poisson(Field source);

/// Density 1/2 (rho g_0^2 - k sum_{i>=1} g_i^2).  With fractional_space=false
/// the spatial gradient entries are produced with the exact alpha=1 operators.
LagrangianDensity builtin_wave(const MaterialParams& params, bool fractional_space,
                               std::size_t dims);

/// Adds a source coupling -f*u_0 to an existing density (du_0 gains -f).
LagrangianDensity with_source(LagrangianDensity base, Field source);

/// Built-in density by CLI label: "poisson", "wave-frac-space", "wave-classical-space".
LagrangianDensity builtin_by_label(const std::string& label, const Grid& grid,
                                   const MaterialParams& params, const Field* source);

/// Rectangle-rule action: sum over all nodes of L(u, nabla^alpha u) times the
/// uniform cell weight prod h_i.  Throws std::domain_error naming the node on
/// a non-finite density value.
double action(const LagrangianDensity& density, const FracOrder& order, const Field& u);

struct PartialsReport {
    double max_rel_error = 0.0;
    bool pass = false;
    std::size_t worst_trial = 0;
    std::string worst_kind;    // "du" or "dg"
    std::size_t worst_index = 0;
};

/// Compares du/dg against central differences of value at seeded random
/// points; passes iff the max relative error is <= 1e-6.
PartialsReport validate_partials(const LagrangianDensity& density, std::size_t trials,
                                 std::uint64_t seed);

namespace detail {

/// Order with classical_axes entries forced to the exact alpha = 1 operator.
FracOrder effective_order(const LagrangianDensity& density, const FracOrder& order);

/// Left-derivative gradients of every component along every axis, [axis*m + j].
std::vector<std::vector<double>> compute_gradients(const LagrangianDensity& density,
                                                   const FracOrder& order, const Field& u);

struct DensityPartials {
    std::vector<std::vector<double>> grad;  // [axis*m + j]
    std::vector<std::vector<double>> du;    // [j]
    std::vector<std::vector<double>> dg;    // [axis*m + j]
};

DensityPartials evaluate_partials(const LagrangianDensity& density, const FracOrder& order,
                                  const Field& u);

void check_density_shape(const LagrangianDensity& density, const Field& u);

}  // namespace detail

}  // namespace fracvar

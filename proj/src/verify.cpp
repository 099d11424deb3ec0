#include "fracvar/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fracvar/noether.hpp"
#include "fracvar/variational.hpp"

namespace fracvar {

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

Field random_field(const Grid& grid, std::size_t m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Field f(grid, m);
    for (double& v : f.values()) v = unit(rng);
    return f;
}

VerifyReport ibp_suite(std::uint64_t seed) {
    VerifyReport report{"ibp", seed, {}, false};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (std::size_t n : {std::size_t{64}, std::size_t{512}}) {
        for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
            const Grid grid = make_grid({0.0}, {1.0}, {n});
            const FracOp left = FracOp::for_grid(OpKind::LeftDerivative, alpha, 0, grid);
            const FracOp right = left.adjoint();
            double worst = 0.0;
            std::vector<double> f(n), g(n), lf(n), rg(n);
            for (int pair = 0; pair < 50; ++pair) {
                for (std::size_t i = 0; i < n; ++i) {
                    f[i] = unit(rng);
                    g[i] = unit(rng);
                }
                f.front() = f.back() = 0.0;
                g.front() = g.back() = 0.0;
                apply_axis_raw(left, grid, f, lf);
                apply_axis_raw(right, grid, g, rg);
                double glf = 0.0, frg = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    glf += g[i] * lf[i];
                    frg += f[i] * rg[i];
                }
                worst = std::max(worst, std::abs(glf - frg) / (std::abs(glf) + 1.0));
            }
            VerifyCase c;
            c.name = "ibp-N" + std::to_string(n) + "-a" + format_double(alpha);
            c.tolerance = 1e-12;
            c.defect = worst;
            c.pass = worst <= c.tolerance;
            c.detail = "max |<g,Lf> - <f,Rg>| / (|<g,Lf>| + 1) over 50 pairs";
            report.cases.push_back(c);
        }
    }
    return report;
}

// Kernel decay of the paper-example generator factor: the discrete left
// derivative of unit-normalized samples of (x-a)^{alpha-1} (singular node 0),
// measured at the interior nodes shared by the whole refinement family.
VerifyReport kernel_suite(std::uint64_t seed) {
    VerifyReport report{"kernel", seed, {}, false};
    const std::vector<std::size_t> sizes{65, 129, 257, 513};
    for (double alpha : {0.5, 0.75}) {
        std::vector<double> norms;
        for (std::size_t n : sizes) {
            const Grid grid = make_grid({0.0}, {1.0}, {n});
            Field f(grid, 1);
            for (std::size_t i = 1; i < n; ++i) {
                f.at(0, i) = std::pow(grid.coordinate(0, i), alpha - 1.0);
            }
            const double fmax = f.max_abs();
            for (double& v : f.values()) v /= fmax;
            const FracOp op = FracOp::for_grid(OpKind::LeftDerivative, alpha, 0, grid);
            const Field d = apply_axis(op, f, 0);
            const std::size_t step = (n - 1) / (sizes.front() - 1);
            double norm = 0.0;
            for (std::size_t l = 1; l + 1 < sizes.front(); ++l) {
                norm = std::max(norm, std::abs(d.at(0, l * step)));
            }
            norms.push_back(norm);
        }
        double worst_ratio = 0.0;
        for (std::size_t i = 0; i + 1 < norms.size(); ++i) {
            worst_ratio = std::max(worst_ratio, norms[i + 1] / norms[i]);
        }
        VerifyCase mono;
        mono.name = "kernel-monotone-a" + format_double(alpha);
        mono.tolerance = 1.0;
        mono.defect = worst_ratio;
        mono.pass = worst_ratio < 1.0;
        mono.detail = "max step ratio of interior max-norm over N in {65,129,257,513}";
        report.cases.push_back(mono);

        VerifyCase fin;
        fin.name = "kernel-final-a" + format_double(alpha);
        fin.tolerance = 0.1;
        fin.defect = norms.back() / norms.front();
        fin.pass = fin.defect <= fin.tolerance;
        fin.detail = "final/initial interior max-norm; values " + format_double(norms[0]) + " -> " +
                     format_double(norms.back());
        report.cases.push_back(fin);
    }
    return report;
}

VerifyReport limit_suite(std::uint64_t seed) {
    VerifyReport report{"limit", seed, {}, false};
    const std::size_t n = 2049;
    const Grid grid = make_grid({0.0}, {1.0}, {n});
    const Field f = sample(grid, [](std::span<const double> x) { return std::sin(x[0]); });

    {
        const FracOp op = FracOp::for_grid(OpKind::LeftDerivative, 0.999, 0, grid);
        const Field d = apply_axis(op, f, 0);
        double worst = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            worst = std::max(worst, std::abs(d.at(0, i) - std::cos(grid.coordinate(0, i))));
        }
        VerifyCase c;
        c.name = "limit-near-one";
        c.tolerance = 2e-2;
        c.defect = worst;
        c.pass = worst <= c.tolerance;
        c.detail = "max interior |D^0.999 sin - cos| on N=2049";
        report.cases.push_back(c);
    }
    {
        const FracOp op = FracOp::for_grid(OpKind::LeftDerivative, 1.0, 0, grid);
        const Field d = apply_axis(op, f, 0);
        const double inv_h = 1.0 / grid.spacing(0);
        double worst = 0.0;
        bool exact = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double expected = i == 0 ? f.at(0, 0) * inv_h
                                           : (f.at(0, i) - f.at(0, i - 1)) * inv_h;
            if (d.at(0, i) != expected) exact = false;
            worst = std::max(worst, std::abs(d.at(0, i) - expected));
        }
        VerifyCase c;
        c.name = "limit-exact-one";
        c.tolerance = 0.0;
        c.defect = worst;
        c.pass = exact;
        c.detail = "alpha=1 operator equals the backward difference bit-exactly";
        report.cases.push_back(c);
    }
    return report;
}

VerifyReport noether_identity_suite(std::uint64_t seed) {
    VerifyReport report{"noether-identity", seed, {}, false};
    std::mt19937_64 rng(seed);
    const Grid grid = make_grid({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {9, 9, 9});
    const FracOrder order = FracOrder::make({0.6, 0.75, 0.9});
    const Field source = random_field(grid, 1, rng);
    const std::vector<LagrangianDensity> densities{
        builtin_poisson(source), builtin_wave(MaterialParams::make(1.0, 1.0), true, 3)};
    for (const LagrangianDensity& density : densities) {
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const Field u = random_field(grid, 1, rng);
            const Generator gen{random_field(grid, 1, rng), "random"};
            const NoetherReport rep = noether_sum(density, order, u, gen);
            worst = std::max(worst, rep.identity_defect / std::max(rep.scale, 1.0));
        }
        VerifyCase c;
        c.name = "noether-identity-" + density.label;
        c.tolerance = 1e-10;
        c.defect = worst;
        c.pass = worst <= c.tolerance;
        c.detail = "max |S - N1 + sum_j R_j xi_j| / scale over 20 random (u, xi)";
        report.cases.push_back(c);
    }
    return report;
}

VerifyReport gradcheck_suite(std::uint64_t seed) {
    VerifyReport report{"gradcheck", seed, {}, false};
    std::mt19937_64 rng(seed);
    const Grid grid = make_grid({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {9, 9, 9});
    const FracOrder order = FracOrder::make({0.6, 0.75, 0.9});
    const BoundaryMask mask(grid);
    const Field source = random_field(grid, 1, rng);
    const std::vector<LagrangianDensity> densities{
        builtin_poisson(source), builtin_wave(MaterialParams::make(1.3, 0.8), true, 3)};
    for (const LagrangianDensity& density : densities) {
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const Field u = random_field(grid, 1, rng);
            const Field h = interior_projection(random_field(grid, 1, rng), mask);
            const GradCheckReport rep = gradient_check(density, order, u, h, 1e-4);
            worst = std::max(worst, rep.defect / rep.scale);
        }
        VerifyCase c;
        c.name = "gradcheck-" + density.label;
        c.tolerance = 1e-8;
        c.defect = worst;
        c.pass = worst <= c.tolerance;
        c.detail = "max |quotient - pairing| / scale over 20 random (u, h), eps=1e-4";
        report.cases.push_back(c);
    }
    return report;
}

}  // namespace

std::vector<std::string> verify_suites() {
    return {"ibp", "kernel", "limit", "noether-identity", "gradcheck"};
}

VerifyReport run_verify(const std::string& suite, std::uint64_t seed) {
    VerifyReport report;
    if (suite == "ibp") {
        report = ibp_suite(seed);
    } else if (suite == "kernel") {
        report = kernel_suite(seed);
    } else if (suite == "limit") {
        report = limit_suite(seed);
    } else if (suite == "noether-identity") {
        report = noether_identity_suite(seed);
    } else if (suite == "gradcheck") {
        report = gradcheck_suite(seed);
    } else {
        throw std::invalid_argument("unknown verify suite: " + suite);
    }
    report.pass = !report.cases.empty();
    for (const VerifyCase& c : report.cases) report.pass = report.pass && c.pass;
    return report;
}

}  // namespace fracvar

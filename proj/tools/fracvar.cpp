// fracvar: fractional variational calculus toolbox.
//
// Subcommands: weights, fracderiv, verify, solve, residual, gradcheck, noether.
// Exit codes: 0 success, 1 numerical failure, 2 usage/config error.
// Machine-parsable errors go to stderr as one-line JSON.

#include <chrono>
#include <random>
#include <sstream>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fracvar/field_io.hpp"
#include "fracvar/noether.hpp"
#include "fracvar/verify.hpp"

namespace fs = std::filesystem;
using namespace fracvar;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) {
        throw UsageError("output directory is not writable: " + dir.string());
    }
}

// Normalizes -0 so CSV rows print as plain 0.
double csv_value(double v) { return v + 0.0; }

int cmd_weights(double alpha, std::size_t count, const fs::path& out_dir,
                const std::string& format) {
    std::vector<double> w;
    try {
        w = gl_weights(alpha, count);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    ensure_dir(out_dir);
    if (format == "csv") {
        const fs::path path = out_dir / "weights.csv";
        std::ofstream out(path);
        out << "# grunwald-letnikov weights, alpha=" << alpha << ", count=" << count << "\n";
        out << "k,w_k,partial_sum\n";
        double sum = 0.0;
        char line[96];
        for (std::size_t k = 0; k < w.size(); ++k) {
            sum += w[k];
            std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g\n", k, csv_value(w[k]),
                          csv_value(sum));
            out << line;
        }
        std::cout << "weights: alpha=" << alpha << " count=" << count << " -> " << path.string()
                  << "\n";
    } else {
        Json j;
        j["alpha"] = alpha;
        j["count"] = count;
        j["weights"] = w;
        std::vector<double> partial(w.size());
        double sum = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) partial[k] = (sum += w[k]);
        j["partial_sums"] = partial;
        const fs::path path = out_dir / "weights.json";
        write_json(path, j);
        std::cout << "weights: alpha=" << alpha << " count=" << count << " -> " << path.string()
                  << "\n";
    }
    return kExitOk;
}

OpKind parse_kind(const std::string& s) {
    if (s == "left-deriv") return OpKind::LeftDerivative;
    if (s == "right-deriv") return OpKind::RightDerivative;
    if (s == "left-int") return OpKind::LeftIntegral;
    if (s == "right-int") return OpKind::RightIntegral;
    throw UsageError("unknown operator kind: " + s);
}

int cmd_fracderiv(const fs::path& field_path, std::size_t axis, double alpha,
                  const std::string& kind, std::size_t component, const fs::path& out_dir) {
    const Field field = read_field(field_path);
    if (axis >= field.grid().dims()) throw UsageError("axis out of range for field grid");
    if (component >= field.components()) throw UsageError("component out of range");
    FracOp op = FracOp::for_grid(parse_kind(kind), alpha, axis, field.grid());
    const Field result = apply_axis(op, field, component);
    ensure_dir(out_dir);
    const fs::path path = out_dir / "fracderiv.json";
    write_field(path, result);
    std::cout << "fracderiv: kind=" << kind << " alpha=" << alpha << " axis=" << axis
              << " max|.|=" << result.max_abs() << " -> " << path.string() << "\n";
    return kExitOk;
}

Json verify_report_json(const VerifyReport& report) {
    Json j;
    j["suite"] = report.suite;
    j["seed"] = report.seed;
    j["pass"] = report.pass;
    Json cases = Json::array();
    for (const VerifyCase& c : report.cases) {
        Json cj;
        cj["name"] = c.name;
        cj["tolerance"] = c.tolerance;
        cj["defect"] = c.defect;
        cj["pass"] = c.pass;
        cj["detail"] = c.detail;
        cases.push_back(cj);
    }
    j["cases"] = cases;
    return j;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const fs::path& out_dir) {
    VerifyReport report;
    try {
        report = run_verify(suite, seed);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    ensure_dir(out_dir);
    const fs::path path = out_dir / ("verify_" + suite + ".json");
    write_json(path, verify_report_json(report));
    for (const VerifyCase& c : report.cases) {
        std::cout << (c.pass ? "[pass] " : "[FAIL] ") << c.name << " defect=" << c.defect
                  << " tol=" << c.tolerance << "\n";
    }
    std::cout << "verify " << suite << ": " << (report.pass ? "pass" : "FAIL") << " -> "
              << path.string() << "\n";
    return report.pass ? kExitOk : kExitNumerical;
}

Json solve_report_json(const ProblemConfig& cfg, const SolveResult& result) {
    Json j;
    j["kind"] = kind_label(cfg.problem.kind);
    j["grid"] = grid_to_json(cfg.problem.grid);
    j["alpha"] = cfg.problem.order.alpha;
    j["tol"] = cfg.tol;
    j["max_iter"] = cfg.max_iter;
    j["method"] = result.method;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["linear_residual"] = result.linear_residual;
    j["el_residual_interior_norm"] = result.residual_norm;
    if (result.condition_estimate.has_value()) {
        j["condition_estimate"] = *result.condition_estimate;
    } else {
        j["condition_estimate"] = nullptr;
    }
    j["flagged_near_singular"] = result.flagged_near_singular;
    return j;
}

int cmd_solve(const fs::path& spec_path, const fs::path& out_dir) {
    const ProblemConfig cfg = read_problem(spec_path);
    const double t0 = now_seconds();
    const SolveResult result = solve(cfg.problem, cfg.tol, cfg.max_iter);
    const double elapsed = now_seconds() - t0;
    ensure_dir(out_dir);
    write_field(out_dir / "solution.json", result.u);
    write_json(out_dir / "solve_report.json", solve_report_json(cfg, result));
    std::cout << "solve: kind=" << kind_label(cfg.problem.kind) << " method=" << result.method
              << " iters=" << result.iterations << " linres=" << result.linear_residual
              << " elres=" << result.residual_norm << " wall=" << elapsed << "s -> "
              << (out_dir / "solution.json").string() << "\n";
    if (!result.converged || result.flagged_near_singular) {
        throw NumericalError(result.flagged_near_singular
                                 ? "solver flagged a near-singular system"
                                 : "solver did not reach the requested tolerance");
    }
    return kExitOk;
}

int cmd_residual(const fs::path& spec_path, const fs::path& solution_path,
                 const fs::path& out_dir) {
    const ProblemConfig cfg = read_problem(spec_path);
    const Field u = read_field(solution_path);
    if (u.grid() != cfg.problem.grid) throw UsageError("solution grid does not match spec");
    const ElResidual res = el_residual(cfg.problem.density(), cfg.problem.order, u);
    ensure_dir(out_dir);
    write_field(out_dir / "residual.json", res.field);
    Json j;
    j["kind"] = kind_label(cfg.problem.kind);
    j["interior_norm"] = res.interior_norm;
    write_json(out_dir / "residual_report.json", j);
    std::cout << "residual: interior_norm=" << res.interior_norm << " -> "
              << (out_dir / "residual.json").string() << "\n";
    return kExitOk;
}

int cmd_gradcheck(const fs::path& spec_path, const fs::path& solution_path, double eps,
                  std::uint64_t seed, const fs::path& out_dir) {
    const ProblemConfig cfg = read_problem(spec_path);
    const Grid& grid = cfg.problem.grid;
    Field u(grid, 1);
    if (!solution_path.empty()) {
        u = read_field(solution_path);
        if (u.grid() != grid) throw UsageError("solution grid does not match spec");
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        for (double& v : u.values()) v = unit(rng);
    }
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Field h(grid, 1);
    for (double& v : h.values()) v = unit(rng);
    h = interior_projection(h, BoundaryMask(grid));

    const GradCheckReport rep =
        gradient_check(cfg.problem.density(), cfg.problem.order, u, h, eps);
    ensure_dir(out_dir);
    Json j;
    j["eps"] = rep.eps;
    j["quotient"] = rep.quotient;
    j["quotient_half"] = rep.quotient_half;
    j["quotient_extrapolated"] = rep.quotient_extrap;
    j["pairing"] = rep.pairing;
    j["defect"] = rep.defect;
    j["scale"] = rep.scale;
    j["threshold"] = rep.threshold;
    j["pass"] = rep.pass;
    write_json(out_dir / "gradcheck_report.json", j);
    std::cout << "gradcheck: defect=" << rep.defect << " threshold=" << rep.threshold
              << (rep.pass ? " pass" : " FAIL") << "\n";
    return rep.pass ? kExitOk : kExitNumerical;
}

int cmd_noether(const fs::path& spec_path, const fs::path& solution_path,
                const std::string& generator, const fs::path& out_dir) {
    const ProblemConfig cfg = read_problem(spec_path);
    const Field u = read_field(solution_path);
    if (u.grid() != cfg.problem.grid) throw UsageError("solution grid does not match spec");
    const Grid& grid = cfg.problem.grid;

    Generator gen{Field(grid, 1), ""};
    if (generator == "paper-example") {
        gen = paper_generator(grid, cfg.problem.effective_order());
    } else if (generator == "constant") {
        gen = constant_generator(grid, u.components());
    } else if (generator.rfind("file:", 0) == 0) {
        fs::path p = generator.substr(5);
        if (p.is_relative()) p = spec_path.parent_path() / p;
        gen = Generator{read_field(p), "file"};
        if (gen.xi.grid() != grid) throw UsageError("generator grid does not match spec");
    } else {
        throw UsageError("unknown generator spec: " + generator);
    }

    const NoetherReport rep = noether_sum(cfg.problem.density(), cfg.problem.order, u, gen);
    ensure_dir(out_dir);
    write_field(out_dir / "invariance_residual.json", rep.invariance_residual);
    write_field(out_dir / "noether_sum.json", rep.noether_sum);
    write_field(out_dir / "el_pairing.json", rep.el_pairing);

    const double corollary_bound =
        rep.invariance_norm + rep.xi_max * rep.el_interior_norm * u.components() +
        1e-10 * std::max(rep.scale, 1.0);
    Json j;
    j["generator"] = gen.label;
    j["conservation_norm"] = rep.conservation_norm;
    j["invariance_interior_norm"] = rep.invariance_norm;
    j["el_residual_interior_norm"] = rep.el_interior_norm;
    j["identity_defect"] = rep.identity_defect;
    j["scale"] = rep.scale;
    j["xi_max"] = rep.xi_max;
    j["corollary_bound"] = corollary_bound;
    j["corollary_holds"] = rep.conservation_norm <= corollary_bound;
    if (cfg.conservation_bound.has_value()) {
        j["configured_bound"] = *cfg.conservation_bound;
        j["configured_bound_holds"] = rep.conservation_norm <= *cfg.conservation_bound;
    }
    write_json(out_dir / "noether_report.json", j);
    std::cout << "noether: conservation_norm=" << rep.conservation_norm
              << " identity_defect=" << rep.identity_defect << " bound=" << corollary_bound
              << "\n";
    if (rep.conservation_norm > corollary_bound) {
        throw NumericalError("conservation norm exceeds the corollary bound");
    }
    if (cfg.conservation_bound && rep.conservation_norm > *cfg.conservation_bound) {
        throw NumericalError("conservation norm exceeds the configured bound");
    }
    return kExitOk;
}

void emit_error(const std::string& kind, const std::string& message) {
    Json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracvar: discretized Riemann-Liouville variational toolbox"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir = ".";
    std::uint64_t seed = 0;
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "seed for randomized probes")->capture_default_str();

    auto* weights = app.add_subcommand("weights", "dump Grunwald-Letnikov weight table");
    double w_alpha = 0.5;
    std::size_t w_count = 16;
    std::string w_format = "csv";
    weights->add_option("--alpha", w_alpha, "fractional order in (0,1]")->required();
    weights->add_option("--count", w_count, "number of weights")->capture_default_str();
    weights->add_option("--format", w_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* fracderiv = app.add_subcommand("fracderiv", "apply a fractional operator to a field");
    std::string fd_field, fd_kind = "left-deriv";
    std::size_t fd_axis = 0, fd_component = 0;
    double fd_alpha = 0.5;
    fracderiv->add_option("--field", fd_field, "field JSON file")->required();
    fracderiv->add_option("--axis", fd_axis, "grid axis");
    fracderiv->add_option("--alpha", fd_alpha, "fractional order in (0,1]")->required();
    fracderiv->add_option("--kind", fd_kind, "left-deriv|right-deriv|left-int|right-int");
    fracderiv->add_option("--component", fd_component, "field component");

    auto* verify = app.add_subcommand("verify", "run a seeded invariant battery");
    std::string v_suite;
    verify->add_option("--suite", v_suite, "ibp|kernel|limit|noether-identity|gradcheck")
        ->required();

    auto* solve_cmd = app.add_subcommand("solve", "solve a problem spec");
    std::string s_spec;
    solve_cmd->add_option("--spec", s_spec, "problem spec JSON")->required();

    auto* residual = app.add_subcommand("residual", "Euler-Lagrange residual of a field");
    std::string r_spec, r_solution;
    residual->add_option("--spec", r_spec, "problem spec JSON")->required();
    residual->add_option("--solution", r_solution, "field JSON file")->required();

    auto* gradcheck = app.add_subcommand("gradcheck", "directional-derivative consistency check");
    std::string g_spec, g_solution;
    double g_eps = 1e-4;
    gradcheck->add_option("--spec", g_spec, "problem spec JSON")->required();
    gradcheck->add_option("--solution", g_solution, "optional field JSON file");
    gradcheck->add_option("--eps", g_eps, "central difference step")->capture_default_str();

    auto* noether = app.add_subcommand("noether", "fractional conservation-law check");
    std::string n_spec, n_solution, n_generator = "paper-example";
    noether->add_option("--spec", n_spec, "problem spec JSON")->required();
    noether->add_option("--solution", n_solution, "solution field JSON")->required();
    noether->add_option("--generator", n_generator, "paper-example|constant|file:<path>");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::ostringstream os;
        os << e.what();
        emit_error("usage", os.str());
        return kExitUsage;
    }

    try {
        if (*weights) return cmd_weights(w_alpha, w_count, out_dir, w_format);
        if (*fracderiv) return cmd_fracderiv(fd_field, fd_axis, fd_alpha, fd_kind, fd_component, out_dir);
        if (*verify) return cmd_verify(v_suite, seed, out_dir);
        if (*solve_cmd) return cmd_solve(s_spec, out_dir);
        if (*residual) return cmd_residual(r_spec, r_solution, out_dir);
        if (*gradcheck) return cmd_gradcheck(g_spec, g_solution, g_eps, seed, out_dir);
        if (*noether) return cmd_noether(n_spec, n_solution, n_generator, out_dir);
    } catch (const UsageError& e) {
        emit_error("usage", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        emit_error("usage", e.what());
        return kExitUsage;
    } catch (const NumericalError& e) {
        emit_error("numerical", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        emit_error("usage", e.what());
        return kExitUsage;
    }
    emit_error("usage", "no subcommand selected");
    return kExitUsage;
}

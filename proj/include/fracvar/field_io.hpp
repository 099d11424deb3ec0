#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fracvar/solver.hpp"

namespace fracvar {

using Json = nlohmann::ordered_json;

/// Field interchange document: {"grid": {lower, upper, nodes}, "components",
/// "values"} with values flat, row-major within each component, components
/// concatenated.  This is the unit every CLI command reads and writes.
Json field_to_json(const Field& field);
Field field_from_json(const Json& j);

void write_field(const std::filesystem::path& path, const Field& field);
Field read_field(const std::filesystem::path& path);

Json grid_to_json(const Grid& grid);
Grid grid_from_json(const Json& j);

void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

/// Problem spec file: kind, grid, alpha, rho/k, source ("zero" | "file:<path>"
/// | "manufactured:sine"), dirichlet ("zero" | "file:<path>" |
/// "manufactured:sine"), tol, max_iter.  Relative paths resolve against the
/// spec file directory.
struct ProblemConfig {
    LinearProblem problem;
    double tol = 1e-10;
    std::size_t max_iter = 10000;
    std::optional<double> conservation_bound;
};

ProblemConfig problem_from_json(const Json& j, const std::filesystem::path& base_dir);
ProblemConfig read_problem(const std::filesystem::path& path);

}  // namespace fracvar

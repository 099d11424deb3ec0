#include "fracvar/field_io.hpp"

#include <fstream>

namespace fracvar {

namespace {

Field resolve_field_ref(const std::string& ref, const Grid& grid,
                        const std::filesystem::path& base_dir, const char* what,
                        ProblemKind kind, const FracOrder& order,
                        const std::optional<MaterialParams>& params) {
    if (ref == "zero") return Field(grid, 1);
    if (ref.rfind("file:", 0) == 0) {
        std::filesystem::path p = ref.substr(5);
        if (p.is_relative()) p = base_dir / p;
        Field f = read_field(p);
        if (f.grid() != grid) {
            throw std::runtime_error(std::string(what) + ": field file grid does not match spec");
        }
        if (f.components() != 1) {
            throw std::runtime_error(std::string(what) + ": field file must be single-component");
        }
        return f;
    }
    if (ref == "manufactured:sine") {
        const Field target = sine_bump(grid);
        return manufacture_source(kind, order, grid, target, params);
    }
    throw std::runtime_error(std::string(what) + ": unknown reference '" + ref + "'");
}

}  // namespace

Json grid_to_json(const Grid& grid) {
    Json j;
    j["lower"] = grid.lower();
    j["upper"] = grid.upper();
    j["nodes"] = grid.nodes();
    return j;
}

Grid grid_from_json(const Json& j) {
    if (!j.contains("lower") || !j.contains("upper") || !j.contains("nodes")) {
        throw std::runtime_error("grid json: missing lower/upper/nodes");
    }
    return make_grid(j.at("lower").get<std::vector<double>>(),
                     j.at("upper").get<std::vector<double>>(),
                     j.at("nodes").get<std::vector<std::size_t>>());
}

Json field_to_json(const Field& field) {
    Json j;
    j["grid"] = grid_to_json(field.grid());
    j["components"] = field.components();
    j["values"] = field.values();
    return j;
}

Field field_from_json(const Json& j) {
    if (!j.contains("grid") || !j.contains("components") || !j.contains("values")) {
        throw std::runtime_error("field json: missing grid/components/values");
    }
    const Grid grid = grid_from_json(j.at("grid"));
    const std::size_t m = j.at("components").get<std::size_t>();
    if (m == 0) throw std::runtime_error("field json: components must be >= 1");
    const auto values = j.at("values").get<std::vector<double>>();
    if (values.size() != m * grid.node_count()) {
        throw std::runtime_error("field json: values length does not match grid and components");
    }
    Field f(grid, m);
    f.values() = values;
    return f;
}

void write_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("parse error in " + path.string() + ": " + e.what());
    }
    return j;
}

void write_field(const std::filesystem::path& path, const Field& field) {
    write_json(path, field_to_json(field));
}

Field read_field(const std::filesystem::path& path) {
    return field_from_json(read_json(path));
}

ProblemConfig problem_from_json(const Json& j, const std::filesystem::path& base_dir) {
    for (const char* key : {"kind", "grid", "alpha"}) {
        if (!j.contains(key)) {
            throw std::runtime_error(std::string("problem spec: missing '") + key + "'");
        }
    }
    const ProblemKind kind = kind_from_label(j.at("kind").get<std::string>());
    const Grid grid = grid_from_json(j.at("grid"));
    const FracOrder order = FracOrder::make(j.at("alpha").get<std::vector<double>>());

    std::optional<MaterialParams> params;
    if (kind != ProblemKind::Poisson) {
        const double rho = j.value("rho", 1.0);
        const double k = j.value("k", 1.0);
        params = MaterialParams::make(rho, k);
    }

    const std::string source_ref = j.value("source", std::string("zero"));
    const std::string dirichlet_ref = j.value("dirichlet", std::string("zero"));

    std::optional<Field> source;
    if (kind == ProblemKind::Poisson || source_ref != "zero") {
        source = resolve_field_ref(source_ref, grid, base_dir, "source", kind, order, params);
    }

    Field dirichlet(grid, 1);
    if (dirichlet_ref == "manufactured:sine") {
        dirichlet = sine_bump(grid);
    } else if (dirichlet_ref != "zero") {
        dirichlet = resolve_field_ref(dirichlet_ref, grid, base_dir, "dirichlet", kind, order, params);
    }

    ProblemConfig cfg{LinearProblem::make(kind, grid, order, params, std::move(source),
                                          std::move(dirichlet)),
                      j.value("tol", 1e-10),
                      j.value("max_iter", static_cast<std::size_t>(10000)),
                      std::nullopt};
    if (j.contains("conservation_bound")) {
        cfg.conservation_bound = j.at("conservation_bound").get<double>();
    }
    if (!(cfg.tol > 0.0)) throw std::runtime_error("problem spec: tol must be positive");
    return cfg;
}

ProblemConfig read_problem(const std::filesystem::path& path) {
    return problem_from_json(read_json(path), path.parent_path());
}

}  // namespace fracvar

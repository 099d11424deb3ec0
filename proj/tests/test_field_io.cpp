#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "fracvar/field_io.hpp"

using namespace fracvar;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fracvar-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("field json round trip is exact") {
    const Grid g = make_grid({0.0, -1.0}, {1.0, 2.5}, {5, 7});
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unit(-10.0, 10.0);
    Field f(g, 2);
    for (double& v : f.values()) v = unit(rng);

    const Json j = field_to_json(f);
    const Field back = field_from_json(j);
    CHECK(back.grid() == g);
    CHECK(back.components() == 2);
    CHECK(back.values() == f.values());

    TempDir tmp;
    write_field(tmp.path / "f.json", f);
    const Field from_disk = read_field(tmp.path / "f.json");
    CHECK(from_disk.values() == f.values());
}

TEST_CASE("field json serialization is stable across repeats") {
    const Grid g = make_grid({0.0}, {1.0}, {9});
    const Field f = sample(g, [](std::span<const double> x) { return std::sin(17.0 * x[0]); });
    CHECK(field_to_json(f).dump(2) == field_to_json(f).dump(2));
}

TEST_CASE("malformed field documents are rejected") {
    CHECK_THROWS(field_from_json(Json::parse(R"({"components": 1, "values": []})")));
    CHECK_THROWS(field_from_json(Json::parse(
        R"({"grid": {"lower": [0], "upper": [1], "nodes": [5]}, "components": 1, "values": [1, 2]})")));
    CHECK_THROWS(field_from_json(Json::parse(
        R"({"grid": {"lower": [0], "upper": [1], "nodes": [5]}, "components": 0, "values": []})")));
    TempDir tmp;
    {
        std::ofstream out(tmp.path / "bad.json");
        out << "{ not json";
    }
    CHECK_THROWS(read_field(tmp.path / "bad.json"));
    CHECK_THROWS(read_field(tmp.path / "missing.json"));
}

TEST_CASE("problem spec parsing: poisson with manufactured source") {
    const Json j = Json::parse(R"({
        "kind": "poisson",
        "grid": {"lower": [0, 0], "upper": [1, 1], "nodes": [9, 9]},
        "alpha": [0.5, 0.5],
        "source": "manufactured:sine",
        "dirichlet": "zero",
        "tol": 1e-11,
        "max_iter": 500
    })");
    const ProblemConfig cfg = problem_from_json(j, ".");
    CHECK(cfg.problem.kind == ProblemKind::Poisson);
    CHECK(cfg.tol == 1e-11);
    CHECK(cfg.max_iter == 500);
    REQUIRE(cfg.problem.source.has_value());
    CHECK(cfg.problem.source->grid() == cfg.problem.grid);
    // manufactured source reproduces manufacture_source of the sine bump
    const Field expected = manufacture_source(ProblemKind::Poisson, cfg.problem.order,
                                              cfg.problem.grid, sine_bump(cfg.problem.grid));
    CHECK(cfg.problem.source->values() == expected.values());
}

TEST_CASE("problem spec parsing: wave with file-backed dirichlet data") {
    TempDir tmp;
    const Grid g = make_grid({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {5, 5, 5});
    const Field data = sample(g, [](std::span<const double> x) { return x[0] + x[1] + x[2]; });
    write_field(tmp.path / "dirichlet.json", data);
    Json j = Json::parse(R"({
        "kind": "wave-frac-space",
        "grid": {"lower": [0, 0, 0], "upper": [1, 1, 1], "nodes": [5, 5, 5]},
        "alpha": [0.75, 0.75, 0.75],
        "rho": 2.0,
        "k": 0.5,
        "dirichlet": "file:dirichlet.json"
    })");
    const ProblemConfig cfg = problem_from_json(j, tmp.path);
    CHECK(cfg.problem.kind == ProblemKind::WaveFracSpace);
    REQUIRE(cfg.problem.params.has_value());
    CHECK(cfg.problem.params->rho == 2.0);
    CHECK(cfg.problem.params->k == 0.5);
    CHECK_FALSE(cfg.problem.source.has_value());
    CHECK(cfg.problem.dirichlet.values() == data.values());
}

TEST_CASE("problem spec rejects bad configurations") {
    CHECK_THROWS(problem_from_json(Json::parse(R"({"kind": "poisson"})"), "."));
    CHECK_THROWS(problem_from_json(Json::parse(R"({
        "kind": "heat",
        "grid": {"lower": [0], "upper": [1], "nodes": [5]},
        "alpha": [0.5]
    })"), "."));
    CHECK_THROWS(problem_from_json(Json::parse(R"({
        "kind": "poisson",
        "grid": {"lower": [0], "upper": [1], "nodes": [5]},
        "alpha": [1.5],
        "source": "zero"
    })"), "."));
    CHECK_THROWS(problem_from_json(Json::parse(R"({
        "kind": "poisson",
        "grid": {"lower": [0], "upper": [1], "nodes": [5]},
        "alpha": [0.5],
        "source": "file:/nonexistent/f.json"
    })"), "."));
}

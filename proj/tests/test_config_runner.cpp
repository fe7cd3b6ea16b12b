#include <doctest.h>

#include "pxvi/csv.hpp"
#include "pxvi/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace pxvi;

namespace {

RunConfig tiny_green() {
    return parse_config_text(R"({
        "domain": {"kind": "interval", "n": 33},
        "exponent": {"kind": "constant", "p": 2.0},
        "flux": {"gamma": "constant", "value": 1.0, "eps_reg": 0.0},
        "measure": {"atoms": [{"x": [0.5], "weight": 1.0}]},
        "solver": {"tol": 1e-11}
    })",
                             "inline");
}

} // namespace

TEST_CASE("config defaults and parsing") {
    RunConfig cfg = tiny_green();
    CHECK(cfg.domain_kind == DomainKind::Interval);
    CHECK(cfg.grid_n == 33);
    CHECK(cfg.p_base == doctest::Approx(2.0));
    CHECK(cfg.eps_reg == 0.0);
    REQUIRE(cfg.atoms.size() == 1);
    CHECK(cfg.atoms[0].x.x == doctest::Approx(0.5));
    CHECK(cfg.atoms[0].weight == doctest::Approx(1.0));
    CHECK(!cfg.lower_active);
    CHECK(!cfg.upper_active);
    CHECK(cfg.q_list == std::vector<double>{1.0});
    CHECK(cfg.solver.tol == doctest::Approx(1e-11));
    CHECK(cfg.threads == 1);

    CHECK_THROWS_AS(parse_config_text(R"({"domain": {"kind": "triangle"}})", "inline"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text("{nonsense", "inline"), ConfigError);
    // scalar kinds are resolved when the instance is built
    RunConfig pyramid =
        parse_config_text(R"({"obstacles": {"lower": {"kind": "pyramid"}}})", "inline");
    CHECK_THROWS_AS(build_instance(pyramid), ConfigError);
}

TEST_CASE("instances own their live objects") {
    RunConfig cfg = tiny_green();
    auto inst = build_instance(cfg);
    CHECK(inst->grid.nodes_per_axis() == 33);
    CHECK(inst->flux.exponent == &inst->exponent);
    CHECK(inst->measure.atoms.size() == 1);
    ProblemSpec spec = problem_of(*inst);
    CHECK(spec.flux == &inst->flux);
    CHECK(spec.measure == &inst->measure);
    CHECK(!spec.lower.has_value());
    CHECK(!spec.upper.has_value());
}

TEST_CASE("shipped configs load and build") {
    for (const char* name :
         {"configs/green_1d.json", "configs/dirac_square.json", "configs/obstacle_bump.json",
          "configs/chain_window.json", "configs/step_logspike.json"}) {
        CAPTURE(name);
        RunConfig cfg = load_config(name);
        auto inst = build_instance(cfg);
        CHECK(inst->grid.node_count() > 0);
    }
}

TEST_CASE("solve subcommand produces the expected artifacts") {
    RunConfig cfg = tiny_green();
    RunResult res = run_subcommand("solve", cfg);
    REQUIRE(res.status == 0);
    CHECK(res.artifacts.count("solution.csv") == 1);
    CHECK(res.artifacts.count("summary.csv") == 1);
    CHECK(res.artifacts.count("energy_trace.csv") == 1);
    for (const auto& [name, body] : res.artifacts) CHECK(!body.empty());
    CHECK(!res.message.empty());

    // deterministic: a second run yields byte-identical artifacts
    RunResult res2 = run_subcommand("solve", cfg);
    REQUIRE(res2.status == 0);
    CHECK(res2.artifacts == res.artifacts);
}

TEST_CASE("failures map to stable exit codes") {
    RunConfig cfg = tiny_green();
    cfg.solver.max_sweeps = 1;
    RunResult res = run_subcommand("solve", cfg);
    CHECK(res.status == 3);

    RunConfig unknown = tiny_green();
    RunResult res2 = run_subcommand("mystery", unknown);
    CHECK(res2.status == 2);
}

TEST_CASE("artifact writer respects the status gate") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "pxvi_runner_test";
    fs::remove_all(dir);

    RunResult ok;
    ok.status = 0;
    ok.artifacts["a.csv"] = "x,y\n1,2\n";
    write_artifacts(ok, dir.string());
    std::ifstream in(dir / "a.csv", std::ios::binary);
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(body == "x,y\n1,2\n");

    RunResult bad;
    bad.status = 3;
    bad.artifacts["b.csv"] = "never\n";
    write_artifacts(bad, dir.string());
    CHECK(!fs::exists(dir / "b.csv"));
    fs::remove_all(dir);
}

TEST_CASE("csv tables enforce their shape") {
    CsvTable t({"a", "b"});
    t.add(1.0).add("x").end_row();
    CHECK(t.str() == "a,b\n1,x\n");

    CsvTable wide({"a", "b"});
    wide.add(1.0);
    CHECK_THROWS_AS(wide.end_row(), InvariantError);

    CsvTable open({"a"});
    open.add(2.0);
    CHECK_THROWS_AS(open.str(), InvariantError);

    CHECK(csv_num(0.5) == "0.5");
    CHECK(csv_num(1.0 / 3.0) == "0.33333333333333331");
}

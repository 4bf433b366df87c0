#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "hlfem/config.hpp"
#include "hlfem/report.hpp"
#include "hlfem/run.hpp"
#include "support.hpp"

using namespace hlfem;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hlfem_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::stringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

std::string config_error(const json& j) {
    try {
        config_from_json(j).validate();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(Config, DefaultsAreTheReferenceExperiment) {
    const RunConfig c = config_from_json(json::object());
    EXPECT_EQ(c.mode, RunMode::HLambda);
    EXPECT_EQ(c.n_elements, 15u);
    EXPECT_DOUBLE_EQ(c.theta, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(c.tol_percent, 0.2);
    EXPECT_EQ(c.reference_elements, 5000u);
    EXPECT_TRUE(c.reuse_lambda_max);
    const ProblemCoefficients p = c.problem();
    EXPECT_DOUBLE_EQ(p.f.evaluate(0.0), 1e4);
    EXPECT_DOUBLE_EQ(peclet(p), 1e4);
}

TEST(Config, ParsesEveryKey) {
    const json j = json::parse(R"cfg({
        "mode": "loss-scan",
        "problem": {"mu": 0.5, "sigma": 2, "beta": "3+x", "f": "sin(x)", "domain": [-1, 2]},
        "N": 20, "tol_percent": 1.5, "theta": 0.5, "lambda_tol": 0.25,
        "layer_side": "left", "loss_mode": "literal", "search": "ternary", "scan_intervals": 6,
        "reuse_lambda_max": false, "max_iterations": 9, "reduced_steps": 2048,
        "reference_elements": 0, "lambda": 3.5, "scan_samples": 50,
        "backend": {"kind": "shots", "shots": 500, "clock_qubits": 4, "evolution_time": 0.1,
                    "postselection_retries": 7, "seed": 99, "noisy_search": true},
        "output_dir": "elsewhere"
    })cfg");
    const RunConfig c = config_from_json(j);
    EXPECT_EQ(c.mode, RunMode::LossScan);
    EXPECT_EQ(c.mu, 0.5);
    EXPECT_EQ(c.a, -1.0);
    EXPECT_EQ(c.b, 2.0);
    EXPECT_EQ(c.layer_side, LayerSide::Left);
    EXPECT_EQ(c.loss_mode, LossMode::Literal);
    EXPECT_EQ(c.search, SearchStrategy::Ternary);
    EXPECT_EQ(c.backend.kind, BackendKind::Shots);
    EXPECT_EQ(c.backend.seed, 99u);
    EXPECT_TRUE(c.backend.noisy_search);
    EXPECT_EQ(c.output_dir, fs::path("elsewhere"));
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(config_from_json(config_to_json(c)).scan_samples, 50u);
    EXPECT_EQ(config_to_json(config_from_json(config_to_json(c))), config_to_json(c));
}

TEST(Config, ErrorsNameTheKey) {
    EXPECT_EQ(config_error(json{{"theta", 0}}).rfind("theta", 0), 0u);
    EXPECT_EQ(config_error(json{{"N", -4}}).rfind("N", 0), 0u);
    EXPECT_EQ(config_error(json{{"N", 2}}).rfind("N", 0), 0u);
    EXPECT_EQ(config_error(json{{"tol_percent", "x"}}).rfind("tol_percent", 0), 0u);
    EXPECT_EQ(config_error(json{{"mode", "fast"}}).rfind("mode", 0), 0u);
    EXPECT_EQ(config_error(json{{"bogus", 1}}).rfind("bogus", 0), 0u);
    EXPECT_EQ(config_error(json{{"problem", {{"sigma", 0.0}}}}).rfind("problem.sigma", 0), 0u);
    EXPECT_EQ(config_error(json{{"problem", {{"f", "1+"}}}}).rfind("problem.f", 0), 0u);
    EXPECT_EQ(config_error(json{{"problem", {{"domain", {1, 0}}}}}).rfind("problem.domain", 0), 0u);
    EXPECT_EQ(config_error(json{{"backend", {{"clock_qubits", 12}}}}).rfind("backend.clock_qubits", 0), 0u);
    EXPECT_EQ(config_error(json{{"backend", {{"kind", "qpu"}}}}).rfind("backend.kind", 0), 0u);
    // sigma = 0 is fine when no estimator is involved
    EXPECT_EQ(config_error(json{{"mode", "solve"}, {"problem", {{"sigma", 0.0}}}}), "");
}

TEST(Report, ConvergenceCsvLayout) {
    const fs::path dir = scratch("conv");
    AdaptIteration it{.field = FemField::zero(uniform_mesh(2, 0.0, 1.0))};
    it.index = 1;
    it.dof = 14;
    it.accumulated_dof = 14;
    it.error_percent = 2.5;
    it.quantum_calls = 39;
    std::vector<AdaptIteration> h{it};
    write_convergence_csv(h, dir / "c.csv");
    EXPECT_EQ(slurp(dir / "c.csv"), "iteration,dof,accumulated_dof,error_percent,order,quantum_calls\n1,14,14,2.5,,39\n");
    it.index = 2;
    it.order = 1.25;
    it.quantum_calls.reset();
    h.push_back(it);
    write_convergence_csv(h, dir / "c.csv");
    const auto rows = read_csv(dir / "c.csv");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[2][4], "1.25");
    EXPECT_EQ(rows[2][5], "");
    EXPECT_THROW(write_convergence_csv({}, dir / "d.csv"), std::invalid_argument);
    EXPECT_THROW(write_convergence_csv(h, dir / "missing" / "c.csv"), std::runtime_error);
}

TEST(Report, SolutionSamples) {
    const fs::path dir = scratch("sol");
    std::mt19937_64 rng(8);
    const Mesh1D m = hlfem::testing::random_mesh(6, rng);
    const FemField u = hlfem::testing::random_field(m, rng);
    write_solution_samples(u, nullptr, dir / "u.csv");
    auto rows = read_csv(dir / "u.csv");
    EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "u"}));
    ASSERT_EQ(rows.size(), 1 + m.node_count() + 10 * m.element_count());
    for (std::size_t i = 0; i < m.node_count(); ++i) {
        const auto& r = rows[1 + 11 * i];
        EXPECT_EQ(std::stod(r[0]), m.node(i));
        EXPECT_EQ(std::stod(r[1]), u.values()[i]);
    }
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const double x = std::stod(rows[k][0]);
        EXPECT_EQ(std::stod(rows[k][1]), u.evaluate(x).value);
    }
    const FemField zero = FemField::zero(m);
    write_solution_samples(zero, &u, dir / "z.csv");
    rows = read_csv(dir / "z.csv");
    EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "u", "u_ref"}));
    for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_EQ(std::stod(rows[k][1]), 0.0);
}

TEST(Report, NumbersRoundTrip) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, i % 40 - 20);
        EXPECT_EQ(std::stod(format_number(v)), v);
    }
}

TEST(Run, SolveModeMatchesDirectSolve) {
    RunConfig cfg;
    cfg.mode = RunMode::Solve;
    cfg.mu = 1.0;
    cfg.sigma = 1.0;
    cfg.beta = "10";
    cfg.f = "1";
    cfg.n_elements = 25;
    cfg.reference_elements = 5000;
    cfg.output_dir = scratch("solve");
    const json summary = run(cfg);
    EXPECT_TRUE(fs::exists(cfg.output_dir / "summary.json"));
    const FemField direct = solve_regularized(uniform_mesh(25, 0.0, 1.0), hlfem::testing::mild_problem(), 0.0,
                                              ReducedSolution::zero(0.0, 1.0));
    const auto rows = read_csv(cfg.output_dir / "solution_iter_1.csv");
    for (std::size_t i = 0; i < 26; ++i) {
        EXPECT_NEAR(std::stod(rows[1 + 11 * i][1]), direct.values()[i], 1e-10);
    }
    // reference column against an independent finer solve
    const FemField fine = solve_regularized(uniform_mesh(10000, 0.0, 1.0), hlfem::testing::mild_problem(), 0.0,
                                            ReducedSolution::zero(0.0, 1.0));
    const auto& mid = rows[1 + 11 * 12 + 6];
    const double x = std::stod(mid[0]);
    EXPECT_NEAR(std::stod(mid[2]), fine.evaluate(x).value, 1e-6);
    EXPECT_TRUE(summary["result"].contains("error_percent"));
}

TEST(Run, HLambdaWritesReports) {
    RunConfig cfg;
    cfg.output_dir = scratch("hl");
    const json summary = run(cfg);
    const auto rows = read_csv(cfg.output_dir / "convergence.csv");
    ASSERT_GE(rows.size(), 2u);
    ASSERT_LE(rows.size(), 9u);
    EXPECT_EQ(rows[1][1], "14");
    EXPECT_EQ(rows[1][4], "");
    EXPECT_LT(std::stod(rows.back()[3]), 0.2);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        EXPECT_TRUE(fs::exists(cfg.output_dir / ("solution_iter_" + std::to_string(k) + ".csv")));
    }
    EXPECT_TRUE(summary["final"]["converged"].get<bool>());
}

TEST(Run, BaselineLeavesCallsEmpty) {
    RunConfig cfg;
    cfg.mode = RunMode::HBaseline;
    cfg.reference_elements = 0;
    cfg.output_dir = scratch("hb");
    (void)run(cfg);
    const auto rows = read_csv(cfg.output_dir / "convergence.csv");
    for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_EQ(rows[k][5], "");
    const auto sol = read_csv(cfg.output_dir / "solution_iter_1.csv");
    EXPECT_EQ(sol[0].size(), 2u);
}

TEST(Run, LossScanOutput) {
    RunConfig cfg;
    cfg.mode = RunMode::LossScan;
    cfg.output_dir = scratch("ls");
    const json summary = run(cfg);
    const auto rows = read_csv(cfg.output_dir / "loss_scan.csv");
    EXPECT_EQ(rows[0], (std::vector<std::string>{"lambda", "H"}));
    EXPECT_EQ(rows.size(), 201u);
    EXPECT_TRUE(summary["result"]["unique_interior_minimum"].get<bool>());
}

TEST(Run, CapErrorStillWritesHistory) {
    RunConfig cfg;
    cfg.max_iterations = 2;
    cfg.reference_elements = 0;
    cfg.output_dir = scratch("cap");
    EXPECT_THROW((void)run(cfg), AdaptError);
    EXPECT_EQ(read_csv(cfg.output_dir / "convergence.csv").size(), 3u);
}

TEST(Run, IdenticalConfigsGiveIdenticalFiles) {
    RunConfig cfg;
    cfg.backend.kind = BackendKind::Shots;
    cfg.backend.noisy_search = true;
    cfg.backend.shots = 100000;
    cfg.backend.seed = 17;
    cfg.reference_elements = 200;
    cfg.output_dir = scratch("det1");
    try {
        (void)run(cfg);
    } catch (const AdaptError&) {
    }
    RunConfig again = cfg;
    again.output_dir = scratch("det2");
    try {
        (void)run(again);
    } catch (const AdaptError&) {
    }
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(cfg.output_dir)) {
        if (entry.path().extension() != ".csv") continue;
        EXPECT_EQ(slurp(entry.path()), slurp(again.output_dir / entry.path().filename())) << entry.path();
        ++compared;
    }
    EXPECT_GE(compared, 2u);
}

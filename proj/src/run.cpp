#include "hlfem/run.hpp"

#include <optional>

#include <fmt/format.h>

#include "hlfem/adaptive.hpp"
#include "hlfem/cauchy.hpp"
#include "hlfem/estimator.hpp"
#include "hlfem/report.hpp"
#include "hlfem/solver.hpp"
#include "hlfem/stabilize.hpp"

namespace hlfem {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::optional<FemField> reference_solution(const RunConfig& cfg, const ProblemCoefficients& c) {
    if (cfg.reference_elements == 0) {
        return std::nullopt;
    }
    const Mesh1D mesh = uniform_mesh(cfg.reference_elements, c.a, c.b);
    return solve_regularized(mesh, c, 0.0, ReducedSolution::zero(c.a, c.b));
}

json iteration_json(const AdaptIteration& it) {
    json j{
        {"iteration", it.index},
        {"dof", it.dof},
        {"accumulated_dof", it.accumulated_dof},
        {"error_percent", it.error_percent},
        {"lambda_star", it.lambda_star},
        {"lambda_max", it.lambda_max},
        {"loss_at_star", it.loss_at_star},
        {"eta_abs", it.eta_abs},
        {"order", it.order ? json(*it.order) : json(nullptr)},
        {"quantum_calls", it.quantum_calls ? json(*it.quantum_calls) : json(nullptr)},
    };
    return j;
}

void write_history(std::span<const AdaptIteration> history, const FemField* reference, const fs::path& dir) {
    if (history.empty()) {
        return;
    }
    write_convergence_csv(history, dir / "convergence.csv");
    for (const AdaptIteration& it : history) {
        write_solution_samples(it.field, reference, dir / fmt::format("solution_iter_{}.csv", it.index));
    }
}

json run_adaptive(const RunConfig& cfg, const ProblemCoefficients& c, json summary) {
    const std::optional<FemField> ref = reference_solution(cfg, c);
    const FemField* ref_ptr = ref ? &*ref : nullptr;
    const AdaptConfig acfg = cfg.adapt();
    SolveBackend backend(cfg.backend);
    AdaptResult result = [&] {
        try {
            return cfg.mode == RunMode::HLambda ? run_hlambda_adaptive(c, acfg, backend)
                                                : run_h_adaptive_baseline(c, acfg);
        } catch (const AdaptError& e) {
            // keep whatever was computed before the loop gave up
            write_history(e.history(), ref_ptr, cfg.output_dir);
            throw;
        }
    }();
    write_history(result.iterations, ref_ptr, cfg.output_dir);

    json iterations = json::array();
    for (const AdaptIteration& it : result.iterations) iterations.push_back(iteration_json(it));
    const AdaptIteration& last = result.iterations.back();
    summary["x_layer"] = result.x_layer;
    summary["iterations"] = std::move(iterations);
    summary["final"] = {
        {"iterations", last.index},
        {"dof", last.dof},
        {"accumulated_dof", last.accumulated_dof},
        {"error_percent", last.error_percent},
        {"converged", last.error_percent < cfg.tol_percent},
    };
    if (cfg.mode == RunMode::HLambda) {
        summary["final"]["quantum_calls_total"] = backend.calls();
    }
    if (ref) {
        summary["final"]["vnorm_error_vs_reference"] = vnorm_error_vs_reference(result.final_field, *ref);
    }
    return summary;
}

json run_solve(const RunConfig& cfg, const ProblemCoefficients& c, json summary) {
    const Mesh1D mesh = uniform_mesh(cfg.n_elements, c.a, c.b);
    const ReducedSolution u0 =
        cfg.lambda > 0.0 ? solve_reduced(c, cfg.reduced_steps != 0 ? cfg.reduced_steps
                                                                    : default_reduced_steps(cfg.n_elements))
                         : ReducedSolution::zero(c.a, c.b);
    const FemField field = solve_regularized(mesh, c, cfg.lambda, u0);
    const double x_layer = initial_layer_node(mesh, cfg.layer_side);
    const std::optional<FemField> ref = reference_solution(cfg, c);
    write_solution_samples(field, ref ? &*ref : nullptr, cfg.output_dir / "solution_iter_1.csv");

    json result{
        {"lambda", cfg.lambda},
        {"dof", mesh.dof()},
        {"x_layer", x_layer},
        {"loss", loss_H(field, x_layer, cfg.layer_side, cfg.loss_mode).value},
    };
    if (c.sigma > 0.0) {
        const ErrorBreakdown eb = global_error_percent(c, cfg.lambda, u0, field, x_layer, cfg.layer_side);
        result["error_percent"] = eb.error_percent;
        result["estimator_bound"] = theorem1_bound(c, cfg.lambda, u0, field);
    }
    if (ref) {
        result["vnorm_error_vs_reference"] = vnorm_error_vs_reference(field, *ref);
    }
    summary["result"] = std::move(result);
    return summary;
}

json run_loss_scan(const RunConfig& cfg, const ProblemCoefficients& c, json summary) {
    const Mesh1D mesh = uniform_mesh(cfg.n_elements, c.a, c.b);
    const ReducedSolution u0 =
        solve_reduced(c, cfg.reduced_steps != 0 ? cfg.reduced_steps : default_reduced_steps(cfg.n_elements));
    const double lam_max = lambda_max(c, cfg.n_elements);
    const double x_layer = initial_layer_node(mesh, cfg.layer_side);
    const std::vector<LossSample> samples =
        loss_scan(mesh, c, u0, lam_max, x_layer, cfg.layer_side, cfg.loss_mode, cfg.scan_samples);
    write_loss_scan_csv(samples, cfg.output_dir / "loss_scan.csv");
    const LossScanShape shape = analyze_loss_scan(samples);
    summary["result"] = {
        {"lambda_max", lam_max},
        {"samples", samples.size()},
        {"argmin_lambda", samples[shape.argmin].lambda},
        {"min_H", samples[shape.argmin].loss},
        {"H_at_zero", samples.front().loss},
        {"H_at_lambda_max", samples.back().loss},
        {"interior_local_minima", shape.interior_local_minima},
        {"unique_interior_minimum", shape.unique_interior_minimum},
    };
    return summary;
}

} // namespace

json run(const RunConfig& cfg) {
    cfg.validate();
    const ProblemCoefficients c = cfg.problem();
    fs::create_directories(cfg.output_dir);

    json summary{
        {"config", config_to_json(cfg)},
        {"peclet", peclet(c)},
    };
    switch (cfg.mode) {
    case RunMode::HLambda:
    case RunMode::HBaseline:
        summary = run_adaptive(cfg, c, std::move(summary));
        break;
    case RunMode::Solve:
        summary = run_solve(cfg, c, std::move(summary));
        break;
    case RunMode::LossScan:
        summary = run_loss_scan(cfg, c, std::move(summary));
        break;
    }
    write_json(summary, cfg.output_dir / "summary.json");
    return summary;
}

} // namespace hlfem

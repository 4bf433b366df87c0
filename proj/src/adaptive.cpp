#include "hlfem/adaptive.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "hlfem/cauchy.hpp"
#include "hlfem/estimator.hpp"

namespace hlfem {

std::vector<std::size_t> mark_for_refinement(std::span<const double> eta, std::span<const std::size_t> region,
                                             double theta) {
    std::vector<std::size_t> marked;
    if (region.empty()) {
        return marked;
    }
    double top = 0.0;
    for (const std::size_t e : region) top = std::max(top, eta[e]);
    const double threshold = theta * top;
    for (const std::size_t e : region) {
        if (eta[e] > threshold) marked.push_back(e);
    }
    return marked;
}

void AdaptConfig::validate() const {
    if (initial_elements < 3) {
        throw std::invalid_argument("N: initial element count must be at least 3");
    }
    if (!(tol_percent > 0.0) || !std::isfinite(tol_percent)) {
        throw std::invalid_argument("tol_percent: must be positive");
    }
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("theta: must lie in (0, 1]");
    }
    if (!(search.tol > 0.0) || !std::isfinite(search.tol)) {
        throw std::invalid_argument("lambda_tol: must be positive");
    }
    if (search.scan_intervals < 2) {
        throw std::invalid_argument("scan_intervals: must be at least 2");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("max_iterations: must be at least 1");
    }
    if (reduced_steps != 0 && reduced_steps < 16) {
        throw std::invalid_argument("reduced_steps: must be 0 (automatic) or at least 16");
    }
}

double initial_layer_node(const Mesh1D& mesh, LayerSide side) {
    return side == LayerSide::Right ? mesh.node(mesh.node_count() - 2) : mesh.node(1);
}

namespace {

struct Loop {
    const ProblemCoefficients& c;
    const AdaptConfig& cfg;
    SolveBackend* backend; // null for the baseline

    std::size_t reduced_steps(std::size_t elements) const {
        return cfg.reduced_steps != 0 ? cfg.reduced_steps : default_reduced_steps(elements);
    }

    AdaptResult run() const {
        cfg.validate();
        (void)estimator_alpha(c); // rejects sigma = 0 up front
        Mesh1D mesh = uniform_mesh(cfg.initial_elements, c.a, c.b);
        const double x_layer = initial_layer_node(mesh, cfg.side);
        double lam_max = lambda_max(c, mesh.element_count());

        const bool stabilized = backend != nullptr;
        std::optional<ReducedSolution> u0;
        if (stabilized) {
            u0 = solve_reduced(c, reduced_steps(mesh.element_count()));
        } else {
            u0 = ReducedSolution::zero(c.a, c.b);
        }

        std::vector<AdaptIteration> history;
        std::size_t accumulated = 0;
        for (int it = 1; it <= cfg.max_iterations; ++it) {
            if (stabilized && cfg.reduced_steps == 0 && 8 * mesh.element_count() > u0->steps()) {
                u0 = solve_reduced(c, reduced_steps(mesh.element_count()));
            }

            accumulated += mesh.dof();
            AdaptIteration rec{it, mesh.dof(), accumulated, 0.0, 0.0, stabilized ? lam_max : 0.0, 0.0,
                               std::nullopt, std::nullopt, 0.0, FemField::zero(mesh)};
            if (stabilized) {
                StabilizationOptions opts;
                opts.x_layer = x_layer;
                opts.side = cfg.side;
                opts.mode = cfg.loss_mode;
                opts.search = cfg.search;
                StabilizationResult sr = quantum_stabilized_solution(mesh, c, *u0, lam_max, *backend, opts);
                rec.field = std::move(sr.field);
                rec.lambda_star = sr.lambda_star;
                rec.loss_at_star = sr.loss_at_star;
                rec.quantum_calls = sr.quantum_calls;
            } else {
                rec.field = solve_regularized(mesh, c, 0.0, *u0);
            }

            const ErrorBreakdown eb = global_error_percent(c, rec.lambda_star, *u0, rec.field, x_layer, cfg.side);
            rec.error_percent = eb.error_percent;
            rec.eta_abs = eb.eta_left_abs;
            if (!history.empty()) {
                const AdaptIteration& prev = history.back();
                if (prev.eta_abs > 0.0 && rec.eta_abs > 0.0 && rec.dof > prev.dof) {
                    rec.order = order_of_convergence(prev.eta_abs, rec.eta_abs, prev.dof, rec.dof);
                }
            }
            history.push_back(rec);

            if (rec.error_percent < cfg.tol_percent) {
                return {std::move(history), std::move(rec.field), x_layer};
            }

            std::vector<std::size_t> marked = mark_for_refinement(eb.eta, eb.partition.left_elements, cfg.theta);
            const std::vector<std::size_t> right = mark_for_refinement(eb.eta, eb.partition.right_elements, cfg.theta);
            marked.insert(marked.end(), right.begin(), right.end());
            if (marked.empty()) {
                throw AdaptError(fmt::format("adaptive loop stagnated at iteration {}: nothing marked", it),
                                 std::move(history));
            }
            mesh = bisect_elements(mesh, marked);
            lam_max = cfg.reuse_lambda_max ? rec.lambda_star : lambda_max(c, mesh.element_count());
        }
        throw AdaptError(fmt::format("adaptive loop reached the cap of {} iterations", cfg.max_iterations),
                         std::move(history));
    }
};

} // namespace

AdaptResult run_hlambda_adaptive(const ProblemCoefficients& c, const AdaptConfig& cfg, SolveBackend& backend) {
    return Loop{c, cfg, &backend}.run();
}

AdaptResult run_h_adaptive_baseline(const ProblemCoefficients& c, const AdaptConfig& cfg) {
    return Loop{c, cfg, nullptr}.run();
}

} // namespace hlfem

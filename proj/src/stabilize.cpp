#include "hlfem/stabilize.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "hlfem/quantum.hpp"

namespace hlfem {

namespace {

// Shrinks [lo, hi] to length <= tol with two probes per step.
SearchResult ternary(const std::function<double(double)>& evaluate, double lo, double hi, double tol) {
    long evaluations = 0;
    while (hi - lo > tol) {
        const double third = (hi - lo) / 3.0;
        const double m1 = lo + third;
        const double m2 = hi - third;
        const double f1 = evaluate(m1);
        const double f2 = evaluate(m2);
        evaluations += 2;
        if (f1 < f2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    return {0.5 * (lo + hi), evaluations};
}

} // namespace

std::string_view to_string(SearchStrategy s) {
    return s == SearchStrategy::Ternary ? "ternary" : "scan-ternary";
}

SearchStrategy parse_search_strategy(std::string_view name) {
    if (name == "ternary") return SearchStrategy::Ternary;
    if (name == "scan-ternary") return SearchStrategy::ScanTernary;
    throw std::invalid_argument(fmt::format("unknown search strategy '{}'", name));
}

SearchResult minimize_loss(const std::function<double(double)>& evaluate, double lambda_max,
                           const SearchOptions& options) {
    if (!(options.tol > 0.0)) {
        throw std::invalid_argument("minimize_loss: tol must be positive");
    }
    if (!(lambda_max > 0.0)) {
        return {0.0, 0};
    }
    if (lambda_max <= options.tol) {
        return {0.5 * lambda_max, 0};
    }
    if (options.strategy == SearchStrategy::Ternary) {
        return ternary(evaluate, 0.0, lambda_max, options.tol);
    }
    if (options.scan_intervals < 2) {
        throw std::invalid_argument("minimize_loss: scan_intervals must be at least 2");
    }
    const int g = options.scan_intervals;
    const double step = lambda_max / g;
    int best = 0;
    double best_value = 0.0;
    for (int i = 0; i <= g; ++i) {
        const double v = evaluate(i == g ? lambda_max : i * step);
        if (i == 0 || v < best_value) {
            best = i;
            best_value = v;
        }
    }
    const double lo = best == 0 ? 0.0 : (best - 1) * step;
    const double hi = best == g ? lambda_max : (best + 1) * step;
    SearchResult r = ternary(evaluate, lo, hi, options.tol);
    r.evaluations += g + 1;
    return r;
}

double lambda_max(const ProblemCoefficients& c, std::size_t n_elements) {
    if (n_elements == 0) {
        throw std::invalid_argument("lambda_max: element count must be positive");
    }
    return 2.0 * beta_sup_norm(c) * (c.b - c.a) / static_cast<double>(n_elements);
}

StabilizationResult quantum_stabilized_solution(const Mesh1D& mesh, const ProblemCoefficients& c,
                                                const ReducedSolution& u0, double lambda_max,
                                                SolveBackend& backend, const StabilizationOptions& options) {
    const LossWeights weights = build_loss_weights(mesh, options.x_layer, options.side, options.mode);
    const BackendSettings& bs = backend.settings();
    quantum::HhlConfig hhl;
    hhl.clock_qubits = bs.clock_qubits;
    hhl.evolution_time = bs.evolution_time;
    hhl.postselection_retries = bs.postselection_retries;
    hhl.shots = bs.noisy_search ? bs.shots : 0;
    hhl.seed = bs.seed;

    const long calls_before = backend.calls();
    const auto probe = [&](double lambda) {
        const TridiagonalSystem sys = assemble_regularized(mesh, c, lambda, u0);
        const std::vector<double> x = backend.solve(sys, true);
        if (bs.kind == BackendKind::Exact) {
            return loss_from_weights(weights, x).value;
        }
        // HHL is emulated only up to 8 unknowns; larger systems use exact state preparation
        const auto mode = bs.kind == BackendKind::Hhl && sys.size() <= 8 ? quantum::EvaluationMode::Hhl
                                                                         : quantum::EvaluationMode::Shots;
        return quantum::quantum_H_evaluation(sys, weights, hhl, mode, backend.rng());
    };
    const SearchResult search = minimize_loss(probe, lambda_max, options.search);

    FemField field = solve_regularized(mesh, c, search.lambda_star, u0);
    const double loss = loss_from_weights(weights, field.interior_values()).value;
    return {std::move(field), search.lambda_star, loss, backend.calls() - calls_before};
}

std::vector<LossSample> loss_scan(const Mesh1D& mesh, const ProblemCoefficients& c, const ReducedSolution& u0,
                                  double lambda_max, double x_layer, LayerSide side, LossMode mode,
                                  std::size_t samples) {
    if (samples < 2) {
        throw std::invalid_argument("loss_scan: need at least 2 samples");
    }
    if (!(lambda_max >= 0.0)) {
        throw std::invalid_argument("loss_scan: lambda_max must be nonnegative");
    }
    const LossWeights weights = build_loss_weights(mesh, x_layer, side, mode);
    std::vector<LossSample> out;
    out.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double lambda =
            i + 1 == samples ? lambda_max : lambda_max * static_cast<double>(i) / static_cast<double>(samples - 1);
        const std::vector<double> x = thomas_solve(assemble_regularized(mesh, c, lambda, u0));
        out.push_back({lambda, loss_from_weights(weights, x).value});
    }
    return out;
}

LossScanShape analyze_loss_scan(std::span<const LossSample> samples) {
    LossScanShape shape;
    const std::size_t n = samples.size();
    if (n == 0) {
        return shape;
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (samples[i].loss < samples[shape.argmin].loss) shape.argmin = i;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (samples[i].loss < samples[i - 1].loss && samples[i].loss < samples[i + 1].loss) {
            ++shape.interior_local_minima;
        }
    }
    const double best = samples[shape.argmin].loss;
    shape.unique_interior_minimum = shape.argmin > 0 && shape.argmin + 1 < n && best < samples.front().loss &&
                                    best < samples.back().loss && shape.interior_local_minima == 1;
    return shape;
}

} // namespace hlfem

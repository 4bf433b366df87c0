#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "hlfem/assembly.hpp"
#include "hlfem/cauchy.hpp"
#include "hlfem/loss.hpp"
#include "hlfem/solver.hpp"

namespace hlfem {

/// Ternary: plain ternary search over [0, lambda_max].
/// ScanTernary: coarse uniform scan first, then ternary refinement of the
/// bracket around the best scan point. H is not unimodal on the full
/// interval for strongly advective data, which sends plain ternary search
/// to the wrong end.
enum class SearchStrategy { Ternary, ScanTernary };

[[nodiscard]] std::string_view to_string(SearchStrategy s);
/// Accepts "ternary" and "scan-ternary".
[[nodiscard]] SearchStrategy parse_search_strategy(std::string_view name);

struct SearchOptions {
    double tol = 1.0;
    SearchStrategy strategy = SearchStrategy::ScanTernary;
    /// Number of scan intervals (scan_intervals + 1 probes).
    int scan_intervals = 8;
};

struct SearchResult {
    double lambda_star = 0.0;
    long evaluations = 0;
};

/// Minimizes `evaluate` on [0, lambda_max]. Returns (0, 0) when
/// lambda_max <= 0 and the midpoint without probing when lambda_max <= tol.
/// Ternary uses exactly 2 ceil(log_{3/2}(lambda_max / tol)) evaluations.
[[nodiscard]] SearchResult minimize_loss(const std::function<double(double)>& evaluate, double lambda_max,
                                         const SearchOptions& options = {});

/// 2 |beta|_inf (b - a) / n.
[[nodiscard]] double lambda_max(const ProblemCoefficients& c, std::size_t n_elements);

struct StabilizationOptions {
    double x_layer = 0.0;
    LayerSide side = LayerSide::Right;
    LossMode mode = LossMode::ExcludeLayer;
    SearchOptions search{};
};

struct StabilizationResult {
    FemField field;
    double lambda_star = 0.0;
    double loss_at_star = 0.0;
    long quantum_calls = 0;
};

/// Searches lambda in [0, lambda_max] minimizing H. Every probe assembles
/// the regularized system, solves it through `backend` as a loss evaluation
/// and evaluates H (via the quantum module unless the backend is exact).
/// The field at lambda* is then read out classically and not counted.
[[nodiscard]] StabilizationResult quantum_stabilized_solution(const Mesh1D& mesh, const ProblemCoefficients& c,
                                                              const ReducedSolution& u0, double lambda_max,
                                                              SolveBackend& backend,
                                                              const StabilizationOptions& options);

struct LossSample {
    double lambda = 0.0;
    double loss = 0.0;
};

/// Classical H at `samples` equispaced lambda values covering [0, lambda_max].
[[nodiscard]] std::vector<LossSample> loss_scan(const Mesh1D& mesh, const ProblemCoefficients& c,
                                                const ReducedSolution& u0, double lambda_max, double x_layer,
                                                LayerSide side, LossMode mode, std::size_t samples);

struct LossScanShape {
    std::size_t argmin = 0;
    /// Interior samples strictly below both neighbours.
    std::size_t interior_local_minima = 0;
    /// Global minimum is interior, strictly below both end values, and the
    /// only interior local minimum.
    bool unique_interior_minimum = false;
};

[[nodiscard]] LossScanShape analyze_loss_scan(std::span<const LossSample> samples);

} // namespace hlfem

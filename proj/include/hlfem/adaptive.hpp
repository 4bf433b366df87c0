#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hlfem/assembly.hpp"
#include "hlfem/loss.hpp"
#include "hlfem/solver.hpp"
#include "hlfem/stabilize.hpp"

namespace hlfem {

/// Elements of `region` with eta strictly above theta times the region maximum.
[[nodiscard]] std::vector<std::size_t> mark_for_refinement(std::span<const double> eta,
                                                           std::span<const std::size_t> region, double theta);

struct AdaptConfig {
    std::size_t initial_elements = 15;
    double tol_percent = 0.2;
    double theta = 2.0 / 3.0;
    LayerSide side = LayerSide::Right;
    LossMode loss_mode = LossMode::ExcludeLayer;
    /// search.tol is the lambda tolerance.
    SearchOptions search{};
    bool reuse_lambda_max = true;
    int max_iterations = 25;
    /// RK4 steps for the reduced problem; 0 picks default_reduced_steps.
    std::size_t reduced_steps = 0;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct AdaptIteration {
    int index = 0;
    std::size_t dof = 0;
    std::size_t accumulated_dof = 0;
    double error_percent = 0.0;
    double lambda_star = 0.0;
    double lambda_max = 0.0;
    double loss_at_star = 0.0;
    /// Absent for the h-baseline.
    std::optional<long> quantum_calls;
    /// Absent on the first iteration.
    std::optional<double> order;
    /// sqrt(sum eta_K^2) over the smooth region.
    double eta_abs = 0.0;
    FemField field;
};

struct AdaptResult {
    std::vector<AdaptIteration> iterations;
    FemField final_field;
    double x_layer = 0.0;
};

/// The loop hit the iteration cap or marked nothing; carries the history so far.
class AdaptError : public std::runtime_error {
public:
    AdaptError(const std::string& message, std::vector<AdaptIteration> history)
        : std::runtime_error(message), history_(std::move(history)) {}
    [[nodiscard]] const std::vector<AdaptIteration>& history() const noexcept { return history_; }

private:
    std::vector<AdaptIteration> history_;
};

/// Separator node: the pre-last node of the initial mesh for a right layer,
/// the second node for a left one.
[[nodiscard]] double initial_layer_node(const Mesh1D& mesh, LayerSide side);

/// hlambda-adaptive loop with quantum-stabilized solves.
[[nodiscard]] AdaptResult run_hlambda_adaptive(const ProblemCoefficients& c, const AdaptConfig& cfg,
                                               SolveBackend& backend);

/// The same loop with lambda = 0 and no search.
[[nodiscard]] AdaptResult run_h_adaptive_baseline(const ProblemCoefficients& c, const AdaptConfig& cfg);

} // namespace hlfem

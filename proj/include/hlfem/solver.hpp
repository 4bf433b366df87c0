#pragma once

#include <atomic>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "hlfem/assembly.hpp"

namespace hlfem {

class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pivot-free Thomas elimination. Throws SingularSystemError when a pivot
/// falls below 1e-14 times the largest band entry.
[[nodiscard]] std::vector<double> thomas_solve(const TridiagonalSystem& s);

/// Assemble and solve the regularized problem classically.
[[nodiscard]] FemField solve_regularized(const Mesh1D& mesh, const ProblemCoefficients& c, double lambda,
                                         const ReducedSolution& u0);

enum class BackendKind { Exact, Shots, Hhl };

[[nodiscard]] std::string_view to_string(BackendKind kind);
/// Accepts "exact", "shots", "hhl"; throws std::invalid_argument otherwise.
[[nodiscard]] BackendKind parse_backend_kind(std::string_view name);

struct BackendSettings {
    BackendKind kind = BackendKind::Exact;
    std::uint64_t shots = 10000;
    int clock_qubits = 6;
    /// 0 selects the automatic evolution time.
    double evolution_time = 0.0;
    int postselection_retries = 100000;
    std::uint64_t seed = 1;
    /// Apply shot noise to the loss values that drive the parameter search.
    bool noisy_search = false;
};

/// Route for the linear solves behind loss evaluations.
///
/// Every solve flagged as a loss evaluation is one "quantum solver call"
/// (an HHL + SWAP pair); the classical readout of the final field is not.
/// The nodal vector is always produced classically; the quantum emulation
/// only affects how the loss value is obtained from it.
class SolveBackend {
public:
    explicit SolveBackend(BackendSettings settings = {});

    [[nodiscard]] const BackendSettings& settings() const noexcept { return settings_; }
    [[nodiscard]] BackendKind kind() const noexcept { return settings_.kind; }

    std::vector<double> solve(const TridiagonalSystem& s, bool loss_evaluation);

    [[nodiscard]] long calls() const noexcept { return calls_.load(); }
    [[nodiscard]] std::mt19937_64& rng() noexcept { return rng_; }

private:
    BackendSettings settings_;
    std::atomic<long> calls_{0};
    std::mt19937_64 rng_;
};

inline std::vector<double> backend_solve(SolveBackend& backend, const TridiagonalSystem& s, bool loss_evaluation) {
    return backend.solve(s, loss_evaluation);
}

} // namespace hlfem

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hlfem/assembly.hpp"
#include "hlfem/loss.hpp"

namespace hlfem::quantum {

using Amplitude = std::complex<double>;

class HhlError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Normalized amplitudes over 2^q basis states.
class QuantumState {
public:
    /// Throws std::invalid_argument unless the length is a power of two and
    /// the squared magnitudes sum to 1 within 1e-10.
    explicit QuantumState(std::vector<Amplitude> amplitudes);

    [[nodiscard]] std::size_t dimension() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] int qubits() const noexcept { return qubits_; }
    [[nodiscard]] std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] Amplitude operator[](std::size_t i) const { return amplitudes_.at(i); }

private:
    std::vector<Amplitude> amplitudes_;
    int qubits_ = 0;
};

/// v / |v|, zero padded to the next power of two. Throws on a zero vector.
[[nodiscard]] QuantumState amplitude_encode(std::span<const double> v);

/// |<a|b>|^2.
[[nodiscard]] double overlap_squared(const QuantumState& a, const QuantumState& b);

/// SWAP-test estimate of |<a|b>|^2. With shots == 0 the exact value is
/// returned; otherwise `shots` ancilla measurements with
/// P(0) = (1 + |<a|b>|^2) / 2 are drawn and max(0, 2 p0 - 1) returned.
[[nodiscard]] double swap_test_estimate(const QuantumState& a, const QuantumState& b, std::uint64_t shots,
                                        std::mt19937_64& rng);

struct HhlConfig {
    int clock_qubits = 6;
    /// 0 selects t so that the largest |eigenvalue| lands on the last
    /// positive phase bin.
    double evolution_time = 0.0;
    int postselection_retries = 100000;
    /// Shots for the SWAP stage; 0 means exact overlap.
    std::uint64_t shots = 0;
    std::uint64_t seed = 1;
};

struct HhlOutcome {
    QuantumState solution;
    double success_probability = 0.0;
    int attempts = 0;
    double evolution_time = 0.0;
};

/// Statevector simulation of HHL on the Hermitian dilation [[0, A], [A^T, 0]]:
/// phase estimation with `clock_qubits` clock qubits and U = exp(i H t),
/// eigenvalue inversion with C = 2 pi / (2^n t), uncomputation, then
/// postselection on ancilla = 1 and clock = 0. Returns the normalized
/// solution block (dimension = A padded to a power of two).
///
/// A must be square, at most 8x8 and invertible; clock_qubits in [1, 8].
[[nodiscard]] HhlOutcome hhl_statevector_solve(const Eigen::MatrixXd& A, std::span<const double> b,
                                               const HhlConfig& cfg, std::mt19937_64& rng);
[[nodiscard]] HhlOutcome hhl_statevector_solve(const Eigen::MatrixXd& A, std::span<const double> b,
                                               const HhlConfig& cfg);

[[nodiscard]] Eigen::MatrixXd to_dense(const TridiagonalSystem& s);

enum class EvaluationMode { Exact, Shots, Hhl };

[[nodiscard]] std::string_view to_string(EvaluationMode mode);

/// Loss value |w . u| / |u| of the solution u of `s`, obtained as
/// |w| sqrt(SWAP(|u>, |w>)):
///  - Exact: classical solve and direct evaluation (identical to loss_from_weights),
///  - Shots: exact solution state, SWAP test with cfg.shots,
///  - Hhl:   HHL-prepared state (system size <= 8), SWAP test with cfg.shots.
[[nodiscard]] double quantum_H_evaluation(const TridiagonalSystem& s, const LossWeights& w, const HhlConfig& cfg,
                                          EvaluationMode mode, std::mt19937_64& rng);

} // namespace hlfem::quantum

#include "hlfem/quantum.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "hlfem/solver.hpp"

namespace hlfem::quantum {

namespace {

constexpr double kNormTol = 1e-10;
constexpr std::size_t kMaxSystem = 8;
constexpr int kMaxClock = 8;

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;

} // namespace

QuantumState::QuantumState(std::vector<Amplitude> amplitudes) : amplitudes_(std::move(amplitudes)) {
    const std::size_t n = amplitudes_.size();
    if (n == 0 || !std::has_single_bit(n)) {
        throw std::invalid_argument("QuantumState: dimension must be a power of two");
    }
    double s = 0.0;
    for (const Amplitude& a : amplitudes_) s += std::norm(a);
    if (std::abs(s - 1.0) > kNormTol) {
        throw std::invalid_argument(fmt::format("QuantumState: norm^2 = {:.17g}, expected 1", s));
    }
    qubits_ = std::countr_zero(n);
}

QuantumState amplitude_encode(std::span<const double> v) {
    double s = 0.0;
    for (const double x : v) s += x * x;
    if (v.empty() || s == 0.0) {
        throw std::invalid_argument("amplitude_encode: zero vector");
    }
    const double norm = std::sqrt(s);
    std::vector<Amplitude> amp(std::bit_ceil(v.size()), Amplitude(0.0, 0.0));
    for (std::size_t i = 0; i < v.size(); ++i) amp[i] = v[i] / norm;
    return QuantumState(std::move(amp));
}

double overlap_squared(const QuantumState& a, const QuantumState& b) {
    if (a.dimension() != b.dimension()) {
        throw std::invalid_argument("overlap: dimension mismatch");
    }
    Amplitude dot(0.0, 0.0);
    for (std::size_t i = 0; i < a.dimension(); ++i) dot += std::conj(a[i]) * b[i];
    return std::min(1.0, std::norm(dot));
}

double swap_test_estimate(const QuantumState& a, const QuantumState& b, std::uint64_t shots, std::mt19937_64& rng) {
    const double exact = overlap_squared(a, b);
    if (shots == 0) {
        return exact;
    }
    const double p0 = 0.5 * (1.0 + exact);
    std::binomial_distribution<std::uint64_t> draw(shots, p0);
    const double p_hat = static_cast<double>(draw(rng)) / static_cast<double>(shots);
    return std::max(0.0, 2.0 * p_hat - 1.0);
}

MatrixXd to_dense(const TridiagonalSystem& s) {
    s.validate();
    const auto m = static_cast<Eigen::Index>(s.size());
    MatrixXd A = MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto k = static_cast<std::size_t>(i);
        A(i, i) = s.diag[k];
        if (i > 0) A(i, i - 1) = s.sub[k - 1];
        if (i + 1 < m) A(i, i + 1) = s.super[k];
    }
    return A;
}

HhlOutcome hhl_statevector_solve(const MatrixXd& A, std::span<const double> b, const HhlConfig& cfg,
                                 std::mt19937_64& rng) {
    const auto m = static_cast<std::size_t>(A.rows());
    if (A.rows() != A.cols() || m == 0 || b.size() != m) {
        throw std::invalid_argument("hhl: A must be square and match b");
    }
    if (m > kMaxSystem) {
        throw std::invalid_argument(fmt::format("hhl: system size {} exceeds {}", m, kMaxSystem));
    }
    if (cfg.clock_qubits < 1 || cfg.clock_qubits > kMaxClock) {
        throw std::invalid_argument("hhl: clock_qubits must be in [1, 8]");
    }
    if (cfg.evolution_time < 0.0) {
        throw std::invalid_argument("hhl: evolution time must be positive (or 0 for automatic)");
    }

    // pad to a power of two with the mean diagonal so the spectrum stays in range
    const std::size_t p = std::bit_ceil(m);
    const auto pi = static_cast<Eigen::Index>(p);
    MatrixXd Ap = MatrixXd::Zero(pi, pi);
    Ap.topLeftCorner(A.rows(), A.cols()) = A;
    double pad = A.diagonal().mean();
    if (pad == 0.0) pad = 1.0;
    for (auto i = A.rows(); i < pi; ++i) Ap(i, i) = pad;

    const Eigen::Index dim = 2 * pi;
    MatrixXd H = MatrixXd::Zero(dim, dim);
    H.topRightCorner(pi, pi) = Ap;
    H.bottomLeftCorner(pi, pi) = Ap.transpose();

    VectorXcd input = VectorXcd::Zero(dim);
    double bn = 0.0;
    for (const double v : b) bn += v * v;
    bn = std::sqrt(bn);
    if (bn == 0.0) {
        throw std::invalid_argument("hhl: right-hand side is zero");
    }
    for (std::size_t i = 0; i < m; ++i) input(static_cast<Eigen::Index>(i)) = b[i] / bn;

    const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(H);
    const Eigen::VectorXd& evals = eig.eigenvalues();
    const MatrixXd& V = eig.eigenvectors();
    const double lam_max = evals.cwiseAbs().maxCoeff();
    const double lam_min = evals.cwiseAbs().minCoeff();
    if (!(lam_min > 1e-12 * lam_max)) {
        throw HhlError("hhl: matrix is singular");
    }

    const int n = cfg.clock_qubits;
    const Eigen::Index N = Eigen::Index{1} << n;
    const double Nd = static_cast<double>(N);
    const double two_pi = 2.0 * std::numbers::pi;
    double t = cfg.evolution_time;
    if (t == 0.0) {
        const double top_bin = std::max(Nd / 2.0 - 1.0, 0.5);
        t = two_pi * top_bin / (Nd * lam_max);
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double bins = evals(i) * t * Nd / two_pi;
        if (std::abs(bins) >= Nd / 2.0) {
            throw HhlError(fmt::format("hhl: eigenvalue {:.6g} outside the representable phase range", evals(i)));
        }
        if (std::abs(bins) < 0.5) {
            throw HhlError(fmt::format("hhl: eigenvalue {:.6g} below the phase resolution", evals(i)));
        }
    }

    // rows: clock basis state, columns: system amplitudes
    MatrixXcd psi(N, dim);
    for (Eigen::Index c = 0; c < N; ++c) psi.row(c) = input.transpose() / std::sqrt(Nd);

    std::vector<MatrixXcd> powers(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double tk = t * std::ldexp(1.0, k);
        VectorXcd phase(dim);
        for (Eigen::Index i = 0; i < dim; ++i) phase(i) = std::polar(1.0, evals(i) * tk);
        powers[static_cast<std::size_t>(k)] = V * phase.asDiagonal() * V.transpose();
    }
    const auto apply_controlled = [&](MatrixXcd& state, bool inverse) {
        for (int k = 0; k < n; ++k) {
            const MatrixXcd U = inverse ? MatrixXcd(powers[static_cast<std::size_t>(k)].adjoint())
                                        : powers[static_cast<std::size_t>(k)];
            for (Eigen::Index c = 0; c < N; ++c) {
                if ((c >> k) & 1) {
                    state.row(c) = (U * state.row(c).transpose()).transpose();
                }
            }
        }
    };

    MatrixXcd qft(N, N);
    for (Eigen::Index j = 0; j < N; ++j) {
        for (Eigen::Index c = 0; c < N; ++c) {
            qft(j, c) = std::polar(1.0 / std::sqrt(Nd), two_pi * static_cast<double>((j * c) % N) / Nd);
        }
    }

    apply_controlled(psi, false);
    psi = qft.adjoint() * psi;

    // ancilla |1> amplitude C / lambda_j = 1 / signed bin
    MatrixXcd branch(N, dim);
    for (Eigen::Index j = 0; j < N; ++j) {
        const Eigen::Index signed_bin = j < N / 2 ? j : j - N;
        const double r = signed_bin == 0 ? 0.0 : 1.0 / static_cast<double>(signed_bin);
        branch.row(j) = psi.row(j) * r;
    }

    branch = qft * branch;
    apply_controlled(branch, true);
    MatrixXd hadamard(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = 0; j < N; ++j) {
            hadamard(i, j) = (std::popcount(static_cast<unsigned>(i & j)) % 2 ? -1.0 : 1.0) / std::sqrt(Nd);
        }
    }
    const VectorXcd selected = (hadamard.row(0).cast<Amplitude>() * branch).transpose();
    const double success = selected.squaredNorm();

    int attempts = 0;
    bool ok = false;
    std::bernoulli_distribution trial(std::min(1.0, success));
    while (attempts < cfg.postselection_retries && !ok) {
        ++attempts;
        ok = success > 0.0 && trial(rng);
    }
    if (!ok) {
        throw HhlError(fmt::format("hhl: postselection failed {} times (success probability {:.3e})", attempts, success));
    }

    const VectorXcd block = selected.tail(pi);
    const double block_norm = block.norm();
    if (block_norm == 0.0) {
        throw HhlError("hhl: empty solution block");
    }
    std::vector<Amplitude> amp(p);
    for (std::size_t i = 0; i < p; ++i) amp[i] = block(static_cast<Eigen::Index>(i)) / block_norm;
    return HhlOutcome{QuantumState(std::move(amp)), success, attempts, t};
}

HhlOutcome hhl_statevector_solve(const MatrixXd& A, std::span<const double> b, const HhlConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    return hhl_statevector_solve(A, b, cfg, rng);
}

std::string_view to_string(EvaluationMode mode) {
    switch (mode) {
    case EvaluationMode::Exact:
        return "exact";
    case EvaluationMode::Shots:
        return "shots";
    case EvaluationMode::Hhl:
        return "hhl";
    }
    return "?";
}

double quantum_H_evaluation(const TridiagonalSystem& s, const LossWeights& w, const HhlConfig& cfg,
                            EvaluationMode mode, std::mt19937_64& rng) {
    if (mode == EvaluationMode::Exact) {
        const std::vector<double> x = thomas_solve(s);
        return loss_from_weights(w, x).value;
    }
    double w_norm = 0.0;
    for (const double v : w.w) w_norm += v * v;
    w_norm = std::sqrt(w_norm);
    if (w_norm == 0.0) {
        return 0.0;
    }
    const QuantumState target = amplitude_encode(w.w);
    if (mode == EvaluationMode::Shots) {
        const std::vector<double> x = thomas_solve(s);
        double xn = 0.0;
        for (const double v : x) xn += v * v;
        if (xn == 0.0) {
            return 0.0;
        }
        return w_norm * std::sqrt(swap_test_estimate(amplitude_encode(x), target, cfg.shots, rng));
    }
    if (s.size() > kMaxSystem) {
        throw std::invalid_argument(fmt::format("hhl mode: system size {} exceeds {}", s.size(), kMaxSystem));
    }
    const HhlOutcome out = hhl_statevector_solve(to_dense(s), s.rhs, cfg, rng);
    return w_norm * std::sqrt(swap_test_estimate(out.solution, target, cfg.shots, rng));
}

} // namespace hlfem::quantum

#include "hlfem/solver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace hlfem {

std::vector<double> thomas_solve(const TridiagonalSystem& s) {
    s.validate();
    const std::size_t m = s.size();
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        scale = std::max(scale, std::abs(s.diag[i]));
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
        scale = std::max({scale, std::abs(s.sub[i]), std::abs(s.super[i])});
    }
    const double tiny = 1e-14 * scale;

    std::vector<double> c(m, 0.0);
    std::vector<double> d(m, 0.0);
    double pivot = s.diag[0];
    if (!(std::abs(pivot) > tiny)) {
        throw SingularSystemError("thomas_solve: zero pivot in row 0");
    }
    c[0] = m > 1 ? s.super[0] / pivot : 0.0;
    d[0] = s.rhs[0] / pivot;
    for (std::size_t i = 1; i < m; ++i) {
        pivot = s.diag[i] - s.sub[i - 1] * c[i - 1];
        if (!(std::abs(pivot) > tiny)) {
            throw SingularSystemError(fmt::format("thomas_solve: zero pivot in row {}", i));
        }
        c[i] = i + 1 < m ? s.super[i] / pivot : 0.0;
        d[i] = (s.rhs[i] - s.sub[i - 1] * d[i - 1]) / pivot;
    }
    std::vector<double> x(m);
    x[m - 1] = d[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    return x;
}

FemField solve_regularized(const Mesh1D& mesh, const ProblemCoefficients& c, double lambda,
                           const ReducedSolution& u0) {
    const std::vector<double> x = thomas_solve(assemble_regularized(mesh, c, lambda, u0));
    return FemField::from_interior(mesh, x);
}

std::string_view to_string(BackendKind kind) {
    switch (kind) {
    case BackendKind::Exact:
        return "exact";
    case BackendKind::Shots:
        return "shots";
    case BackendKind::Hhl:
        return "hhl";
    }
    return "?";
}

BackendKind parse_backend_kind(std::string_view name) {
    if (name == "exact") return BackendKind::Exact;
    if (name == "shots") return BackendKind::Shots;
    if (name == "hhl") return BackendKind::Hhl;
    throw std::invalid_argument(fmt::format("unknown backend kind '{}'", name));
}

SolveBackend::SolveBackend(BackendSettings settings) : settings_(settings), rng_(settings.seed) {}

std::vector<double> SolveBackend::solve(const TridiagonalSystem& s, bool loss_evaluation) {
    std::vector<double> x = thomas_solve(s);
    if (loss_evaluation) {
        calls_.fetch_add(1);
    }
    return x;
}

} // namespace hlfem

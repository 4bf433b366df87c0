#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hlfem/problem.hpp"

namespace hlfem {

/// Reduced (mu = 0) problem is not a well-posed transport problem on the interval.
class ReducedProblemError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// u0 together with the first two derivatives at a point.
struct ReducedSample {
    double u0 = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Solution u0 of beta u0' + sigma u0 = f with u0 = 0 at the inflow end.
///
/// Values are stored on a uniform grid and interpolated with cubic Hermite
/// polynomials built from the stored slopes. Derivatives are never obtained
/// by differencing samples: at any x they come from the ODE itself,
///   u0'  = (f - sigma u0) / beta,
///   u0'' = (f' - (sigma + beta') u0') / beta.
class ReducedSolution {
public:
    /// The identically zero anchor, useful when beta vanishes and no reduced
    /// problem exists.
    static ReducedSolution zero(double a, double b);

    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] std::size_t steps() const noexcept { return values_.empty() ? 0 : values_.size() - 1; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<const double> slopes() const noexcept { return slopes_; }
    [[nodiscard]] double grid_point(std::size_t j) const;

    /// Throws std::out_of_range outside [a, b].
    [[nodiscard]] ReducedSample evaluate(double x) const;

private:
    friend ReducedSolution solve_reduced(const ProblemCoefficients& c, std::size_t steps);
    ReducedSolution() = default;

    double a_ = 0.0;
    double b_ = 1.0;
    std::vector<double> values_;
    std::vector<double> slopes_;
    std::optional<ProblemCoefficients> coefficients_;
};

/// Classic RK4 from the inflow end (a for beta > 0, b for beta < 0) with
/// `steps` uniform steps. Requires steps >= 16 and min |beta| > 1e-8 max |beta|.
[[nodiscard]] ReducedSolution solve_reduced(const ProblemCoefficients& c, std::size_t steps);

/// max(4096, 8 * finest element count).
[[nodiscard]] std::size_t default_reduced_steps(std::size_t finest_elements);

[[nodiscard]] inline ReducedSample eval_reduced(const ReducedSolution& r, double x) { return r.evaluate(x); }

} // namespace hlfem

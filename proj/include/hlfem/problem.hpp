#pragma once

#include "hlfem/expr.hpp"

namespace hlfem {

/// Data of -mu u'' + beta(x) u' + sigma u = f on (a, b), u(a) = u(b) = 0,
/// with constant mu and sigma.
struct ProblemCoefficients {
    double mu = 1.0;
    double sigma = 0.0;
    expr::Expression beta;
    expr::Expression f;
    expr::Expression f_prime;
    expr::Expression beta_prime;
    double a = 0.0;
    double b = 1.0;
};

/// Validates the ranges and derives f' and beta' symbolically.
/// Throws std::invalid_argument (ranges, sign change of beta) or
/// expr::DifferentiationError.
[[nodiscard]] ProblemCoefficients make_problem(double mu, double sigma, expr::Expression beta,
                                               expr::Expression f, double a = 0.0, double b = 1.0);

/// max |beta| over 1024 equispaced samples (exact for constant beta).
[[nodiscard]] double beta_sup_norm(const ProblemCoefficients& c);

/// +1 or -1 from the sampled sign of beta, 0 when beta vanishes at every sample.
[[nodiscard]] int beta_sign(const ProblemCoefficients& c);

/// Pe = |beta|_inf (b - a) / mu.
[[nodiscard]] double peclet(const ProblemCoefficients& c);

} // namespace hlfem

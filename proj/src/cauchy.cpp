#include "hlfem/cauchy.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace hlfem {

ReducedSolution ReducedSolution::zero(double a, double b) {
    if (!(a < b)) {
        throw std::invalid_argument("ReducedSolution::zero: requires a < b");
    }
    ReducedSolution r;
    r.a_ = a;
    r.b_ = b;
    r.values_.assign(2, 0.0);
    r.slopes_.assign(2, 0.0);
    return r;
}

double ReducedSolution::grid_point(std::size_t j) const {
    const std::size_t m = steps();
    if (j == m) {
        return b_;
    }
    return a_ + (b_ - a_) * (static_cast<double>(j) / static_cast<double>(m));
}

ReducedSample ReducedSolution::evaluate(double x) const {
    if (!(x >= a_ && x <= b_)) {
        throw std::out_of_range(fmt::format("reduced solution: x = {} outside [{}, {}]", x, a_, b_));
    }
    if (!coefficients_) {
        return {};
    }
    const std::size_t m = steps();
    const double h = (b_ - a_) / static_cast<double>(m);
    auto j = static_cast<std::size_t>(std::floor((x - a_) / h));
    j = std::min(j, m - 1);
    double u = 0.0;
    if (x == grid_point(j)) {
        u = values_[j];
    } else if (x == grid_point(j + 1)) {
        u = values_[j + 1];
    } else {
        const double t = (x - grid_point(j)) / h;
        const double t2 = t * t;
        const double t3 = t2 * t;
        u = (2.0 * t3 - 3.0 * t2 + 1.0) * values_[j] + (t3 - 2.0 * t2 + t) * h * slopes_[j] +
            (-2.0 * t3 + 3.0 * t2) * values_[j + 1] + (t3 - t2) * h * slopes_[j + 1];
    }
    const ProblemCoefficients& c = *coefficients_;
    const double beta = c.beta.evaluate(x);
    ReducedSample s;
    s.u0 = u;
    s.d1 = (c.f.evaluate(x) - c.sigma * u) / beta;
    s.d2 = (c.f_prime.evaluate(x) - (c.sigma + c.beta_prime.evaluate(x)) * s.d1) / beta;
    return s;
}

ReducedSolution solve_reduced(const ProblemCoefficients& c, std::size_t steps) {
    if (steps < 16) {
        throw std::invalid_argument("solve_reduced: at least 16 steps required");
    }
    const int sign = beta_sign(c);
    const double beta_max = beta_sup_norm(c);
    if (sign == 0) {
        throw ReducedProblemError("reduced problem: beta vanishes, no inflow boundary");
    }
    // the grid itself must stay clear of beta = 0, not just the coarse sign samples
    const std::size_t m = steps;
    ReducedSolution r;
    r.a_ = c.a;
    r.b_ = c.b;
    r.values_.assign(m + 1, 0.0);
    r.slopes_.assign(m + 1, 0.0);
    double beta_min = beta_max;
    for (std::size_t j = 0; j <= m; ++j) {
        beta_min = std::min(beta_min, std::abs(c.beta.evaluate(r.grid_point(j))));
    }
    if (!(beta_min > 1e-8 * beta_max)) {
        throw ReducedProblemError("reduced problem: beta is (nearly) zero inside the domain");
    }

    const auto rhs = [&c](double x, double u) { return (c.f.evaluate(x) - c.sigma * u) / c.beta.evaluate(x); };
    const double h = (c.b - c.a) / static_cast<double>(m);
    if (sign > 0) {
        for (std::size_t j = 0; j < m; ++j) {
            const double x = r.grid_point(j);
            const double u = r.values_[j];
            const double k1 = rhs(x, u);
            const double k2 = rhs(x + 0.5 * h, u + 0.5 * h * k1);
            const double k3 = rhs(x + 0.5 * h, u + 0.5 * h * k2);
            const double k4 = rhs(r.grid_point(j + 1), u + h * k3);
            r.values_[j + 1] = u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    } else {
        for (std::size_t j = m; j > 0; --j) {
            const double x = r.grid_point(j);
            const double u = r.values_[j];
            const double k1 = rhs(x, u);
            const double k2 = rhs(x - 0.5 * h, u - 0.5 * h * k1);
            const double k3 = rhs(x - 0.5 * h, u - 0.5 * h * k2);
            const double k4 = rhs(r.grid_point(j - 1), u - h * k3);
            r.values_[j - 1] = u - h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    for (std::size_t j = 0; j <= m; ++j) {
        r.slopes_[j] = rhs(r.grid_point(j), r.values_[j]);
    }
    r.coefficients_ = c;
    return r;
}

std::size_t default_reduced_steps(std::size_t finest_elements) {
    return std::max<std::size_t>(4096, 8 * finest_elements);
}

} // namespace hlfem

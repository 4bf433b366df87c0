#pragma once

#include <cstddef>
#include <vector>

namespace hlfem {

/// Gauss-Legendre rule on the reference interval [-1, 1].
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;
};

/// Cached n-point rule, 1 <= n <= 16.
const QuadratureRule& gauss_legendre(std::size_t n);

/// Integral of fn over [lo, hi] with the n-point rule.
template <typename Fn>
double integrate(double lo, double hi, std::size_t n, Fn&& fn) {
    const QuadratureRule& rule = gauss_legendre(n);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        sum += rule.weights[q] * fn(mid + half * rule.points[q]);
    }
    return half * sum;
}

} // namespace hlfem

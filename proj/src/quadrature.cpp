#include "hlfem/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace hlfem {

namespace {

constexpr std::size_t kMaxPoints = 16;

// Newton iteration on P_n from the Chebyshev initial guess.
QuadratureRule build_rule(std::size_t n) {
    QuadratureRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                const double jj = static_cast<double>(j);
                p0 = ((2.0 * jj - 1.0) * z * p1 - (jj - 1.0) * p2) / jj;
            }
            dp = nn * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.points[i] = -z;
        rule.points[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.points[n / 2] = 0.0;
    }
    return rule;
}

} // namespace

const QuadratureRule& gauss_legendre(std::size_t n) {
    if (n == 0 || n > kMaxPoints) {
        throw std::invalid_argument("gauss_legendre: supported point counts are 1..16");
    }
    static std::array<QuadratureRule, kMaxPoints + 1> rules;
    static std::once_flag once;
    std::call_once(once, [] {
        for (std::size_t k = 1; k <= kMaxPoints; ++k) {
            rules[k] = build_rule(k);
        }
    });
    return rules[n];
}

} // namespace hlfem

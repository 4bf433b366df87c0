#include "hlfem/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace hlfem {

namespace {

constexpr int kBetaSamples = 1024;

template <typename Fn>
void for_each_sample(const ProblemCoefficients& c, Fn&& fn) {
    if (c.beta.is_constant()) {
        fn(c.beta.evaluate(c.a));
        return;
    }
    for (int i = 0; i < kBetaSamples; ++i) {
        const double x = c.a + (c.b - c.a) * static_cast<double>(i) / (kBetaSamples - 1);
        fn(c.beta.evaluate(x));
    }
}

} // namespace

ProblemCoefficients make_problem(double mu, double sigma, expr::Expression beta, expr::Expression f,
                                 double a, double b) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw std::invalid_argument("problem: mu must be positive");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("problem: sigma must be nonnegative");
    }
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("problem: domain requires finite a < b");
    }
    ProblemCoefficients c;
    c.mu = mu;
    c.sigma = sigma;
    c.a = a;
    c.b = b;
    c.f_prime = expr::differentiate(f);
    c.beta_prime = expr::differentiate(beta);
    c.beta = std::move(beta);
    c.f = std::move(f);
    (void)beta_sign(c);
    return c;
}

double beta_sup_norm(const ProblemCoefficients& c) {
    double m = 0.0;
    for_each_sample(c, [&](double v) { m = std::max(m, std::abs(v)); });
    return m;
}

int beta_sign(const ProblemCoefficients& c) {
    bool pos = false;
    bool neg = false;
    for_each_sample(c, [&](double v) {
        pos = pos || v > 0.0;
        neg = neg || v < 0.0;
    });
    if (pos && neg) {
        throw std::invalid_argument("problem: beta changes sign on the domain");
    }
    return pos ? 1 : (neg ? -1 : 0);
}

double peclet(const ProblemCoefficients& c) { return beta_sup_norm(c) * (c.b - c.a) / c.mu; }

} // namespace hlfem

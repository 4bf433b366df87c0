#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hlfem/cauchy.hpp"
#include "support.hpp"

using namespace hlfem;
using hlfem::testing::problem;

TEST(Reduced, ClosedFormExponential) {
    const ReducedSolution r = solve_reduced(problem(1.0, 1.0, "2", "1"), 1024);
    EXPECT_NEAR(r.evaluate(1.0).u0, 1.0 - std::exp(-0.5), 1e-10);
    EXPECT_NEAR(r.evaluate(1.0).u0, 0.393469, 1e-6);
    EXPECT_NEAR(eval_reduced(r, 0.5).u0, 1.0 - std::exp(-0.25), 1e-8);
    EXPECT_NEAR(eval_reduced(r, 0.5).u0, 0.221199, 1e-6);
    EXPECT_EQ(r.evaluate(0.0).u0, 0.0);
}

TEST(Reduced, ZeroSourceGivesZero) {
    const ReducedSolution r = solve_reduced(problem(1.0, 3.0, "2", "0"), 64);
    for (const double v : r.values()) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(r.evaluate(0.37).u0, 0.0);
}

TEST(Reduced, NoReactionIsLinear) {
    const ReducedSolution r = solve_reduced(problem(1.0, 0.0, "2", "1"), 64);
    for (const double x : {0.0, 0.1, 0.5, 0.77, 1.0}) {
        const ReducedSample s = r.evaluate(x);
        EXPECT_NEAR(s.u0, x / 2.0, 1e-14);
        EXPECT_NEAR(s.d1, 0.5, 1e-14);
        EXPECT_EQ(s.d2, 0.0);
    }
}

TEST(Reduced, GridPointsReturnStoredSamples) {
    const ReducedSolution r = solve_reduced(problem(1.0, 1.0, "2", "cos(3*x)"), 100);
    for (std::size_t j = 0; j <= r.steps(); j += 7) {
        EXPECT_EQ(r.evaluate(r.grid_point(j)).u0, r.values()[j]);
    }
}

TEST(Reduced, NegativeVelocityStartsFromTheRight) {
    const ReducedSolution r = solve_reduced(problem(1.0, 1.0, "-2", "1"), 1024);
    EXPECT_EQ(r.evaluate(1.0).u0, 0.0);
    EXPECT_NEAR(r.evaluate(0.0).u0, 1.0 - std::exp(-0.5), 1e-10);
}

TEST(Reduced, Preconditions) {
    EXPECT_THROW((void)solve_reduced(problem(1.0, 1.0, "0", "1"), 64), ReducedProblemError);
    EXPECT_THROW((void)solve_reduced(problem(1.0, 1.0, "x", "1"), 64), ReducedProblemError);
    EXPECT_THROW((void)solve_reduced(problem(1.0, 1.0, "2", "1"), 8), std::invalid_argument);
    const ReducedSolution r = solve_reduced(problem(1.0, 1.0, "2", "1"), 64);
    EXPECT_THROW((void)r.evaluate(1.5), std::out_of_range);
    EXPECT_EQ(default_reduced_steps(15), 4096u);
    EXPECT_EQ(default_reduced_steps(1000), 8000u);
}

TEST(Reduced, RungeKuttaOrder) {
    // stiff enough that the RK4 error stays well above roundoff
    const ProblemCoefficients c = problem(1.0, 1.0, "0.1", "1");
    std::vector<double> errors;
    for (const std::size_t m : {64u, 128u, 256u, 512u}) {
        const ReducedSolution r = solve_reduced(c, m);
        double err = 0.0;
        for (std::size_t j = 0; j <= m; ++j) {
            const double x = r.grid_point(j);
            err = std::max(err, std::abs(r.values()[j] - (1.0 - std::exp(-10.0 * x))));
        }
        errors.push_back(err);
    }
    for (std::size_t i = 1; i < errors.size(); ++i) {
        EXPECT_GE(std::log2(errors[i - 1] / errors[i]), 3.9) << "M index " << i;
    }
}

TEST(Reduced, OdeIdentitiesHoldEverywhere) {
    const ProblemCoefficients c = problem(1.0, 2.5, "1.5+0.5*sin(x)", "10*cos(4*x)+x^2");
    const ReducedSolution r = solve_reduced(c, 512);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double x = u(rng);
        const ReducedSample s = r.evaluate(x);
        const double beta = c.beta.evaluate(x);
        const double d1 = (c.f.evaluate(x) - c.sigma * s.u0) / beta;
        EXPECT_NEAR(s.d1, d1, 1e-12 * (1.0 + std::abs(d1)));
        const double d2 = (c.f_prime.evaluate(x) - (c.sigma + c.beta_prime.evaluate(x)) * s.d1) / beta;
        EXPECT_NEAR(s.d2, d2, 1e-12 * (1.0 + std::abs(d2)));
        EXPECT_NEAR(beta * s.d1 + c.sigma * s.u0 - c.f.evaluate(x), 0.0, 1e-10 * (1.0 + std::abs(c.f.evaluate(x))));
    }
}

TEST(Reduced, ConstantVelocitySecondDerivative) {
    const ProblemCoefficients c = problem(1.0, 0.0, "3", "7");
    const ReducedSolution r = solve_reduced(c, 64);
    EXPECT_EQ(r.evaluate(0.3).d2, 0.0);
}

TEST(Reduced, ZeroAnchor) {
    const ReducedSolution z = ReducedSolution::zero(0.0, 2.0);
    const ReducedSample s = z.evaluate(1.3);
    EXPECT_EQ(s.u0, 0.0);
    EXPECT_EQ(s.d1, 0.0);
    EXPECT_EQ(s.d2, 0.0);
}

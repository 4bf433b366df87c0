#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "hlfem/expr.hpp"

using namespace hlfem::expr;

namespace {

constexpr double kPi = std::numbers::pi;

// Random expressions that stay finite and differentiable on [-1, 1].
class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    std::string make(int depth) {
        std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
        std::uniform_real_distribution<double> lit(-3.0, 3.0);
        switch (pick(rng_)) {
        case 0:
            return "x";
        case 1:
            return number(lit(rng_));
        case 2:
            return "(" + make(depth - 1) + " + " + make(depth - 1) + ")";
        case 3:
            return "(" + make(depth - 1) + " - " + make(depth - 1) + ")";
        case 4:
            return "(" + make(depth - 1) + " * " + make(depth - 1) + ")";
        case 5:
            return "(" + make(depth - 1) + " / (2.5 + sin(" + make(depth - 1) + ")))";
        case 6:
            return "(" + make(depth - 1) + ")^" + std::to_string(std::uniform_int_distribution<int>(2, 3)(rng_));
        case 7:
            return "sin(" + make(depth - 1) + ")";
        case 8:
            return "cos(" + make(depth - 1) + ")";
        default:
            return "exp(sin(" + make(depth - 1) + "))";
        }
    }

    double point() { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng_); }

private:
    static std::string number(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", std::abs(v));
        return v < 0 ? std::string("(-") + buf + ")" : std::string(buf);
    }
    std::mt19937_64 rng_;
};

double central_difference(const Expression& e, double x, double h) {
    return (e.evaluate(x + h) - e.evaluate(x - h)) / (2.0 * h);
}

} // namespace

TEST(ExprParse, ExperimentSourceTerm) {
    const Expression f = parse("10^4*cos(4.5*pi*x)");
    EXPECT_NEAR(f.evaluate(0.3), 1e4 * std::cos(4.5 * kPi * 0.3), 1e-9);
    EXPECT_DOUBLE_EQ(f.evaluate(0.0), 10000.0);
    EXPECT_NEAR(f.evaluate(2.0 / 9.0), -10000.0, 1e-9);
}

TEST(ExprParse, IdentityAndConstants) {
    const Expression x = parse("x");
    EXPECT_EQ(x.kind(), Expression::Kind::Variable);
    EXPECT_DOUBLE_EQ(x.evaluate(-2.5), -2.5);
    const Expression c = parse("2*(3+4)");
    EXPECT_TRUE(c.is_constant());
    EXPECT_DOUBLE_EQ(c.evaluate(123.0), 14.0);
    EXPECT_DOUBLE_EQ(parse("x^2").evaluate(3.0), 9.0);
}

TEST(ExprParse, Precedence) {
    EXPECT_DOUBLE_EQ(parse("2^3^2").evaluate(0), 512.0);
    EXPECT_DOUBLE_EQ(parse("-2^2").evaluate(0), -4.0);
    EXPECT_DOUBLE_EQ(parse("2^-1").evaluate(0), 0.5);
    EXPECT_DOUBLE_EQ(parse("8/4/2").evaluate(0), 1.0);
    EXPECT_DOUBLE_EQ(parse("8-4-2").evaluate(0), 2.0);
    EXPECT_DOUBLE_EQ(parse("1+2*3").evaluate(0), 7.0);
    EXPECT_DOUBLE_EQ(parse("-x*3").evaluate(2.0), -6.0);
    EXPECT_DOUBLE_EQ(parse("1.5e2 + 2E-1").evaluate(0), 150.2);
    EXPECT_DOUBLE_EQ(parse("  exp( 0 )  ").evaluate(0), 1.0);
}

TEST(ExprParse, ErrorsCarryPosition) {
    try {
        (void)parse("1 + * 2");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 4u);
    }
    try {
        (void)parse("2*y");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 2u);
    }
    EXPECT_THROW((void)parse(""), ParseError);
    EXPECT_THROW((void)parse("(1+2"), ParseError);
    EXPECT_THROW((void)parse("1+2)"), ParseError);
    EXPECT_THROW((void)parse("tan(x)"), ParseError);
    EXPECT_THROW((void)parse("sin x"), ParseError);
}

TEST(ExprEvaluate, RejectsDivisionByZeroAndOverflow) {
    EXPECT_THROW((void)parse("1/x").evaluate(0.0), EvalError);
    EXPECT_THROW((void)parse("exp(x)").evaluate(1000.0), EvalError);
    EXPECT_THROW((void)evaluate(parse("x"), std::nan("")), EvalError);
    EXPECT_THROW((void)evaluate(parse("x"), INFINITY), EvalError);
}

TEST(ExprDifferentiate, ChainRuleOnCosine) {
    const Expression d = differentiate(parse("cos(3*x)"));
    for (const double x : {-1.0, 0.0, 0.4, 2.0}) {
        EXPECT_NEAR(d.evaluate(x), -3.0 * std::sin(3.0 * x), 1e-12);
    }
}

TEST(ExprDifferentiate, ConstantGivesZero) {
    const Expression d = differentiate(parse("10^4*pi"));
    EXPECT_TRUE(d.is_constant());
    EXPECT_EQ(d.evaluate(0.7), 0.0);
}

TEST(ExprDifferentiate, CubeMatchesCentralDifference) {
    const Expression e = parse("x^3");
    EXPECT_NEAR(differentiate(e).evaluate(2.0), 12.0, 1e-12);
    EXPECT_NEAR(central_difference(e, 2.0, 1e-5), 12.0, 1e-6);
}

TEST(ExprDifferentiate, VariableExponentRejected) {
    EXPECT_THROW((void)differentiate(parse("2^x")), DifferentiationError);
    EXPECT_THROW((void)differentiate(parse("x^x")), DifferentiationError);
    EXPECT_NO_THROW((void)differentiate(parse("2^3")));
}

TEST(ExprProperty, DerivativeAgreesWithCentralDifference) {
    Generator gen(42);
    int checked = 0;
    while (checked < 1000) {
        const Expression e = parse(gen.make(4));
        const Expression d = differentiate(e);
        const double x = gen.point();
        const double exact = d.evaluate(x);
        const double approx = central_difference(e, x, 1e-6);
        ASSERT_LE(std::abs(exact - approx), 1e-4 * (1.0 + std::abs(exact))) << e.to_string() << " at x = " << x;
        ++checked;
    }
}

TEST(ExprProperty, PrintParseRoundTrip) {
    Generator gen(7);
    for (int i = 0; i < 200; ++i) {
        const Expression e = parse(gen.make(5));
        const Expression back = parse(e.to_string());
        for (int k = 0; k < 100; ++k) {
            const double x = gen.point();
            ASSERT_EQ(e.evaluate(x), back.evaluate(x)) << e.to_string();
        }
    }
}

TEST(ExprProperty, RepeatedEvaluationIsDeterministic) {
    const Expression f = parse("10^4*cos(4.5*pi*x) + exp(sin(x))/(2+x^2)");
    const double expected = f.evaluate(0.123);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(f.evaluate(0.123), expected);
    }
}

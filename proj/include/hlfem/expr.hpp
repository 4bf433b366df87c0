#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hlfem::expr {

/// Raised by parse() with the byte offset of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position);
    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Division by zero or a non-finite intermediate/result during evaluation.
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Derivative requested for a construct outside the supported grammar.
class DifferentiationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Immutable expression of one variable `x`.
///
/// Grammar: real literals, `x`, `pi`, binary `+ - * / ^`, unary minus and
/// the functions `sin`, `cos`, `exp`. Nodes are shared, so copies are cheap
/// and concurrent evaluation is safe.
class Expression {
public:
    enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };

    /// The zero constant.
    Expression();

    static Expression constant(double value);
    static Expression variable();
    static Expression binary(Kind kind, Expression lhs, Expression rhs);
    static Expression unary(Kind kind, Expression operand);

    [[nodiscard]] Kind kind() const noexcept;
    /// Literal value; only meaningful when kind() == Kind::Constant.
    [[nodiscard]] double value() const noexcept;
    /// First (or only) operand of an operator node.
    [[nodiscard]] Expression lhs() const;
    [[nodiscard]] Expression rhs() const;
    /// True when the expression does not reference `x`.
    [[nodiscard]] bool is_constant() const noexcept;

    [[nodiscard]] double evaluate(double x) const;
    [[nodiscard]] Expression derivative() const;

    /// Fully parenthesized text that parse() maps back to an equivalent tree.
    [[nodiscard]] std::string to_string() const;

    struct Node;

private:
    explicit Expression(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression pow(const Expression& base, const Expression& exponent);
Expression sin(const Expression& a);
Expression cos(const Expression& a);
Expression exp(const Expression& a);

[[nodiscard]] Expression parse(std::string_view source);
[[nodiscard]] double evaluate(const Expression& e, double x);
[[nodiscard]] Expression differentiate(const Expression& e);

} // namespace hlfem::expr

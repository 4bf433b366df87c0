#include "hlfem/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace hlfem::expr {

struct Expression::Node {
    Kind kind;
    double value = 0.0;
    std::shared_ptr<const Node> lhs_node;
    std::shared_ptr<const Node> rhs_node;
    bool constant = true;
};

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(fmt::format("{} at position {}", message, position)), position_(position) {}

namespace {

bool is_binary(Expression::Kind k) {
    using K = Expression::Kind;
    return k == K::Add || k == K::Sub || k == K::Mul || k == K::Div || k == K::Pow;
}

double checked(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw EvalError(fmt::format("non-finite result in {}", what));
    }
    return v;
}

} // namespace

Expression::Expression() : Expression(constant(0.0)) {}

Expression::Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expression Expression::constant(double value) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->value = value;
    n->constant = true;
    return Expression(std::move(n));
}

Expression Expression::variable() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->constant = false;
    return Expression(std::move(n));
}

Expression Expression::binary(Kind kind, Expression lhs, Expression rhs) {
    if (!is_binary(kind)) {
        throw std::invalid_argument("Expression::binary: not a binary operator");
    }
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->constant = lhs.is_constant() && rhs.is_constant();
    n->lhs_node = std::move(lhs.node_);
    n->rhs_node = std::move(rhs.node_);
    return Expression(std::move(n));
}

Expression Expression::unary(Kind kind, Expression operand) {
    if (kind != Kind::Neg && kind != Kind::Sin && kind != Kind::Cos && kind != Kind::Exp) {
        throw std::invalid_argument("Expression::unary: not a unary operator");
    }
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->constant = operand.is_constant();
    n->lhs_node = std::move(operand.node_);
    return Expression(std::move(n));
}

Expression::Kind Expression::kind() const noexcept { return node_->kind; }
double Expression::value() const noexcept { return node_->value; }
Expression Expression::lhs() const {
    if (!node_->lhs_node) throw std::logic_error("Expression::lhs: leaf node");
    return Expression(node_->lhs_node);
}
Expression Expression::rhs() const {
    if (!node_->rhs_node) throw std::logic_error("Expression::rhs: node has no second operand");
    return Expression(node_->rhs_node);
}
bool Expression::is_constant() const noexcept { return node_->constant; }

namespace {

double eval_node(const Expression::Node& n, double x);

} // namespace

double Expression::evaluate(double x) const { return eval_node(*node_, x); }

namespace {

double eval_node(const Expression::Node& n, double x) {
    using K = Expression::Kind;
    switch (n.kind) {
    case K::Constant:
        return n.value;
    case K::Variable:
        return x;
    case K::Add:
        return checked(eval_node(*n.lhs_node, x) + eval_node(*n.rhs_node, x), "addition");
    case K::Sub:
        return checked(eval_node(*n.lhs_node, x) - eval_node(*n.rhs_node, x), "subtraction");
    case K::Mul:
        return checked(eval_node(*n.lhs_node, x) * eval_node(*n.rhs_node, x), "multiplication");
    case K::Div: {
        const double den = eval_node(*n.rhs_node, x);
        if (den == 0.0) {
            throw EvalError("division by zero");
        }
        return checked(eval_node(*n.lhs_node, x) / den, "division");
    }
    case K::Pow:
        return checked(std::pow(eval_node(*n.lhs_node, x), eval_node(*n.rhs_node, x)), "power");
    case K::Neg:
        return -eval_node(*n.lhs_node, x);
    case K::Sin:
        return checked(std::sin(eval_node(*n.lhs_node, x)), "sin");
    case K::Cos:
        return checked(std::cos(eval_node(*n.lhs_node, x)), "cos");
    case K::Exp:
        return checked(std::exp(eval_node(*n.lhs_node, x)), "exp");
    }
    throw EvalError("corrupt expression node");
}

} // namespace

// Builders fold constants and drop 0/1 identities. A fold that would produce
// a non-finite literal is skipped so the error surfaces at evaluation.
namespace {

using K = Expression::Kind;

bool is_literal(const Expression& e, double v) { return e.kind() == K::Constant && e.value() == v; }

Expression fold_or(Expression e) {
    if (e.kind() != K::Constant && e.is_constant()) {
        try {
            const double v = e.evaluate(0.0);
            return Expression::constant(v);
        } catch (const EvalError&) {
            return e;
        }
    }
    return e;
}

} // namespace

Expression operator+(const Expression& a, const Expression& b) {
    if (is_literal(a, 0.0)) return b;
    if (is_literal(b, 0.0)) return a;
    return fold_or(Expression::binary(K::Add, a, b));
}

Expression operator-(const Expression& a, const Expression& b) {
    if (is_literal(b, 0.0)) return a;
    if (is_literal(a, 0.0)) return -b;
    return fold_or(Expression::binary(K::Sub, a, b));
}

Expression operator*(const Expression& a, const Expression& b) {
    if (is_literal(a, 0.0) || is_literal(b, 0.0)) return Expression::constant(0.0);
    if (is_literal(a, 1.0)) return b;
    if (is_literal(b, 1.0)) return a;
    return fold_or(Expression::binary(K::Mul, a, b));
}

Expression operator/(const Expression& a, const Expression& b) {
    if (is_literal(b, 1.0)) return a;
    if (is_literal(a, 0.0) && !is_literal(b, 0.0)) return Expression::constant(0.0);
    return fold_or(Expression::binary(K::Div, a, b));
}

Expression operator-(const Expression& a) {
    if (a.kind() == K::Neg) return a.lhs();
    return fold_or(Expression::unary(K::Neg, a));
}

Expression pow(const Expression& base, const Expression& exponent) {
    if (is_literal(exponent, 1.0)) return base;
    if (is_literal(exponent, 0.0)) return Expression::constant(1.0);
    return fold_or(Expression::binary(K::Pow, base, exponent));
}

Expression sin(const Expression& a) { return fold_or(Expression::unary(K::Sin, a)); }
Expression cos(const Expression& a) { return fold_or(Expression::unary(K::Cos, a)); }
Expression exp(const Expression& a) { return fold_or(Expression::unary(K::Exp, a)); }

Expression Expression::derivative() const {
    switch (kind()) {
    case Kind::Constant:
        return constant(0.0);
    case Kind::Variable:
        return constant(1.0);
    case Kind::Add:
        return lhs().derivative() + rhs().derivative();
    case Kind::Sub:
        return lhs().derivative() - rhs().derivative();
    case Kind::Mul:
        return lhs().derivative() * rhs() + lhs() * rhs().derivative();
    case Kind::Div:
        return (lhs().derivative() * rhs() - lhs() * rhs().derivative()) / pow(rhs(), constant(2.0));
    case Kind::Pow:
        if (!rhs().is_constant()) {
            throw DifferentiationError("derivative of a^b with an x-dependent exponent is not supported");
        }
        if (lhs().is_constant()) {
            return constant(0.0);
        }
        return rhs() * pow(lhs(), rhs() - constant(1.0)) * lhs().derivative();
    case Kind::Neg:
        return -lhs().derivative();
    case Kind::Sin:
        return cos(lhs()) * lhs().derivative();
    case Kind::Cos:
        return -(sin(lhs()) * lhs().derivative());
    case Kind::Exp:
        return *this * lhs().derivative();
    }
    throw DifferentiationError("corrupt expression node");
}

std::string Expression::to_string() const {
    switch (kind()) {
    case Kind::Constant:
        if (value() < 0.0 || (value() == 0.0 && std::signbit(value()))) {
            return fmt::format("(-{:.17g})", -value());
        }
        return fmt::format("{:.17g}", value());
    case Kind::Variable:
        return "x";
    case Kind::Add:
        return "(" + lhs().to_string() + " + " + rhs().to_string() + ")";
    case Kind::Sub:
        return "(" + lhs().to_string() + " - " + rhs().to_string() + ")";
    case Kind::Mul:
        return "(" + lhs().to_string() + " * " + rhs().to_string() + ")";
    case Kind::Div:
        return "(" + lhs().to_string() + " / " + rhs().to_string() + ")";
    case Kind::Pow:
        return "(" + lhs().to_string() + " ^ " + rhs().to_string() + ")";
    case Kind::Neg:
        return "(-" + lhs().to_string() + ")";
    case Kind::Sin:
        return "sin(" + lhs().to_string() + ")";
    case Kind::Cos:
        return "cos(" + lhs().to_string() + ")";
    case Kind::Exp:
        return "exp(" + lhs().to_string() + ")";
    }
    return "?";
}

namespace {

// Recursive descent; precedence from loosest: + -, * /, unary -, ^ (right).
class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expression parse_all() {
        skip_ws();
        if (pos_ >= src_.size()) {
            throw ParseError("empty expression", pos_);
        }
        Expression e = parse_sum();
        skip_ws();
        if (pos_ < src_.size()) {
            throw ParseError(fmt::format("unexpected '{}'", src_[pos_]), pos_);
        }
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            throw ParseError(fmt::format("expected '{}'", c), pos_);
        }
    }

    Expression parse_sum() {
        Expression e = parse_product();
        for (;;) {
            if (accept('+')) {
                e = e + parse_product();
            } else if (accept('-')) {
                e = e - parse_product();
            } else {
                return e;
            }
        }
    }

    Expression parse_product() {
        Expression e = parse_unary();
        for (;;) {
            if (accept('*')) {
                e = e * parse_unary();
            } else if (accept('/')) {
                e = e / parse_unary();
            } else {
                return e;
            }
        }
    }

    Expression parse_unary() {
        if (accept('-')) {
            return -parse_unary();
        }
        if (accept('+')) {
            return parse_unary();
        }
        return parse_power();
    }

    Expression parse_power() {
        Expression base = parse_primary();
        if (accept('^')) {
            return pow(base, parse_unary());
        }
        return base;
    }

    Expression parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) {
            throw ParseError("unexpected end of input", pos_);
        }
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expression e = parse_sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
            const std::string_view name = src_.substr(start, pos_ - start);
            if (name == "x") return Expression::variable();
            if (name == "pi") return Expression::constant(std::numbers::pi);
            if (name == "sin" || name == "cos" || name == "exp") {
                expect('(');
                Expression arg = parse_sum();
                expect(')');
                if (name == "sin") return sin(arg);
                if (name == "cos") return cos(arg);
                return exp(arg);
            }
            throw ParseError(fmt::format("unknown identifier '{}'", name), start);
        }
        throw ParseError(fmt::format("unexpected '{}'", c), pos_);
    }

    Expression parse_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                pos_ = p;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        double v = 0.0;
        const char* first = src_.data() + start;
        const char* last = src_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) {
            throw ParseError("malformed number", start);
        }
        return Expression::constant(v);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

} // namespace

Expression parse(std::string_view source) { return Parser(source).parse_all(); }

double evaluate(const Expression& e, double x) {
    if (!std::isfinite(x)) {
        throw EvalError("evaluation point is not finite");
    }
    return e.evaluate(x);
}

Expression differentiate(const Expression& e) { return e.derivative(); }

} // namespace hlfem::expr

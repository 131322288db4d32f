#pragma once

// Scalar math expressions as text.
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//
// So '^' is right-associative and binds tighter than unary minus: -x^2 == -(x^2),
// 2^3^2 == 2^(3^2). Functions: sin cos tan atan exp ln sqrt abs sinh cosh tanh.
// pi and e are pre-bound. Non-finite arithmetic results are returned, not thrown.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "engcalc/error.hpp"

namespace engcalc::expr {

struct Token {
    enum class Kind { number, identifier, op, left_paren, right_paren, comma };

    Kind kind;
    std::string lexeme;
    std::size_t position;

    friend bool operator==(const Token&, const Token&) = default;
};

enum class Func { sin, cos, tan, atan, exp, ln, sqrt, abs, sinh, cosh, tanh };

inline constexpr std::array<std::pair<std::string_view, Func>, 11> kFunctions{{
    {"sin", Func::sin},
    {"cos", Func::cos},
    {"tan", Func::tan},
    {"atan", Func::atan},
    {"exp", Func::exp},
    {"ln", Func::ln},
    {"sqrt", Func::sqrt},
    {"abs", Func::abs},
    {"sinh", Func::sinh},
    {"cosh", Func::cosh},
    {"tanh", Func::tanh},
}};

inline std::optional<Func> lookup_function(std::string_view name) {
    for (const auto& [n, f] : kFunctions) {
        if (n == name) return f;
    }
    return std::nullopt;
}

inline double apply(Func f, double x) {
    switch (f) {
    case Func::sin: return std::sin(x);
    case Func::cos: return std::cos(x);
    case Func::tan: return std::tan(x);
    case Func::atan: return std::atan(x);
    case Func::exp: return std::exp(x);
    case Func::ln: return std::log(x);
    case Func::sqrt: return std::sqrt(x);
    case Func::abs: return std::abs(x);
    case Func::sinh: return std::sinh(x);
    case Func::cosh: return std::cosh(x);
    case Func::tanh: return std::tanh(x);
    }
    return std::nan("");
}

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
    const auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; };
    const auto is_ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; };

    while (i < src.size()) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
            while (i < src.size() && is_digit(src[i])) ++i;
            if (i < src.size() && src[i] == '.') {
                ++i;
                while (i < src.size() && is_digit(src[i])) ++i;
            }
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < src.size() && is_digit(src[j])) {
                    i = j;
                    while (i < src.size() && is_digit(src[i])) ++i;
                }
            }
            std::string lexeme(src.substr(start, i - start));
            if (!std::isfinite(std::strtod(lexeme.c_str(), nullptr))) {
                throw ParseError("number '" + lexeme + "' is not finite", start);
            }
            out.push_back({Token::Kind::number, std::move(lexeme), start});
        } else if (is_ident_start(c)) {
            while (i < src.size() && is_ident_char(src[i])) ++i;
            out.push_back({Token::Kind::identifier, std::string(src.substr(start, i - start)), start});
        } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            out.push_back({Token::Kind::op, std::string(1, c), start});
            ++i;
        } else if (c == '(') {
            out.push_back({Token::Kind::left_paren, "(", start});
            ++i;
        } else if (c == ')') {
            out.push_back({Token::Kind::right_paren, ")", start});
            ++i;
        } else if (c == ',') {
            out.push_back({Token::Kind::comma, ",", start});
            ++i;
        } else {
            throw ParseError(fmt::format("unexpected character '{}'", c), start);
        }
    }
    if (out.empty()) throw ParseError("empty expression", 0);
    return out;
}

// Immutable expression tree. Copies share nodes.
class Expr {
public:
    enum class Kind { constant, variable, negate, add, sub, mul, div, pow, call };

    static Expr constant(double v) { return Expr(Node{Kind::constant, v, {}, {}}); }
    static Expr variable(std::string name) { return Expr(Node{Kind::variable, 0.0, std::move(name), {}}); }
    static Expr negate(Expr a) { return Expr(Node{Kind::negate, 0.0, {}, {std::move(a)}}); }
    static Expr binary(Kind k, Expr a, Expr b) { return Expr(Node{k, 0.0, {}, {std::move(a), std::move(b)}}); }
    static Expr call(std::string fn, Expr arg) { return Expr(Node{Kind::call, 0.0, std::move(fn), {std::move(arg)}}); }

    [[nodiscard]] Kind kind() const { return node_->kind; }
    [[nodiscard]] double value() const { return node_->value; }
    // Variable or function name.
    [[nodiscard]] const std::string& name() const { return node_->name; }
    [[nodiscard]] const std::vector<Expr>& children() const { return node_->children; }

    friend bool operator==(const Expr& a, const Expr& b) {
        if (a.node_ == b.node_) return true;
        const Node& x = *a.node_;
        const Node& y = *b.node_;
        return x.kind == y.kind && x.name == y.name && (x.kind != Kind::constant || x.value == y.value) &&
               x.children == y.children;
    }

private:
    struct Node {
        Kind kind;
        double value;
        std::string name;
        std::vector<Expr> children;
    };

    explicit Expr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

    std::shared_ptr<const Node> node_;
};

namespace detail {

class Parser {
public:
    explicit Parser(std::span<const Token> tokens, std::size_t end_position)
        : tokens_(tokens), end_(end_position) {}

    Expr parse_all() {
        Expr e = parse_expr();
        if (pos_ < tokens_.size()) throw ParseError("unexpected '" + tokens_[pos_].lexeme + "'", here());
        return e;
    }

private:
    Expr parse_expr() {
        Expr lhs = parse_term();
        while (peek_op("+") || peek_op("-")) {
            const auto k = tokens_[pos_++].lexeme == "+" ? Expr::Kind::add : Expr::Kind::sub;
            lhs = Expr::binary(k, std::move(lhs), parse_term());
        }
        return lhs;
    }

    Expr parse_term() {
        Expr lhs = parse_factor();
        while (peek_op("*") || peek_op("/")) {
            const auto k = tokens_[pos_++].lexeme == "*" ? Expr::Kind::mul : Expr::Kind::div;
            lhs = Expr::binary(k, std::move(lhs), parse_factor());
        }
        return lhs;
    }

    Expr parse_factor() {
        if (++depth_ > kMaxDepth) throw ParseError("expression nested too deeply", here());
        Expr e = [&] {
            if (peek_op("-")) {
                ++pos_;
                return Expr::negate(parse_factor());
            }
            return parse_power();
        }();
        --depth_;
        return e;
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (peek_op("^")) {
            ++pos_;
            return Expr::binary(Expr::Kind::pow, std::move(base), parse_factor());
        }
        return base;
    }

    Expr parse_atom() {
        if (pos_ >= tokens_.size()) throw ParseError("unexpected end of expression", end_);
        const Token& tok = tokens_[pos_];
        switch (tok.kind) {
        case Token::Kind::number:
            ++pos_;
            return Expr::constant(std::strtod(tok.lexeme.c_str(), nullptr));
        case Token::Kind::identifier:
            ++pos_;
            if (pos_ < tokens_.size() && tokens_[pos_].kind == Token::Kind::left_paren) {
                if (!lookup_function(tok.lexeme)) throw ParseError("unknown function '" + tok.lexeme + "'", tok.position);
                ++pos_;
                Expr arg = parse_expr();
                if (pos_ < tokens_.size() && tokens_[pos_].kind == Token::Kind::comma) {
                    throw ParseError("function '" + tok.lexeme + "' takes exactly one argument", here());
                }
                expect_close(tok.position);
                return Expr::call(tok.lexeme, std::move(arg));
            }
            return Expr::variable(tok.lexeme);
        case Token::Kind::left_paren: {
            ++pos_;
            Expr inner = parse_expr();
            expect_close(tok.position);
            return inner;
        }
        default:
            throw ParseError("unexpected '" + tok.lexeme + "'", tok.position);
        }
    }

    void expect_close(std::size_t open_position) {
        if (pos_ >= tokens_.size()) {
            throw ParseError(fmt::format("unclosed '(' opened at offset {}", open_position), end_);
        }
        if (tokens_[pos_].kind != Token::Kind::right_paren) {
            throw ParseError("expected ')' but found '" + tokens_[pos_].lexeme + "'", here());
        }
        ++pos_;
    }

    [[nodiscard]] bool peek_op(std::string_view op) const {
        return pos_ < tokens_.size() && tokens_[pos_].kind == Token::Kind::op && tokens_[pos_].lexeme == op;
    }

    [[nodiscard]] std::size_t here() const { return pos_ < tokens_.size() ? tokens_[pos_].position : end_; }

    static constexpr std::size_t kMaxDepth = 512;

    std::span<const Token> tokens_;
    std::size_t end_;
    std::size_t pos_ = 0;
    std::size_t depth_ = 0;
};

} // namespace detail

inline Expr parse(std::span<const Token> tokens) {
    if (tokens.empty()) throw ParseError("empty expression", 0);
    const Token& last = tokens.back();
    return detail::Parser(tokens, last.position + last.lexeme.size()).parse_all();
}

inline Expr parse(std::string_view src) {
    const auto tokens = tokenize(src);
    return parse(tokens);
}

using Bindings = std::map<std::string, double, std::less<>>;

inline std::optional<double> builtin_constant(std::string_view name) {
    if (name == "pi") return std::numbers::pi;
    if (name == "e") return std::numbers::e;
    return std::nullopt;
}

// Caller bindings shadow the built-in constants.
inline double evaluate(const Expr& ast, const Bindings& bindings) {
    using K = Expr::Kind;
    switch (ast.kind()) {
    case K::constant: return ast.value();
    case K::variable: {
        if (auto it = bindings.find(ast.name()); it != bindings.end()) return it->second;
        if (auto c = builtin_constant(ast.name())) return *c;
        throw EvalError("unbound variable '" + ast.name() + "'");
    }
    case K::negate: return -evaluate(ast.children()[0], bindings);
    case K::call: {
        const auto f = lookup_function(ast.name());
        if (!f) throw EvalError("unknown function '" + ast.name() + "'");
        return apply(*f, evaluate(ast.children()[0], bindings));
    }
    default: break;
    }
    const double a = evaluate(ast.children()[0], bindings);
    const double b = evaluate(ast.children()[1], bindings);
    switch (ast.kind()) {
    case K::add: return a + b;
    case K::sub: return a - b;
    case K::mul: return a * b;
    case K::div: return a / b;
    case K::pow: return std::pow(a, b);
    default: return std::nan("");
    }
}

inline double evaluate(std::string_view src, const Bindings& bindings = {}) { return evaluate(parse(src), bindings); }

// Fully parenthesized text that parses back to an identical tree.
inline std::string to_string(const Expr& ast) {
    using K = Expr::Kind;
    switch (ast.kind()) {
    case K::constant: return fmt::format("{}", ast.value());
    case K::variable: return ast.name();
    case K::negate: return "(-" + to_string(ast.children()[0]) + ")";
    case K::call: return ast.name() + "(" + to_string(ast.children()[0]) + ")";
    default: break;
    }
    const char* op = "?";
    switch (ast.kind()) {
    case K::add: op = " + "; break;
    case K::sub: op = " - "; break;
    case K::mul: op = " * "; break;
    case K::div: op = " / "; break;
    case K::pow: op = " ^ "; break;
    default: break;
    }
    return "(" + to_string(ast.children()[0]) + op + to_string(ast.children()[1]) + ")";
}

// Expression flattened to a stack program with variables resolved to slots.
// Evaluation allocates nothing beyond a reused scratch stack per call.
class CompiledExpr {
public:
    CompiledExpr(const Expr& ast, std::vector<std::string> variables) : variables_(std::move(variables)) {
        emit(ast);
    }

    [[nodiscard]] std::size_t arity() const noexcept { return variables_.size(); }
    [[nodiscard]] const std::vector<std::string>& variables() const noexcept { return variables_; }

    double operator()(std::span<const double> args) const {
        if (args.size() != variables_.size()) throw EvalError("compiled expression: wrong argument count");
        std::vector<double> stack;
        stack.reserve(depth_);
        for (const Instr& in : code_) {
            switch (in.op) {
            case Op::push: stack.push_back(in.value); break;
            case Op::load: stack.push_back(args[in.slot]); break;
            case Op::neg: stack.back() = -stack.back(); break;
            case Op::call: stack.back() = apply(in.fn, stack.back()); break;
            default: {
                const double b = stack.back();
                stack.pop_back();
                double& a = stack.back();
                switch (in.op) {
                case Op::add: a += b; break;
                case Op::sub: a -= b; break;
                case Op::mul: a *= b; break;
                case Op::div: a /= b; break;
                case Op::pow: a = std::pow(a, b); break;
                default: break;
                }
            }
            }
        }
        return stack.back();
    }

    double operator()(double x) const { return (*this)(std::span<const double>(&x, 1)); }

private:
    enum class Op { push, load, neg, add, sub, mul, div, pow, call };
    struct Instr {
        Op op;
        double value = 0.0;
        std::size_t slot = 0;
        Func fn = Func::sin;
    };

    void emit(const Expr& ast) {
        using K = Expr::Kind;
        switch (ast.kind()) {
        case K::constant: code_.push_back({Op::push, ast.value()}); break;
        case K::variable: {
            for (std::size_t i = 0; i < variables_.size(); ++i) {
                if (variables_[i] == ast.name()) {
                    code_.push_back({Op::load, 0.0, i});
                    bump(1);
                    return;
                }
            }
            if (auto c = builtin_constant(ast.name())) {
                code_.push_back({Op::push, *c});
                break;
            }
            throw EvalError("unbound variable '" + ast.name() + "'");
        }
        case K::negate:
            emit(ast.children()[0]);
            code_.push_back({Op::neg});
            return;
        case K::call: {
            const auto f = lookup_function(ast.name());
            if (!f) throw EvalError("unknown function '" + ast.name() + "'");
            emit(ast.children()[0]);
            code_.push_back({Op::call, 0.0, 0, *f});
            return;
        }
        default: {
            emit(ast.children()[0]);
            emit(ast.children()[1]);
            const Op op = ast.kind() == K::add   ? Op::add
                          : ast.kind() == K::sub ? Op::sub
                          : ast.kind() == K::mul ? Op::mul
                          : ast.kind() == K::div ? Op::div
                                                 : Op::pow;
            code_.push_back({op});
            live_ -= 1;
            return;
        }
        }
        bump(1);
    }

    void bump(std::size_t n) {
        live_ += n;
        depth_ = std::max(depth_, live_);
    }

    std::vector<std::string> variables_;
    std::vector<Instr> code_;
    std::size_t live_ = 0;
    std::size_t depth_ = 0;
};

// Parses `src` as a function of the single variable `var`.
inline std::function<double(double)> function_of(std::string_view src, const std::string& var) {
    CompiledExpr compiled(parse(src), {var});
    return [compiled = std::move(compiled)](double x) { return compiled(x); };
}

} // namespace engcalc::expr

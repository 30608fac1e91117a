#pragma once

// Expression DSL for radial potentials in the variables x1..xn (squared
// moduli) plus the shorthand r2 = x1 + ... + xn.
//
// Grammar:
//   expr   := term (("+" | "-") term)*
//   term   := factor (("*" | "/") factor)*
//   factor := number | ident | "(" expr ")" | ident "(" expr ("," expr)* ")" | "-" factor
//   ident  := x1..xn | r2 | log | exp | sqrt | pow
//
// Numbers are decimal with optional exponent. Parse errors carry the byte
// offset of the offending token. The AST is immutable; evaluation is generic
// over the scalar type (double, DualN, Dual2N, TruncatedSeries) so the same
// tree yields values, gradients, Hessians, and Taylor coefficients.

#include <charconv>
#include <cstddef>
#include <cstdio>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "symap/dual.hpp"
#include "symap/errors.hpp"

namespace symap {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Number, Var, R2, Add, Sub, Mul, Div, Neg, Log, Exp, Sqrt, Pow };

    Kind kind;
    double number = 0.0; // Kind::Number
    int var_index = 0;   // Kind::Var, 0-based
    ExprPtr a, b;        // children (b only for binary kinds)
};

// Programmatic constructors, used by the potential catalog.
inline ExprPtr ex_num(double v) { return std::make_shared<Expr>(Expr{Expr::Kind::Number, v, 0, nullptr, nullptr}); }
inline ExprPtr ex_var(int idx0) { return std::make_shared<Expr>(Expr{Expr::Kind::Var, 0.0, idx0, nullptr, nullptr}); }
inline ExprPtr ex_r2() { return std::make_shared<Expr>(Expr{Expr::Kind::R2, 0.0, 0, nullptr, nullptr}); }
inline ExprPtr ex_add(ExprPtr a, ExprPtr b) { return std::make_shared<Expr>(Expr{Expr::Kind::Add, 0.0, 0, std::move(a), std::move(b)}); }
inline ExprPtr ex_sub(ExprPtr a, ExprPtr b) { return std::make_shared<Expr>(Expr{Expr::Kind::Sub, 0.0, 0, std::move(a), std::move(b)}); }
inline ExprPtr ex_mul(ExprPtr a, ExprPtr b) { return std::make_shared<Expr>(Expr{Expr::Kind::Mul, 0.0, 0, std::move(a), std::move(b)}); }
inline ExprPtr ex_div(ExprPtr a, ExprPtr b) { return std::make_shared<Expr>(Expr{Expr::Kind::Div, 0.0, 0, std::move(a), std::move(b)}); }
inline ExprPtr ex_neg(ExprPtr a) { return std::make_shared<Expr>(Expr{Expr::Kind::Neg, 0.0, 0, std::move(a), nullptr}); }
inline ExprPtr ex_log(ExprPtr a) { return std::make_shared<Expr>(Expr{Expr::Kind::Log, 0.0, 0, std::move(a), nullptr}); }
inline ExprPtr ex_exp(ExprPtr a) { return std::make_shared<Expr>(Expr{Expr::Kind::Exp, 0.0, 0, std::move(a), nullptr}); }
inline ExprPtr ex_sqrt(ExprPtr a) { return std::make_shared<Expr>(Expr{Expr::Kind::Sqrt, 0.0, 0, std::move(a), nullptr}); }
inline ExprPtr ex_pow(ExprPtr a, ExprPtr b) { return std::make_shared<Expr>(Expr{Expr::Kind::Pow, 0.0, 0, std::move(a), std::move(b)}); }

// ---------------------------------------------------------------------------
// Scalar interface. Each supported scalar provides these via overloading;
// additional scalars (truncated series) add their overloads in their own
// header and are picked up by ADL.

inline double s_constant(double c, const double&) { return c; }
inline double s_log(double a) { return checked_log(a); }
inline double s_exp(double a) { return std::exp(a); }
inline double s_sqrt(double a) { return checked_sqrt(a); }
inline double s_div(double a, double b) { return checked_div(a, b); }
inline double s_pow(double a, double b) { return checked_pow(a, b); }

inline DualN s_constant(double c, const DualN& like) { return like.like_constant(c); }
inline DualN s_log(const DualN& a) { return log(a); }
inline DualN s_exp(const DualN& a) { return exp(a); }
inline DualN s_sqrt(const DualN& a) { return sqrt(a); }
inline DualN s_div(const DualN& a, const DualN& b) { return a / b; }
inline DualN s_pow(const DualN& a, const DualN& b) { return pow(a, b); }

inline Dual2N s_constant(double c, const Dual2N& like) { return like.like_constant(c); }
inline Dual2N s_log(const Dual2N& a) { return log(a); }
inline Dual2N s_exp(const Dual2N& a) { return exp(a); }
inline Dual2N s_sqrt(const Dual2N& a) { return sqrt(a); }
inline Dual2N s_div(const Dual2N& a, const Dual2N& b) { return a / b; }
inline Dual2N s_pow(const Dual2N& a, const Dual2N& b) { return pow(a, b); }

template <class S>
S eval_expr(const Expr& e, std::span<const S> x) {
    switch (e.kind) {
        case Expr::Kind::Number: return s_constant(e.number, x[0]);
        case Expr::Kind::Var: return x[static_cast<std::size_t>(e.var_index)];
        case Expr::Kind::R2: {
            S sum = x[0];
            for (std::size_t j = 1; j < x.size(); ++j) sum = sum + x[j];
            return sum;
        }
        case Expr::Kind::Add: return eval_expr(*e.a, x) + eval_expr(*e.b, x);
        case Expr::Kind::Sub: return eval_expr(*e.a, x) - eval_expr(*e.b, x);
        case Expr::Kind::Mul: return eval_expr(*e.a, x) * eval_expr(*e.b, x);
        case Expr::Kind::Div: return s_div(eval_expr(*e.a, x), eval_expr(*e.b, x));
        case Expr::Kind::Neg: return -eval_expr(*e.a, x);
        case Expr::Kind::Log: return s_log(eval_expr(*e.a, x));
        case Expr::Kind::Exp: return s_exp(eval_expr(*e.a, x));
        case Expr::Kind::Sqrt: return s_sqrt(eval_expr(*e.a, x));
        case Expr::Kind::Pow: return s_pow(eval_expr(*e.a, x), eval_expr(*e.b, x));
    }
    throw NumericalError("eval_expr: corrupt AST node");
}

// ---------------------------------------------------------------------------
// Lexer / parser.

namespace detail {

struct Token {
    enum class Kind { Number, Ident, LParen, RParen, Comma, Plus, Minus, Star, Slash, End };
    Kind kind;
    std::size_t offset;
    std::string text;
    double value = 0.0;
};

inline std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    while (i < n) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') { ++i; continue; }
        const std::size_t at = i;
        if (c == '(') { out.push_back({Token::Kind::LParen, at, "(", 0.0}); ++i; continue; }
        if (c == ')') { out.push_back({Token::Kind::RParen, at, ")", 0.0}); ++i; continue; }
        if (c == ',') { out.push_back({Token::Kind::Comma, at, ",", 0.0}); ++i; continue; }
        if (c == '+') { out.push_back({Token::Kind::Plus, at, "+", 0.0}); ++i; continue; }
        if (c == '-') { out.push_back({Token::Kind::Minus, at, "-", 0.0}); ++i; continue; }
        if (c == '*') { out.push_back({Token::Kind::Star, at, "*", 0.0}); ++i; continue; }
        if (c == '/') { out.push_back({Token::Kind::Slash, at, "/", 0.0}); ++i; continue; }
        if ((c >= '0' && c <= '9') || c == '.') {
            std::size_t j = i;
            bool any_digit = false;
            while (j < n && src[j] >= '0' && src[j] <= '9') { ++j; any_digit = true; }
            if (j < n && src[j] == '.') {
                ++j;
                while (j < n && src[j] >= '0' && src[j] <= '9') { ++j; any_digit = true; }
            }
            if (!any_digit) throw SyntaxError(at, "a number");
            if (j < n && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < n && (src[k] == '+' || src[k] == '-')) ++k;
                std::size_t d = k;
                while (d < n && src[d] >= '0' && src[d] <= '9') ++d;
                if (d > k) j = d; // exponent only if it has digits
            }
            std::string text = src.substr(i, j - i);
            std::string clean = text;
            if (!clean.empty() && clean.back() == '.') clean += "0";
            if (!clean.empty() && clean.front() == '.') clean.insert(clean.begin(), '0');
            double value = 0.0;
            const auto res = std::from_chars(clean.data(), clean.data() + clean.size(), value);
            if (res.ec != std::errc{} || res.ptr != clean.data() + clean.size())
                throw SyntaxError(at, "a valid number");
            out.push_back({Token::Kind::Number, at, std::move(text), value});
            i = j;
            continue;
        }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
            std::size_t j = i;
            while (j < n && ((src[j] >= 'a' && src[j] <= 'z') || (src[j] >= 'A' && src[j] <= 'Z') ||
                             (src[j] >= '0' && src[j] <= '9') || src[j] == '_'))
                ++j;
            out.push_back({Token::Kind::Ident, at, src.substr(i, j - i), 0.0});
            i = j;
            continue;
        }
        throw SyntaxError(at, "a token");
    }
    out.push_back({Token::Kind::End, n, "", 0.0});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, int dim) : toks_(std::move(tokens)), dim_(dim) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        if (cur().kind != Token::Kind::End)
            throw SyntaxError(cur().offset, "an operator or end of input");
        return e;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    void advance() { ++pos_; }

    ExprPtr expr() {
        ExprPtr e = term();
        while (cur().kind == Token::Kind::Plus || cur().kind == Token::Kind::Minus) {
            const bool add = cur().kind == Token::Kind::Plus;
            advance();
            ExprPtr r = term();
            e = add ? ex_add(std::move(e), std::move(r)) : ex_sub(std::move(e), std::move(r));
        }
        return e;
    }

    ExprPtr term() {
        ExprPtr e = factor();
        while (cur().kind == Token::Kind::Star || cur().kind == Token::Kind::Slash) {
            const bool mul = cur().kind == Token::Kind::Star;
            advance();
            ExprPtr r = factor();
            e = mul ? ex_mul(std::move(e), std::move(r)) : ex_div(std::move(e), std::move(r));
        }
        return e;
    }

    ExprPtr factor() {
        const Token& t = cur();
        switch (t.kind) {
            case Token::Kind::Number: {
                advance();
                return ex_num(t.value);
            }
            case Token::Kind::Minus: {
                advance();
                return ex_neg(factor());
            }
            case Token::Kind::LParen: {
                advance();
                ExprPtr e = expr();
                expect(Token::Kind::RParen, "')'");
                return e;
            }
            case Token::Kind::Ident:
                return identifier();
            default:
                throw SyntaxError(t.offset, "a number, identifier, '(' or '-'");
        }
    }

    ExprPtr identifier() {
        const Token t = cur();
        advance();
        const std::string& name = t.text;
        const int arity = function_arity(name);
        if (arity > 0) {
            if (cur().kind != Token::Kind::LParen)
                throw SyntaxError(cur().offset, "'(' after function name '" + name + "'");
            advance();
            std::vector<ExprPtr> args;
            args.push_back(expr());
            while (cur().kind == Token::Kind::Comma) {
                advance();
                args.push_back(expr());
            }
            expect(Token::Kind::RParen, "')'");
            if (static_cast<int>(args.size()) != arity)
                throw ArityError(t.offset, name, arity, static_cast<int>(args.size()));
            if (name == "log") return ex_log(std::move(args[0]));
            if (name == "exp") return ex_exp(std::move(args[0]));
            if (name == "sqrt") return ex_sqrt(std::move(args[0]));
            return ex_pow(std::move(args[0]), std::move(args[1]));
        }
        if (name == "r2") return ex_r2();
        if (name.size() >= 2 && name[0] == 'x') {
            bool digits = true;
            for (std::size_t j = 1; j < name.size(); ++j)
                if (name[j] < '0' || name[j] > '9') { digits = false; break; }
            if (digits && name[1] != '0') {
                int idx = 0;
                const auto res = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
                if (res.ec == std::errc{} && idx >= 1 && idx <= dim_) return ex_var(idx - 1);
            }
        }
        throw UnknownIdentifier(t.offset, name);
    }

    int function_arity(const std::string& name) const {
        if (name == "log" || name == "exp" || name == "sqrt") return 1;
        if (name == "pow") return 2;
        return 0;
    }

    void expect(Token::Kind k, const std::string& what) {
        if (cur().kind != k) throw SyntaxError(cur().offset, what);
        advance();
    }

    std::vector<Token> toks_;
    int dim_;
    std::size_t pos_ = 0;
};

} // namespace detail

// Parse a potential expression over x1..x<dim>. Throws SyntaxError,
// UnknownIdentifier, or ArityError with byte offsets into `src`.
inline ExprPtr parse_expr(const std::string& src, int dim) {
    if (dim < 1) throw Error("parse_expr: dim must be >= 1");
    detail::Parser p(detail::lex(src), dim);
    return p.parse();
}

// Render an AST back to DSL text (parenthesised conservatively).
inline std::string format_expr(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", e.number);
            return buf;
        }
        case Expr::Kind::Var: return "x" + std::to_string(e.var_index + 1);
        case Expr::Kind::R2: return "r2";
        case Expr::Kind::Add: return "(" + format_expr(*e.a) + " + " + format_expr(*e.b) + ")";
        case Expr::Kind::Sub: return "(" + format_expr(*e.a) + " - " + format_expr(*e.b) + ")";
        case Expr::Kind::Mul: return "(" + format_expr(*e.a) + " * " + format_expr(*e.b) + ")";
        case Expr::Kind::Div: return "(" + format_expr(*e.a) + " / " + format_expr(*e.b) + ")";
        case Expr::Kind::Neg: return "(-" + format_expr(*e.a) + ")";
        case Expr::Kind::Log: return "log(" + format_expr(*e.a) + ")";
        case Expr::Kind::Exp: return "exp(" + format_expr(*e.a) + ")";
        case Expr::Kind::Sqrt: return "sqrt(" + format_expr(*e.a) + ")";
        case Expr::Kind::Pow: return "pow(" + format_expr(*e.a) + ", " + format_expr(*e.b) + ")";
    }
    return "?";
}

} // namespace symap

/*
 * Copyright 2026 the midquad authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MIDQUAD_EXPR_HPP
#define MIDQUAD_EXPR_HPP

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "midquad/errors.hpp"
#include "midquad/format.hpp"

namespace midquad {

// Univariate expressions over the variable `x`.
//
// Grammar (whitespace-insensitive, standard precedence):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          -- exponent must fold to a constant
//   primary := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'
//   FUNC    := exp | ln | sin | cos | sqrt
//
// '^' binds tighter than unary minus, so "-x^2" is -(x^2). Number literals
// are decimal or scientific ("2", "0.5", ".5", "1e-3", "2.5e+4").

enum class NodeKind {
    Constant,
    Variable,
    Neg,
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
};

/// Immutable AST node. `Pow` keeps its exponent out-of-band (the exponent
/// must be constant) so integer exponents can take the repeated-Taylor-
/// multiplication path, which is valid for bases of any sign.
struct Node {
    NodeKind kind;
    double value = 0.0;              // Constant
    double exponent = 0.0;           // Pow
    bool integer_exponent = false;   // Pow
    long long exponent_int = 0;      // Pow, valid when integer_exponent
    std::shared_ptr<const Node> lhs; // unary operand / binary lhs / pow base
    std::shared_ptr<const Node> rhs; // binary rhs
};

using NodePtr = std::shared_ptr<const Node>;

/// A parsed expression. Immutable after construction; shared freely across
/// threads.
class Expression {
public:
    explicit Expression(NodePtr root) : root_(std::move(root)) {}

    const Node& root() const noexcept { return *root_; }
    NodePtr root_ptr() const noexcept { return root_; }

    std::string serialize() const;

private:
    NodePtr root_;
};

namespace detail {

inline NodePtr make_node(NodeKind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

inline NodePtr make_constant(double v) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->value = v;
    return n;
}

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    double num = 0.0;
    std::string text;
    std::size_t offset = 0;
};

inline std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        switch (c) {
        case '+': out.push_back({Tok::Plus, 0, "+", start}); ++i; continue;
        case '-': out.push_back({Tok::Minus, 0, "-", start}); ++i; continue;
        case '*': out.push_back({Tok::Star, 0, "*", start}); ++i; continue;
        case '/': out.push_back({Tok::Slash, 0, "/", start}); ++i; continue;
        case '^': out.push_back({Tok::Caret, 0, "^", start}); ++i; continue;
        case '(': out.push_back({Tok::LParen, 0, "(", start}); ++i; continue;
        case ')': out.push_back({Tok::RParen, 0, ")", start}); ++i; continue;
        default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            if (i < src.size() && src[i] == '.') {
                ++i;
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            }
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t mark = i;
                ++i;
                if (i < src.size() && (src[i] == '+' || src[i] == '-')) ++i;
                if (i >= src.size() || !std::isdigit(static_cast<unsigned char>(src[i])))
                    throw ParseError("malformed exponent in numeric literal", mark);
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            }
            std::string text(src.substr(start, i - start));
            std::string norm = text;
            if (norm.front() == '.') norm.insert(norm.begin(), '0');
            if (norm.back() == '.') norm.push_back('0');
            double v = 0.0;
            const auto res = std::from_chars(norm.data(), norm.data() + norm.size(), v);
            if (res.ec == std::errc::result_out_of_range || !std::isfinite(v))
                throw ParseError("numeric literal out of range", start);
            if (res.ec != std::errc() || res.ptr != norm.data() + norm.size())
                throw ParseError("malformed numeric literal", start);
            out.push_back({Tok::Number, v, std::move(text), start});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
                ++i;
            out.push_back({Tok::Ident, 0, std::string(src.substr(start, i - start)), start});
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
    out.push_back({Tok::End, 0, "", src.size()});
    return out;
}

/// Evaluates a variable-free subtree. Returns nullopt when the subtree
/// contains `x`.
inline std::optional<double> fold_constant(const Node& n) {
    switch (n.kind) {
    case NodeKind::Constant: return n.value;
    case NodeKind::Variable: return std::nullopt;
    case NodeKind::Neg:
        if (auto v = fold_constant(*n.lhs)) return -*v;
        return std::nullopt;
    case NodeKind::Exp:
        if (auto v = fold_constant(*n.lhs)) return std::exp(*v);
        return std::nullopt;
    case NodeKind::Ln:
        if (auto v = fold_constant(*n.lhs)) return std::log(*v);
        return std::nullopt;
    case NodeKind::Sin:
        if (auto v = fold_constant(*n.lhs)) return std::sin(*v);
        return std::nullopt;
    case NodeKind::Cos:
        if (auto v = fold_constant(*n.lhs)) return std::cos(*v);
        return std::nullopt;
    case NodeKind::Sqrt:
        if (auto v = fold_constant(*n.lhs)) return std::sqrt(*v);
        return std::nullopt;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div: {
        auto a = fold_constant(*n.lhs);
        auto b = fold_constant(*n.rhs);
        if (!a || !b) return std::nullopt;
        switch (n.kind) {
        case NodeKind::Add: return *a + *b;
        case NodeKind::Sub: return *a - *b;
        case NodeKind::Mul: return *a * *b;
        default: return *a / *b;
        }
    }
    case NodeKind::Pow:
        if (auto v = fold_constant(*n.lhs)) return std::pow(*v, n.exponent);
        return std::nullopt;
    }
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    NodePtr run() {
        if (toks_.size() == 1) throw ParseError("empty expression", 0);
        NodePtr root = parse_expr();
        if (peek().kind != Tok::End)
            throw ParseError("unexpected token '" + peek().text + "'", peek().offset);
        return root;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const bool plus = advance().kind == Tok::Plus;
            lhs = make_node(plus ? NodeKind::Add : NodeKind::Sub, lhs, parse_term());
        }
        return lhs;
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const bool mul = advance().kind == Tok::Star;
            lhs = make_node(mul ? NodeKind::Mul : NodeKind::Div, lhs, parse_unary());
        }
        return lhs;
    }

    NodePtr parse_unary() {
        if (accept(Tok::Minus)) return make_node(NodeKind::Neg, parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (peek().kind != Tok::Caret) return base;
        const std::size_t caret = advance().offset;
        NodePtr exp_tree = parse_unary();
        const auto folded = fold_constant(*exp_tree);
        if (!folded)
            throw ParseError("exponent of '^' must be a constant", caret);
        if (!std::isfinite(*folded))
            throw ParseError("exponent of '^' must be finite", caret);
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Pow;
        n->lhs = base;
        n->exponent = *folded;
        if (*folded == std::rint(*folded) && std::abs(*folded) <= 9007199254740992.0) {
            n->integer_exponent = true;
            n->exponent_int = std::llround(*folded);
        }
        return n;
    }

    NodePtr parse_primary() {
        const Token& tok = peek();
        switch (tok.kind) {
        case Tok::Number:
            advance();
            return make_constant(tok.num);
        case Tok::Ident: {
            advance();
            if (tok.text == "x") return make_node(NodeKind::Variable);
            NodeKind kind;
            if (tok.text == "exp") kind = NodeKind::Exp;
            else if (tok.text == "ln") kind = NodeKind::Ln;
            else if (tok.text == "sin") kind = NodeKind::Sin;
            else if (tok.text == "cos") kind = NodeKind::Cos;
            else if (tok.text == "sqrt") kind = NodeKind::Sqrt;
            else throw ParseError("unknown identifier '" + tok.text + "'", tok.offset);
            if (!accept(Tok::LParen))
                throw ParseError("expected '(' after '" + tok.text + "'", peek().offset);
            NodePtr arg = parse_expr();
            if (!accept(Tok::RParen))
                throw ParseError("expected ')'", peek().offset);
            return make_node(kind, arg);
        }
        case Tok::LParen: {
            advance();
            NodePtr inner = parse_expr();
            if (!accept(Tok::RParen))
                throw ParseError("expected ')'", peek().offset);
            return inner;
        }
        default:
            throw ParseError("expected a value", tok.offset);
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

inline void serialize_node(const Node& n, std::string& out) {
    switch (n.kind) {
    case NodeKind::Constant:
        out += format_number(n.value);
        return;
    case NodeKind::Variable:
        out += 'x';
        return;
    case NodeKind::Neg:
        out += "(-";
        serialize_node(*n.lhs, out);
        out += ')';
        return;
    case NodeKind::Exp:
    case NodeKind::Ln:
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Sqrt: {
        const char* name = n.kind == NodeKind::Exp   ? "exp"
                           : n.kind == NodeKind::Ln  ? "ln"
                           : n.kind == NodeKind::Sin ? "sin"
                           : n.kind == NodeKind::Cos ? "cos"
                                                     : "sqrt";
        out += name;
        out += '(';
        serialize_node(*n.lhs, out);
        out += ')';
        return;
    }
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div: {
        const char op = n.kind == NodeKind::Add   ? '+'
                        : n.kind == NodeKind::Sub ? '-'
                        : n.kind == NodeKind::Mul ? '*'
                                                  : '/';
        out += '(';
        serialize_node(*n.lhs, out);
        out += op;
        serialize_node(*n.rhs, out);
        out += ')';
        return;
    }
    case NodeKind::Pow:
        out += '(';
        serialize_node(*n.lhs, out);
        out += '^';
        if (n.integer_exponent) out += std::to_string(n.exponent_int);
        else out += format_number(n.exponent);
        out += ')';
        return;
    }
}

} // namespace detail

/// Parses expression text into an AST. Throws ParseError (with byte offset)
/// on syntax errors, unknown identifiers, and empty input.
inline Expression parse(std::string_view source) {
    detail::Parser parser(detail::lex(source));
    return Expression(parser.run());
}

inline std::string Expression::serialize() const {
    std::string out;
    detail::serialize_node(*root_, out);
    return out;
}

} // namespace midquad

#endif // MIDQUAD_EXPR_HPP

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evalgame/rational.hpp"

namespace evalgame {

class ExprError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LexError : public ExprError {
public:
    LexError(const std::string& what, std::size_t offset)
        : ExprError(what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class ParseError : public ExprError {
public:
    using ExprError::ExprError;
};

class UnboundVariable : public ExprError {
public:
    using ExprError::ExprError;
};

class UnknownVariable : public ExprError {
public:
    using ExprError::ExprError;
};

/// Digit outside 0-9 in an assignment or substitution.
class InvalidDigit : public ExprError {
public:
    using ExprError::ExprError;
};

enum class TokenKind { number, variable, op, left_paren, right_paren };

struct Token {
    TokenKind kind = TokenKind::number;
    std::int64_t number = 0;  // kind == number
    std::string name;         // kind == variable
    char op = 0;              // kind == op: one of + - * /
    int variable = -1;        // index into Expression::variables(), set in postfix only

    static Token make_number(std::int64_t v) { return {TokenKind::number, v, {}, 0, -1}; }
    static Token make_variable(std::string n) { return {TokenKind::variable, 0, std::move(n), 0, -1}; }
    static Token make_op(char c) { return {TokenKind::op, 0, {}, c, -1}; }
    static Token make_paren(bool left) {
        return {left ? TokenKind::left_paren : TokenKind::right_paren, 0, {}, 0, -1};
    }

    std::string to_string() const;
    friend bool operator==(const Token&, const Token&) = default;
};

/// Variable name to digit. Every bound name must occur in the expression.
using Assignment = std::map<std::string, int, std::less<>>;

/// A well-formed postfix program plus its variables in first-occurrence
/// order. Immutable once built.
class Expression {
public:
    const std::vector<Token>& postfix() const { return postfix_; }
    const std::vector<std::string>& variables() const { return variables_; }
    const std::string& source() const { return source_; }
    std::size_t variable_count() const { return variables_.size(); }

    std::optional<std::size_t> variable_index(std::string_view name) const;

    /// Space separated postfix, e.g. "10 X - Y *".
    std::string postfix_string() const;

private:
    friend Expression to_postfix(const std::vector<Token>& tokens);
    friend Expression parse(std::string_view text);
    friend Expression substitute(const Expression&, std::string_view, int);
    friend Expression negate(const Expression&);
    friend Value evaluate(const Expression&, std::span<const std::int8_t>);

    // Validates postfix, indexes variables in first-occurrence order.
    void finalize();

    std::vector<Token> postfix_;
    std::vector<std::string> variables_;
    std::string source_;
    std::size_t max_depth_ = 0;
};

std::vector<Token> tokenize(std::string_view text);

/// Shunting yard. Left-associative, {* /} bind tighter than {+ -}.
Expression to_postfix(const std::vector<Token>& tokens);

/// tokenize + to_postfix, keeping `text` as the source.
Expression parse(std::string_view text);

/// Exact stack evaluation. Any division by zero makes the result Invalid.
Value evaluate(const Expression& expr, const Assignment& assignment);

/// Hot-path evaluation: `digits[i]` is the digit of variables()[i], or -1
/// if unbound (which throws UnboundVariable).
Value evaluate(const Expression& expr, std::span<const std::int8_t> digits);

/// Replace every occurrence of `variable` by the literal `digit`.
Expression substitute(const Expression& expr, std::string_view variable, int digit);

/// 0 - expr, with the same variables.
Expression negate(const Expression& expr);

/// Source text with bound variables written as their digits, e.g.
/// "(10-5)*Y". Whitespace and layout of the source are preserved.
std::string render_with_bindings(std::string_view source, const Assignment& bindings);

}  // namespace evalgame

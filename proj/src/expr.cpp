#include "evalgame/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>

namespace evalgame {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

int precedence(char op) { return (op == '*' || op == '/') ? 2 : 1; }

// U+2212 MINUS SIGN, as it tends to show up in pasted expressions.
constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";

Value apply(char op, const Rational& a, const Rational& b, bool& invalid) {
    switch (op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        default:
            if (b.numerator() == 0) {
                invalid = true;
                return Value::invalid();
            }
            return a / b;
    }
}

template <class Lookup>
Value run_postfix(const std::vector<Token>& postfix, std::size_t max_depth, Lookup&& lookup) {
    constexpr std::size_t kInline = 32;
    std::array<Rational, kInline> inline_stack;
    std::vector<Rational> heap_stack;
    Rational* stack = inline_stack.data();
    if (max_depth > kInline) {
        heap_stack.resize(max_depth);
        stack = heap_stack.data();
    }
    std::size_t top = 0;
    for (const Token& t : postfix) {
        switch (t.kind) {
            case TokenKind::number:
                stack[top++] = Rational(t.number);
                break;
            case TokenKind::variable:
                stack[top++] = Rational(lookup(t));
                break;
            case TokenKind::op: {
                bool invalid = false;
                Value v = apply(t.op, stack[top - 2], stack[top - 1], invalid);
                if (invalid)
                    return Value::invalid();
                --top;
                stack[top - 1] = v.rational();
                break;
            }
            default:
                break;
        }
    }
    return stack[0];
}

}  // namespace

std::string Token::to_string() const {
    switch (kind) {
        case TokenKind::number: return std::to_string(number);
        case TokenKind::variable: return name;
        case TokenKind::op: return std::string(1, op);
        case TokenKind::left_paren: return "(";
        case TokenKind::right_paren: return ")";
    }
    return {};
}

std::optional<std::size_t> Expression::variable_index(std::string_view name) const {
    auto it = std::find(variables_.begin(), variables_.end(), name);
    if (it == variables_.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - variables_.begin());
}

std::string Expression::postfix_string() const {
    std::string out;
    for (const Token& t : postfix_) {
        if (!out.empty())
            out += ' ';
        out += t.to_string();
    }
    return out;
}

void Expression::finalize() {
    variables_.clear();
    std::size_t depth = 0;
    max_depth_ = 0;
    for (Token& t : postfix_) {
        switch (t.kind) {
            case TokenKind::number:
                ++depth;
                break;
            case TokenKind::variable: {
                auto it = std::find(variables_.begin(), variables_.end(), t.name);
                if (it == variables_.end()) {
                    t.variable = static_cast<int>(variables_.size());
                    variables_.push_back(t.name);
                } else {
                    t.variable = static_cast<int>(it - variables_.begin());
                }
                ++depth;
                break;
            }
            case TokenKind::op:
                if (depth < 2)
                    throw ParseError("operator '" + std::string(1, t.op) + "' is missing an operand");
                --depth;
                break;
            default:
                throw ParseError("parenthesis in postfix program");
        }
        max_depth_ = std::max(max_depth_, depth);
    }
    if (depth != 1)
        throw ParseError(depth == 0 ? "empty expression" : "missing operator between operands");
}

std::vector<Token> tokenize(std::string_view text) {
    if (text.empty())
        throw LexError("empty expression", 0);
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (is_digit(c)) {
            std::int64_t v = 0;
            std::size_t start = i;
            while (i < text.size() && is_digit(text[i])) {
                int d = text[i] - '0';
                if (v > (std::numeric_limits<std::int64_t>::max() - d) / 10)
                    throw LexError("integer literal too large", start);
                v = v * 10 + d;
                ++i;
            }
            out.push_back(Token::make_number(v));
        } else if (is_ident_start(c)) {
            std::size_t start = i;
            while (i < text.size() && is_ident_char(text[i]))
                ++i;
            out.push_back(Token::make_variable(std::string(text.substr(start, i - start))));
        } else if (c == '+' || c == '-' || c == '*' || c == '/') {
            out.push_back(Token::make_op(c));
            ++i;
        } else if (c == '(' || c == ')') {
            out.push_back(Token::make_paren(c == '('));
            ++i;
        } else if (text.substr(i, kUnicodeMinus.size()) == kUnicodeMinus) {
            out.push_back(Token::make_op('-'));
            i += kUnicodeMinus.size();
        } else {
            throw LexError("unexpected character '" + std::string(1, c) + "' at offset " + std::to_string(i), i);
        }
    }
    if (out.empty())
        throw LexError("expression has no tokens", 0);
    return out;
}

Expression to_postfix(const std::vector<Token>& tokens) {
    Expression expr;
    std::vector<Token> ops;
    bool expect_operand = true;
    for (const Token& t : tokens) {
        switch (t.kind) {
            case TokenKind::number:
            case TokenKind::variable:
                if (!expect_operand)
                    throw ParseError("missing operator before '" + t.to_string() + "'");
                expr.postfix_.push_back(t);
                expect_operand = false;
                break;
            case TokenKind::op:
                if (expect_operand)
                    throw ParseError("operator '" + std::string(1, t.op) + "' is missing its left operand");
                while (!ops.empty() && ops.back().kind == TokenKind::op &&
                       precedence(ops.back().op) >= precedence(t.op)) {
                    expr.postfix_.push_back(ops.back());
                    ops.pop_back();
                }
                ops.push_back(t);
                expect_operand = true;
                break;
            case TokenKind::left_paren:
                if (!expect_operand)
                    throw ParseError("missing operator before '('");
                ops.push_back(t);
                break;
            case TokenKind::right_paren:
                if (expect_operand)
                    throw ParseError("expected an operand before ')'");
                while (!ops.empty() && ops.back().kind != TokenKind::left_paren) {
                    expr.postfix_.push_back(ops.back());
                    ops.pop_back();
                }
                if (ops.empty())
                    throw ParseError("unbalanced ')'");
                ops.pop_back();
                break;
        }
    }
    if (expect_operand)
        throw ParseError("expression ends where an operand is expected");
    while (!ops.empty()) {
        if (ops.back().kind == TokenKind::left_paren)
            throw ParseError("unbalanced '('");
        expr.postfix_.push_back(ops.back());
        ops.pop_back();
    }
    for (const Token& t : tokens)
        expr.source_ += t.to_string();
    expr.finalize();
    return expr;
}

Expression parse(std::string_view text) {
    Expression expr = to_postfix(tokenize(text));
    expr.source_ = std::string(text);
    return expr;
}

Value evaluate(const Expression& expr, const Assignment& assignment) {
    for (const auto& [name, digit] : assignment) {
        if (!expr.variable_index(name))
            throw UnknownVariable("variable '" + name + "' does not occur in the expression");
        if (digit < 0 || digit > 9)
            throw InvalidDigit("digit " + std::to_string(digit) + " for '" + name + "' is outside 0-9");
    }
    std::vector<std::int8_t> digits(expr.variable_count(), -1);
    for (const auto& [name, digit] : assignment)
        digits[*expr.variable_index(name)] = static_cast<std::int8_t>(digit);
    return evaluate(expr, digits);
}

Value evaluate(const Expression& expr, std::span<const std::int8_t> digits) {
    return run_postfix(expr.postfix_, expr.max_depth_, [&](const Token& t) -> std::int64_t {
        auto idx = static_cast<std::size_t>(t.variable);
        if (idx >= digits.size() || digits[idx] < 0)
            throw UnboundVariable("variable '" + t.name + "' is not bound");
        return digits[idx];
    });
}

Expression substitute(const Expression& expr, std::string_view variable, int digit) {
    if (!expr.variable_index(variable))
        throw UnknownVariable("variable '" + std::string(variable) + "' does not occur in the expression");
    if (digit < 0 || digit > 9)
        throw InvalidDigit("digit " + std::to_string(digit) + " is outside 0-9");
    Expression out;
    out.postfix_.reserve(expr.postfix_.size());
    for (const Token& t : expr.postfix_) {
        if (t.kind == TokenKind::variable && t.name == variable)
            out.postfix_.push_back(Token::make_number(digit));
        else
            out.postfix_.push_back(t);
    }
    out.source_ = render_with_bindings(expr.source_, Assignment{{std::string(variable), digit}});
    out.finalize();
    return out;
}

Expression negate(const Expression& expr) {
    Expression out;
    out.postfix_.reserve(expr.postfix_.size() + 2);
    out.postfix_.push_back(Token::make_number(0));
    out.postfix_.insert(out.postfix_.end(), expr.postfix_.begin(), expr.postfix_.end());
    out.postfix_.push_back(Token::make_op('-'));
    out.source_ = "0-(" + expr.source_ + ")";
    out.finalize();
    return out;
}

std::string render_with_bindings(std::string_view source, const Assignment& bindings) {
    std::string out;
    out.reserve(source.size());
    std::size_t i = 0;
    while (i < source.size()) {
        char c = source[i];
        if (is_ident_start(c)) {
            std::size_t start = i;
            while (i < source.size() && is_ident_char(source[i]))
                ++i;
            std::string_view name = source.substr(start, i - start);
            auto it = bindings.find(name);
            if (it != bindings.end())
                out += std::to_string(it->second);
            else
                out += name;
        } else if (is_digit(c)) {
            // Copy whole literals so identifiers are only matched at a word start.
            while (i < source.size() && is_digit(source[i]))
                out += source[i++];
        } else {
            out += c;
            ++i;
        }
    }
    return out;
}

}  // namespace evalgame

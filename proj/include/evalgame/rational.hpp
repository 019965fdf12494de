#pragma once

#include <cstdint>
#include <compare>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace evalgame {

/// Raised when a rational component leaves the 64-bit range.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Exact rational number with 64-bit components, always kept in lowest
/// terms with a positive denominator. Every operation checks for overflow
/// and throws OverflowError instead of wrapping.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t integer) : num_(integer) {}  // NOLINT(implicit)
    Rational(std::int64_t numerator, std::int64_t denominator);

    /// Precondition: already in lowest terms with denominator > 0.
    static Rational from_reduced(std::int64_t numerator, std::int64_t denominator);

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }
    bool is_integer() const { return den_ == 1; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    // Divisor must be nonzero; callers decide what division by zero means.
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const;

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    /// "p/q", or just "p" for integers.
    std::string to_string() const;
    /// Decimal rendering with the given number of significant digits.
    std::string to_decimal(int significant = 6) const;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Result of evaluating an expression: a finite rational, or Invalid when a
/// division by zero occurred somewhere. Invalid is not ordered against
/// anything; the search treats it as "no value".
class Value {
public:
    constexpr Value() = default;  // Invalid
    Value(const Rational& r) : finite_(true), r_(r) {}  // NOLINT(implicit)
    Value(std::int64_t i) : finite_(true), r_(i) {}     // NOLINT(implicit)

    static constexpr Value invalid() { return Value{}; }

    bool is_finite() const { return finite_; }
    bool is_invalid() const { return !finite_; }
    /// Precondition: is_finite().
    const Rational& rational() const { return r_; }

    friend bool operator==(const Value& a, const Value& b) {
        return a.finite_ == b.finite_ && (!a.finite_ || a.r_ == b.r_);
    }

    /// Negation; Invalid stays Invalid.
    Value negated() const { return finite_ ? Value(-r_) : Value{}; }

    /// "p/q", integer, or "undefined".
    std::string to_string() const;
    /// "p/q (decimal)" for non-integers, integer otherwise, "undefined" for Invalid.
    std::string to_display() const;

private:
    bool finite_ = false;
    Rational r_;
};

std::ostream& operator<<(std::ostream& os, const Value& v);

/// Inverse of Value::to_string: "p/q", "p" or "undefined". Throws
/// std::invalid_argument on anything else.
Value parse_value(std::string_view text);

}  // namespace evalgame

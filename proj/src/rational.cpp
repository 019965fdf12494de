#include "evalgame/rational.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

namespace evalgame {

namespace {

using wide = __int128;

constexpr wide kMax = std::numeric_limits<std::int64_t>::max();
constexpr wide kMin = std::numeric_limits<std::int64_t>::min();

wide gcd_wide(wide a, wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    if (a <= kMax && b <= kMax)
        return std::gcd(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b));
    while (b != 0) {
        wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Reduce num/den (den != 0) and narrow to 64-bit, throwing on overflow.
Rational make_reduced(wide num, wide den, const char* op) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    wide g = gcd_wide(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    // Keep -num representable so negation never overflows.
    if (num > kMax || num <= kMin || den > kMax)
        throw OverflowError(std::string("rational overflow in ") + op);
    return Rational::from_reduced(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0)
        throw std::domain_error("rational with zero denominator");
    if (numerator == std::numeric_limits<std::int64_t>::min() ||
        denominator == std::numeric_limits<std::int64_t>::min())
        throw OverflowError("rational component out of range");
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    std::int64_t g = std::gcd(numerator, denominator);
    num_ = numerator / g;
    den_ = denominator / g;
}

Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) {
        std::int64_t out;
        if (!__builtin_add_overflow(a.num_, b.num_, &out) && out != std::numeric_limits<std::int64_t>::min())
            return Rational(out);
        throw OverflowError("rational overflow in +");
    }
    wide num = wide(a.num_) * b.den_ + wide(b.num_) * a.den_;
    return make_reduced(num, wide(a.den_) * b.den_, "+");
}

Rational operator-(const Rational& a, const Rational& b) {
    return a + (-b);
}

Rational operator*(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) {
        std::int64_t out;
        if (!__builtin_mul_overflow(a.num_, b.num_, &out) && out != std::numeric_limits<std::int64_t>::min())
            return Rational(out);
        throw OverflowError("rational overflow in *");
    }
    return make_reduced(wide(a.num_) * b.num_, wide(a.den_) * b.den_, "*");
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0)
        throw std::domain_error("rational division by zero");
    return make_reduced(wide(a.num_) * b.den_, wide(a.den_) * b.num_, "/");
}

Rational Rational::from_reduced(std::int64_t numerator, std::int64_t denominator) {
    Rational r;
    r.num_ = numerator;
    r.den_ = denominator;
    return r;
}

Rational Rational::operator-() const {
    return from_reduced(-num_, den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_)
        return a.num_ <=> b.num_;
    wide lhs = wide(a.num_) * b.den_;
    wide rhs = wide(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::to_string() const {
    if (den_ == 1)
        return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::to_decimal(int significant) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant, to_double());
    return buf;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
}

std::string Value::to_string() const {
    return finite_ ? r_.to_string() : "undefined";
}

std::string Value::to_display() const {
    if (!finite_)
        return "undefined";
    if (r_.is_integer())
        return r_.to_string();
    return r_.to_string() + " (" + r_.to_decimal(6) + ")";
}

std::ostream& operator<<(std::ostream& os, const Value& v) {
    return os << v.to_string();
}

Value parse_value(std::string_view text) {
    if (text == "undefined")
        return Value::invalid();
    auto parse_int = [&](std::string_view part) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc() || ptr != part.data() + part.size() || part.empty())
            throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
        return v;
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(text));
    std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
}

}  // namespace evalgame

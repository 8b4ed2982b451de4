#include "cmtk/scalar.hpp"

#include "cmtk/errors.hpp"

#include <cctype>
#include <charconv>

namespace cmtk {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
}

// Integer's string constructor treats a leading zero as an octal prefix.
Integer decimal_integer(std::string_view digits) {
    const auto first = digits.find_first_not_of('0');
    if (first == std::string_view::npos) return Integer(0);
    return Integer{std::string(digits.substr(first))};
}

std::optional<Integer> parse_integer(std::string_view s) {
    s = trim(s);
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) return std::nullopt;
    Integer value = decimal_integer(s);
    return negative ? Integer(-value) : value;
}

Integer pow10(long e) {
    Integer r = 1;
    for (long i = 0; i < e; ++i) r *= 10;
    return r;
}

// Decimal with optional fraction and exponent: [+-]digits[.digits][e[+-]digits]
std::optional<Rational> parse_decimal(std::string_view s) {
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
        std::string_view exp_part = s.substr(epos + 1);
        s = s.substr(0, epos);
        bool exp_negative = false;
        if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
            exp_negative = exp_part.front() == '-';
            exp_part.remove_prefix(1);
        }
        if (!all_digits(exp_part) || exp_part.size() > 5) return std::nullopt;
        std::from_chars(exp_part.data(), exp_part.data() + exp_part.size(), exponent);
        if (exp_negative) exponent = -exponent;
    }
    std::string_view int_part = s;
    std::string_view frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        int_part = s.substr(0, dot);
        frac_part = s.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) return std::nullopt;
    if (!int_part.empty() && !all_digits(int_part)) return std::nullopt;
    if (!frac_part.empty() && !all_digits(frac_part)) return std::nullopt;

    std::string digits = std::string(int_part) + std::string(frac_part);
    Integer mantissa = decimal_integer(digits);
    exponent -= static_cast<long>(frac_part.size());
    Rational value = exponent >= 0 ? Rational(mantissa * pow10(exponent)) : Rational(mantissa, pow10(-exponent));
    return negative ? Rational(-value) : value;
}

}  // namespace

Rational to_rational(double x) {
    if (!std::isfinite(x)) throw DomainError("cannot convert non-finite value to a rational");
    return Rational(x);
}

std::optional<Rational> try_parse_rational(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = parse_integer(text.substr(0, slash));
        auto den = parse_integer(text.substr(slash + 1));
        if (!num || !den || *den == 0) return std::nullopt;
        return Rational(*num, *den);
    }
    return parse_decimal(text);
}

Rational parse_rational(std::string_view text) {
    auto value = try_parse_rational(text);
    if (!value) throw ParseError("not a rational number: '" + std::string(text) + "'");
    return *value;
}

std::string to_string(const Rational& x) {
    return x.str();
}

const char* to_string(Mode mode) {
    return mode == Mode::exact ? "exact" : "float";
}

}  // namespace cmtk

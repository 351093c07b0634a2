#pragma once

// Exact arithmetic substrate: arbitrary-precision integers and fractions,
// plus the parsing/formatting conventions used by every file format.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace symcap {

// Expression templates off: values behave like plain arithmetic types.
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Integer floor(const Rational& r)
{
    Integer q = numerator(r) / denominator(r);   // truncates toward zero
    if (r < 0 && q * denominator(r) != numerator(r)) --q;
    return q;
}

inline Integer ceil(const Rational& r) { return -floor(-r); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Integer lcm(const Integer& a, const Integer& b)
{
    if (a == 0 || b == 0) return 0;
    return boost::multiprecision::abs(a / boost::multiprecision::gcd(a, b) * b);
}

inline std::int64_t to_int64(const Integer& v)
{
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("integer does not fit in 64 bits: " + v.str());
    return v.convert_to<std::int64_t>();
}

/// "p/q" for non-integers, "p" for integers.
inline std::string to_string(const Rational& r) { return r.str(); }

/// 17 significant digits, enough to round-trip a binary64.
inline std::string format_double(double x)
{
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

namespace detail {

inline Integer parse_digits(std::string_view s, std::string_view whole)
{
    if (s.empty()) throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
    Integer v = 0;
    for (char ch : s) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
        v = v * 10 + (ch - '0');
    }
    return v;
}

inline Integer pow10(long e)
{
    Integer p = 1;
    for (long i = 0; i < e; ++i) p *= 10;
    return p;
}

}  // namespace detail

/// Parses "p/q", an integer, or a decimal with optional exponent ("1.25", "-3e-2"),
/// all exactly.
inline Rational parse_rational(std::string_view text)
{
    const std::string_view whole = text;
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty number");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational p = parse_rational(text.substr(0, slash));
        Rational q = parse_rational(text.substr(slash + 1));
        if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
        return p / q;
    }

    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }

    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view es = text.substr(e + 1);
        bool eneg = false;
        if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
            eneg = es.front() == '-';
            es.remove_prefix(1);
        }
        if (es.size() > 6) throw std::invalid_argument("exponent too large in '" + std::string(whole) + "'");
        exponent = detail::parse_digits(es, whole).convert_to<long>();
        if (eneg) exponent = -exponent;
        text = text.substr(0, e);
    }

    Integer digits;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view ip = text.substr(0, dot);
        std::string_view fp = text.substr(dot + 1);
        if (ip.empty() && fp.empty()) throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
        Integer i = ip.empty() ? Integer(0) : detail::parse_digits(ip, whole);
        Integer f = fp.empty() ? Integer(0) : detail::parse_digits(fp, whole);
        digits = i * detail::pow10(static_cast<long>(fp.size())) + f;
        exponent -= static_cast<long>(fp.size());
    } else {
        digits = detail::parse_digits(text, whole);
    }

    Rational r = exponent >= 0 ? Rational(digits * detail::pow10(exponent))
                               : Rational(digits, detail::pow10(-exponent));
    return negative ? Rational(-r) : r;
}

/// Exact value of a finite binary64.
inline Rational rational_from_double(double x)
{
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value cannot be made exact");
    int exp = 0;
    double mant = std::frexp(x, &exp);
    // 53 bits of mantissa as an integer.
    auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r = Rational(Integer(m));
    if (exp >= 0) {
        r *= Rational(Integer(1) << exp);
    } else {
        r /= Rational(Integer(1) << (-exp));
    }
    return r;
}

/// Nearest rational with the given denominator (ties away from zero).
inline Rational round_to_denominator(double x, std::int64_t denom)
{
    return Rational(Integer(static_cast<std::int64_t>(std::llround(x * static_cast<double>(denom)))), Integer(denom));
}

}  // namespace symcap

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ghost {

// expression templates off so mixed expressions work with std::min and friends
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline BigInt num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational make_rational(std::int64_t n, std::int64_t d = 1) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rational(BigInt(n), BigInt(d));
}

inline bool is_integer(const Rational& q) { return den(q) == 1; }

// floor for rationals of either sign
inline BigInt floor_of(const Rational& q) {
    BigInt n = num(q), d = den(q);
    BigInt f = n / d;
    if (n < 0 && f * d != n) f -= 1;
    return f;
}

// Always "num/den", including a denominator of 1.
inline std::string to_string(const Rational& q) {
    return num(q).str() + "/" + den(q).str();
}

// Accepts "a/b", "a", optionally signed.
inline Rational parse_rational(std::string_view text) {
    auto bad = [&] { return std::invalid_argument("not a rational: '" + std::string(text) + "'"); };
    auto parse_int = [&](std::string_view s) {
        if (s.empty()) throw bad();
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) throw bad();
        for (std::size_t j = i; j < s.size(); ++j)
            if (s[j] < '0' || s[j] > '9') throw bad();
        return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    BigInt n = parse_int(text.substr(0, slash));
    std::string_view ds = text.substr(slash + 1);
    if (!ds.empty() && ds[0] == '-') throw bad();
    BigInt d = parse_int(ds);
    if (d == 0) throw bad();
    return Rational(n, d);
}

inline Rational pow_int(const Rational& base, std::size_t e) {
    Rational r(1), b = base;
    for (; e; e >>= 1, b *= b)
        if (e & 1) r *= b;
    return r;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace ghost

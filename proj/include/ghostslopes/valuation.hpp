#pragma once

#include "rational.hpp"

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ghost {

// Extended rational: a rational number or +infinity.
class Valuation {
public:
    Valuation() = default;
    Valuation(const Rational& v) : value_(v) {}
    Valuation(std::int64_t v) : value_(v) {}
    Valuation(int v) : value_(v) {}

    static Valuation infinity() {
        Valuation v;
        v.infinite_ = true;
        return v;
    }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }

    const Rational& value() const {
        if (infinite_) throw std::domain_error("value() of infinite valuation");
        return value_;
    }

    friend Valuation operator+(const Valuation& x, const Valuation& y) {
        if (x.infinite_ || y.infinite_) return infinity();
        return Valuation(x.value_ + y.value_);
    }
    friend Valuation operator*(std::int64_t c, const Valuation& x) {
        if (x.infinite_) {
            if (c < 0) throw std::domain_error("negative multiple of infinity");
            return c == 0 ? Valuation(0) : infinity();
        }
        return Valuation(x.value_ * c);
    }
    Valuation& operator+=(const Valuation& y) { return *this = *this + y; }

    friend bool operator==(const Valuation& x, const Valuation& y) {
        if (x.infinite_ || y.infinite_) return x.infinite_ == y.infinite_;
        return x.value_ == y.value_;
    }
    friend std::strong_ordering operator<=>(const Valuation& x, const Valuation& y) {
        if (x.infinite_ || y.infinite_) return x.infinite_ <=> y.infinite_;
        if (x.value_ < y.value_) return std::strong_ordering::less;
        if (y.value_ < x.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    std::string str() const { return infinite_ ? "inf" : to_string(value_); }

private:
    Rational value_{0};
    bool infinite_ = false;
};

inline Valuation min(const Valuation& x, const Valuation& y) { return y < x ? y : x; }
inline Valuation max(const Valuation& x, const Valuation& y) { return x < y ? y : x; }

inline std::ostream& operator<<(std::ostream& os, const Valuation& v) { return os << v.str(); }

inline bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

// exponent of p in n; callers guarantee n != 0
inline int vp_small(std::int64_t n, std::int64_t p) {
    int e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

inline Valuation vp_int(std::int64_t n, std::int64_t p) {
    if (!is_prime(p)) throw std::invalid_argument("vp_int: p must be prime");
    if (n == 0) return Valuation::infinity();
    return Valuation(vp_small(n, p));
}

// v_p(w_k - w_k2) = 1 + v_p(k - k2)
inline Valuation weight_distance(std::int64_t k, std::int64_t k2, std::int64_t p) {
    if (k == k2) return Valuation::infinity();
    return Valuation(1 + vp_small(k - k2, p));
}

}  // namespace ghost

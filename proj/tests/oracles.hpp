#pragma once

// Test-side reference implementations, written straight from the definitions and kept
// independent of the library's fast paths.

#include <ghostslopes/rational.hpp>
#include <ghostslopes/valuation.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <vector>

namespace oracle {

using ghost::Rational;

struct Params {
    std::int64_t p, a, s;
};

struct Dims {
    std::int64_t iw, ur, nw;
};

inline std::int64_t md(std::int64_t x, std::int64_t m) { return ((x % m) + m) % m; }

inline std::int64_t k_eps(const Params& c) { return 2 + md(c.a + 2 * c.s, c.p - 1); }

inline Dims dims(const Params& c, std::int64_t kb) {
    const std::int64_t p = c.p;
    std::int64_t delta = (c.s + md(c.a + c.s, p - 1)) / (p - 1);
    std::int64_t t1, t2;
    if (c.a + c.s < p - 1) {
        t1 = c.s + delta;
        t2 = c.a + c.s + delta + 2;
    } else {
        t1 = md(c.a + c.s, p - 1) + delta + 1;
        t2 = c.s + delta + 1;
    }
    std::int64_t q = 0;
    while ((q + 1) * (p + 1) <= kb - t1) ++q;
    while (q * (p + 1) > kb - t1) --q;
    std::int64_t ur = 2 * q + 1 + ((kb - (p + 1) * q >= t2) ? 1 : 0);
    std::int64_t iw = 2 * kb + 2 - 2 * delta;
    return {iw, ur, iw - 2 * ur};
}

inline std::int64_t mult(const Params& c, std::int64_t n, std::int64_t kb) {
    auto d = dims(c, kb);
    if (n > d.ur && n < d.iw - d.ur) return std::min(n - d.ur, d.iw - d.ur - n);
    return 0;
}

inline std::int64_t vp(std::int64_t x, std::int64_t p) {
    std::int64_t v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

// v_p(g_n(w)) with v_p(w - w_{k0}) = radius (nullopt = infinity, returned as nullopt when g_n(w_{k0}) = 0)
inline std::optional<Rational> ghost_val(const Params& c, std::int64_t n, std::int64_t kb0, std::optional<Rational> radius) {
    Rational total = 0;
    for (std::int64_t kb = 0; kb <= (c.p + 1) * (n + 4); ++kb) {
        auto m = mult(c, n, kb);
        if (m == 0) continue;
        if (kb == kb0) {
            if (!radius) return std::nullopt;
            total += *radius * m;
            continue;
        }
        Rational d = 1 + vp(kb - kb0, c.p);
        total += (radius && *radius < d ? *radius : d) * m;
    }
    return total;
}

// Lower hull by brute force: the hull value at x is the least chord value over pairs bracketing x.
inline std::vector<Rational> hull_values(const std::vector<std::pair<std::int64_t, Rational>>& pts) {
    std::int64_t lo = pts.front().first, hi = pts.back().first;
    std::vector<Rational> out;
    for (std::int64_t x = lo; x <= hi; ++x) {
        std::optional<Rational> best;
        for (const auto& [xi, yi] : pts)
            for (const auto& [xj, yj] : pts) {
                if (xi > x || xj < x) continue;
                Rational v = xi == xj ? yi : yi + (yj - yi) * (x - xi) / (xj - xi);
                if (!best || v < *best) best = v;
            }
        out.push_back(*best);
    }
    return out;
}

// abscissae where the hull slope strictly increases, plus both ends
inline std::vector<std::int64_t> hull_vertices(const std::vector<std::pair<std::int64_t, Rational>>& pts) {
    auto v = hull_values(pts);
    std::int64_t lo = pts.front().first;
    std::vector<std::int64_t> out{lo};
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        if (v[i] - v[i - 1] < v[i + 1] - v[i]) out.push_back(lo + static_cast<std::int64_t>(i));
    if (v.size() > 1) out.push_back(pts.back().first);
    return out;
}

// first T slopes of the ghost Newton polygon at a finite radius
inline std::vector<Rational> np_slopes(const Params& c, std::int64_t kb0, const Rational& radius, std::int64_t T) {
    std::vector<std::pair<std::int64_t, Rational>> pts{{0, Rational(0)}};
    for (std::int64_t n = 1; n <= T; ++n) pts.emplace_back(n, *ghost_val(c, n, kb0, radius));
    auto v = hull_values(pts);
    std::vector<Rational> out;
    for (std::size_t i = 1; i < v.size(); ++i) out.push_back(v[i] - v[i - 1]);
    return out;
}

inline void print_seed(std::uint64_t seed) { std::printf("seed %llu\n", static_cast<unsigned long long>(seed)); }

}  // namespace oracle

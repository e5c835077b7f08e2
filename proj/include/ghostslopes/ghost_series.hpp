#pragma once

#include "context.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

namespace ghost {

// Symbolic weight w_* with v_p(w_* - w_anchor) = radius, generic on its circle.
struct WeightPoint {
    WeightIndex anchor;
    Valuation radius;
    bool generic = true;

    // v_p(w_* - w_k2)
    Valuation distance_to(const WeightIndex& k2, std::int64_t p) const {
        if (k2 == anchor) return radius;
        return min(radius, weight_distance(anchor.k(), k2.k(), p));
    }
};

struct GhostPolynomial {
    std::int64_t n = 0;
    std::map<std::int64_t, std::int64_t> zeros;  // k -> m_n(k)
};

struct GhostZeroSet {
    WeightIndex k;
    std::vector<std::int64_t> zeros;  // ascending weights
    Valuation m_of_k;
};

// closed interval of k_bullet values, empty when lo > hi
struct BulletRange {
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    bool empty() const { return lo > hi; }
};

inline std::int64_t ghost_multiplicity_bullet(const GhostContext& ctx, std::int64_t n, std::int64_t kb) {
    auto d = ctx.dims_of_bullet(kb);
    if (n <= d.d_ur || n >= d.d_iw - d.d_ur) return 0;
    return std::min(n - d.d_ur, d.d_iw - d.d_ur - n);
}

inline std::int64_t ghost_multiplicity(const GhostContext& ctx, std::int64_t n, const WeightIndex& k) {
    auto d = ctx.dimensions(k);
    if (n <= d.d_ur || n >= d.d_iw - d.d_ur) return 0;
    return std::min(n - d.d_ur, d.d_iw - d.d_ur - n);
}

namespace detail {
// smallest kb in [0, ceiling] with pred(kb) true; pred monotone false -> true
template <class Pred>
std::int64_t first_true(std::int64_t ceiling, Pred pred, const char* what) {
    if (!pred(ceiling)) throw DomainError(std::string("k ceiling reached while scanning for ") + what);
    std::int64_t lo = 0, hi = ceiling;
    while (lo < hi) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (pred(mid)) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}
}  // namespace detail

// k_bullet values with m_n > 0; d_ur and d_iw - d_ur are monotone so this is an interval
inline BulletRange ghost_support(const GhostContext& ctx, std::int64_t n) {
    if (n < 1) return {};
    auto ceil = ctx.kb_ceiling();
    std::int64_t lo = detail::first_true(
        ceil, [&](std::int64_t kb) { return ctx.d_iw_of_bullet(kb) - ctx.d_ur_of_bullet(kb) > n; }, "ghost support");
    std::int64_t hi =
        detail::first_true(ceil, [&](std::int64_t kb) { return ctx.d_ur_of_bullet(kb) >= n; }, "ghost support") - 1;
    return {lo, hi};
}

inline GhostPolynomial ghost_polynomial(const GhostContext& ctx, std::int64_t n) {
    GhostPolynomial g;
    g.n = n;
    auto r = ghost_support(ctx, n);
    for (auto kb = r.lo; kb <= r.hi; ++kb) {
        auto m = ghost_multiplicity_bullet(ctx, n, kb);
        if (m > 0) g.zeros.emplace(ctx.weight_from_bullet(kb).k(), m);
    }
    return g;
}

namespace detail {
// Largest kb' with g_1..g_D vanishing somewhere at w_{k'}, where D = d_iw(k).  GZ(k) is every
// kb' up to this bound with d_new(kb') > 0.
inline std::int64_t zero_set_top(const GhostContext& ctx, std::int64_t d_iw) {
    return detail::first_true(ctx.kb_ceiling(), [&](std::int64_t kb) { return ctx.d_ur_of_bullet(kb) >= d_iw; },
                              "ghost zeros") -
           1;
}
}  // namespace detail

// M(k) without materializing GZ(k): the largest e with a usable kb' = kb + j*p^e, j != 0
inline Valuation max_zero_distance(const GhostContext& ctx, const WeightIndex& k) {
    auto d = ctx.dimensions(k);
    if (d.d_iw < 1) return Valuation(0);
    const std::int64_t kb = k.k_bullet();
    const std::int64_t top = detail::zero_set_top(ctx, d.d_iw);
    const std::int64_t p = ctx.p();
    auto usable = [&](std::int64_t x) { return x >= 0 && x <= top && x != kb && ctx.dims_of_bullet(x).d_new > 0; };

    std::int64_t span = std::max<std::int64_t>(top, kb) + 1;
    std::int64_t pe = 1;
    int e = 0;
    while (pe <= span / p) {
        pe *= p;
        ++e;
    }
    for (; e >= 0; --e, pe /= p) {
        // candidates kb + j*pe inside [0, top], nearest first on each side
        std::int64_t jmin = -(kb / pe), jmax = floor_div(top - kb, pe);
        for (std::int64_t j = jmin; j <= jmax; ++j) {
            if (j == 0) continue;
            std::int64_t x = kb + j * pe;
            if (usable(x)) return Valuation(1 + vp_small(x - kb, p));
            // only a handful of small kb' have d_new = 0, so this loop is short
            if (x > 4 * p + 8 && j > 0) break;
        }
    }
    return Valuation(0);
}

inline GhostZeroSet ghost_zero_set(const GhostContext& ctx, const WeightIndex& k) {
    GhostZeroSet z{k, {}, Valuation(0)};
    auto d = ctx.dimensions(k);
    if (d.d_iw < 1) return z;
    const std::int64_t top = detail::zero_set_top(ctx, d.d_iw);
    for (std::int64_t x = 0; x <= top; ++x)
        if (ctx.dims_of_bullet(x).d_new > 0) z.zeros.push_back(ctx.weight_from_bullet(x).k());
    z.m_of_k = max_zero_distance(ctx, k);
    std::int64_t kb = std::max<std::int64_t>(k.k_bullet(), 1);
    std::int64_t lg = 0;
    for (std::int64_t q = kb; q >= ctx.p(); q /= ctx.p()) ++lg;
    if (z.m_of_k > Valuation(lg + 3)) throw DomainError("M(k) exceeds floor(log_p k_bullet) + 3");
    return z;
}

// Direct sum over the zeros of g_n.
inline Valuation evaluate_ghost_valuation(const GhostContext& ctx, std::int64_t n, const WeightPoint& w) {
    Valuation total(0);
    auto r = ghost_support(ctx, n);
    for (auto kb = r.lo; kb <= r.hi; ++kb) {
        auto m = ghost_multiplicity_bullet(ctx, n, kb);
        if (m == 0) continue;
        total += m * w.distance_to(ctx.weight_from_bullet(kb), ctx.p());
    }
    return total;
}

// v_p(g_{n,k^}(w_k)): the factor (w - w_k)^{m_n(k)} removed.
inline Rational evaluate_ghost_valuation_hatted(const GhostContext& ctx, std::int64_t n, const WeightIndex& k) {
    std::int64_t total = 0;
    auto r = ghost_support(ctx, n);
    for (auto kb = r.lo; kb <= r.hi; ++kb) {
        if (kb == k.k_bullet()) continue;
        total += ghost_multiplicity_bullet(ctx, n, kb) * (1 + vp_small(kb - k.k_bullet(), ctx.p()));
    }
    return Rational(total);
}

// v_p(g_n(w_*)) = A[n] + B[n]*r for every radius r in [level, level+1].  Factors at distance
// c <= level contribute c, the rest contribute r.  level = nullopt means r = infinity: A collects
// every finite distance and B[n] = m_n(anchor).
struct LinearProfile {
    std::optional<std::int64_t> level;
    std::vector<std::int64_t> A, B;
};

inline LinearProfile linear_profile(const GhostContext& ctx, const WeightIndex& anchor,
                                    std::optional<std::int64_t> level, std::int64_t T) {
    LinearProfile prof{level, std::vector<std::int64_t>(T + 1, 0), std::vector<std::int64_t>(T + 1, 0)};
    if (T < 1) return prof;
    const std::int64_t p = ctx.p(), kb0 = anchor.k_bullet(), delta = ctx.delta_eps();
    const std::int64_t kmax = std::max(ghost_support(ctx, T).hi, kb0);
    const auto size = static_cast<std::size_t>(kmax + 1);

    std::vector<std::int64_t> u(size), e(size), PA(size + 1, 0), PB(size + 1, 0);
    for (std::int64_t x = 0; x <= kmax; ++x) {
        auto d = ctx.dims_of_bullet(x);
        u[x] = d.d_ur;
        e[x] = d.d_iw - d.d_ur;
        std::int64_t wa = 0, wb = 0;
        if (x == kb0) {
            wb = 1;
        } else {
            std::int64_t c = 1 + vp_small(x - kb0, p);
            if (!level || c <= *level) wa = c;
            else wb = 1;
        }
        PA[x + 1] = PA[x] + wa;
        PB[x + 1] = PB[x] + wb;
    }
    // sum over kb' in [i, j]
    auto range = [](const std::vector<std::int64_t>& P, std::int64_t i, std::int64_t j) {
        return i > j ? 0 : P[j + 1] - P[i];
    };

    // m_{n+1} - m_n is +1 on (n-1+delta, U] and -1 on [W, n-1+delta], where U is the last kb'
    // with d_ur <= n and W the first with d_iw - d_ur > n.
    std::int64_t U = -1, W = 0;
    for (std::int64_t n = 0; n < T; ++n) {
        while (U + 1 <= kmax && u[U + 1] <= n) ++U;
        while (W <= kmax && e[W] <= n) ++W;
        std::int64_t c = n - 1 + delta;
        std::int64_t up_lo = std::max<std::int64_t>(c + 1, 0), down_hi = std::min(c, kmax);
        prof.A[n + 1] = prof.A[n] + range(PA, up_lo, U) - range(PA, W, down_hi);
        prof.B[n + 1] = prof.B[n] + range(PB, up_lo, U) - range(PB, W, down_hi);
    }
    return prof;
}

// level used for a finite radius: floor(r), and 0 below 1 (every distance is >= 1)
inline std::int64_t split_level(const Rational& r) {
    auto f = floor_of(r);
    return f < 1 ? 0 : static_cast<std::int64_t>(f);
}

// v_p(g_n(w)) for n = 0..T.
inline std::vector<Valuation> ghost_valuations(const GhostContext& ctx, const WeightPoint& w, std::int64_t T) {
    std::vector<Valuation> out(T + 1);
    if (w.radius.is_infinite()) {
        auto prof = linear_profile(ctx, w.anchor, std::nullopt, T);
        for (std::int64_t n = 0; n <= T; ++n)
            out[n] = prof.B[n] > 0 ? Valuation::infinity() : Valuation(prof.A[n]);
        return out;
    }
    const Rational& r = w.radius.value();
    if (r <= 0) throw DomainError("radius must be positive");
    auto prof = linear_profile(ctx, w.anchor, split_level(r), T);
    for (std::int64_t n = 0; n <= T; ++n) out[n] = Valuation(Rational(prof.A[n]) + r * prof.B[n]);
    return out;
}

// v_p(g_{n,k^}(w_k)) for n = 0..T.
inline std::vector<std::int64_t> hatted_valuations(const GhostContext& ctx, const WeightIndex& k, std::int64_t T) {
    return linear_profile(ctx, k, std::nullopt, T).A;
}

}  // namespace ghost

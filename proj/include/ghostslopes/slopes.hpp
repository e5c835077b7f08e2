#pragma once

#include "ghost_series.hpp"
#include "polygon.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghost {

struct DerivativePolygon {
    WeightIndex k;
    DimensionTriple dims;
    Rational center;                 // (k-2)/2
    std::vector<Rational> raw;       // Delta'_{k,l}, l = 0..d_new/2
    RationalPolygon hull;            // over l = 0..d_new/2
    std::vector<Rational> slopes;    // s_1 < ... < s_N
    std::vector<std::int64_t> mults; // r_1..r_N
    std::vector<std::int64_t> breaks;// n_0 = 0 < n_1 < ... < n_N = d_new/2
    Valuation m_of_k;                // M(k)
    std::size_t m_index = 1;         // smallest i with s_i > M(k), N+1 if none
    // Delta_{l+1} - Delta_l as num/den, l = 0..d_new/2 - 1
    std::vector<std::pair<std::int64_t, std::int64_t>> steps;

    std::size_t N() const { return slopes.size(); }
    std::int64_t half() const { return dims.d_new / 2; }
    // 1-based; s_0 = 0
    const Rational& s(std::size_t i) const {
        static const Rational zero(0);
        return i == 0 ? zero : slopes.at(i - 1);
    }
    std::int64_t n(std::size_t i) const { return breaks.at(i); }
    std::int64_t r(std::size_t i) const { return mults.at(i - 1); }
    // Delta_{k,l}, symmetric in l
    Rational delta(std::int64_t l) const { return hull.value_at(l < 0 ? -l : l); }
};

inline Rational center_slope(const WeightIndex& k) { return Rational(k.k() - 2, 2); }

inline DerivativePolygon compute_derivative_polygon(const GhostContext& ctx, const WeightIndex& k) {
    DerivativePolygon dp{k, ctx.dimensions(k), center_slope(k), {}, {}, {}, {}, {0}, Valuation(0), 1};
    dp.m_of_k = max_zero_distance(ctx, k);
    const std::int64_t h = dp.half();
    if (h == 0) return dp;
    const std::int64_t mid = dp.dims.d_iw / 2, km2 = k.k() - 2;
    auto V = hatted_valuations(ctx, k, dp.dims.d_iw);

    // 2*Delta'_{k,l} for l = -h..h; the two sides must agree
    std::vector<std::pair<std::int64_t, std::int64_t>> pts;
    for (std::int64_t l = -h; l <= h; ++l) pts.emplace_back(l + h, 2 * V[mid + l] - km2 * l);
    for (std::int64_t l = 1; l <= h; ++l)
        if (V[mid + l] - V[mid - l] != km2 * l)
            throw DomainError("ghost duality fails at k = " + std::to_string(k.k()) + ", l = " + std::to_string(l));
    auto idx = detail::hull_indices(pts);

    // right half of the symmetric hull, starting at the hull value over l = 0
    auto& hull = dp.hull;
    for (std::int64_t l = 0; l <= h; ++l) {
        dp.raw.push_back(Rational(pts[l + h].second, 2));
        hull.points.push_back({l, dp.raw.back()});
    }
    auto first_right = std::lower_bound(idx.begin(), idx.end(), static_cast<std::size_t>(h));
    if (*first_right == static_cast<std::size_t>(h)) {
        hull.vertices.push_back({0, dp.raw[0]});
    } else {
        auto b = *first_right, a = *(first_right - 1);
        Rational y = Rational(pts[a].second, 2) +
                     Rational(pts[b].second - pts[a].second, 2) * static_cast<std::int64_t>(h - a) /
                         static_cast<std::int64_t>(b - a);
        hull.vertices.push_back({0, y});
    }
    for (auto it = first_right; it != idx.end(); ++it)
        if (*it != static_cast<std::size_t>(h))
            hull.vertices.push_back({static_cast<std::int64_t>(*it) - h, Rational(pts[*it].second, 2)});
    for (std::size_t i = 1; i < hull.vertices.size(); ++i) {
        std::int64_t dx = hull.vertices[i].x - hull.vertices[i - 1].x;
        hull.slopes.push_back({(hull.vertices[i].y - hull.vertices[i - 1].y) / dx, dx});
    }
    std::size_t v = 0;
    for (std::size_t q = static_cast<std::size_t>(h) + 1; q < pts.size(); ++q) {
        while (v < idx.size() && idx[v] < q) ++v;
        if (v == idx.size() || idx[v] == q) continue;
        if (detail::cross_int(pts, idx[v - 1], q, idx[v]) == 0) hull.touch_points.push_back(hull.points[q - h]);
    }

    for (const auto& run : dp.hull.slopes) {
        auto sn = static_cast<std::int64_t>(num(run.slope)), sd = static_cast<std::int64_t>(den(run.slope));
        for (std::int64_t i = 0; i < run.mult; ++i) dp.steps.emplace_back(sn, sd);
        dp.slopes.push_back(run.slope);
        dp.mults.push_back(run.mult);
        dp.breaks.push_back(dp.breaks.back() + run.mult);
    }
    dp.m_index = dp.N() + 1;
    for (std::size_t i = 1; i <= dp.N(); ++i)
        if (Valuation(dp.s(i)) > dp.m_of_k) {
            dp.m_index = i;
            break;
        }
    return dp;
}

// Parity rule for derivative slopes, read relative to k/2: multiplicity one gives s - k/2 in Z,
// anything else has even multiplicity and s - k/2 in a/2 + Z.  For even k this is s in Z, resp. a/2 + Z.
inline bool derivative_slope_parity_ok(const DerivativePolygon& dp, std::size_t i, std::int64_t a) {
    Rational x = dp.s(i) - Rational(dp.k.k(), 2);
    if (dp.r(i) == 1) return is_integer(x);
    return dp.r(i) % 2 == 0 && is_integer(x - Rational(a, 2));
}

// Cached per context; safe to call from several threads.
inline std::shared_ptr<const DerivativePolygon> derivative_polygon(const GhostContext& ctx, const WeightIndex& k) {
    auto& cache = ctx.cache();
    {
        std::shared_lock lock(cache.poly_mutex);
        auto it = cache.polygons.find(k.k_bullet());
        if (it != cache.polygons.end()) return it->second;
    }
    auto dp = std::make_shared<const DerivativePolygon>(compute_derivative_polygon(ctx, k));
    std::unique_lock lock(cache.poly_mutex);
    return cache.polygons.emplace(k.k_bullet(), dp).first->second;
}

inline RationalPolygon newton_polygon_at(const GhostContext& ctx, std::int64_t range, const WeightPoint& w) {
    if (range < 0) throw std::invalid_argument("negative n-range");
    auto vals = ghost_valuations(ctx, w, range);
    std::vector<std::pair<std::int64_t, Valuation>> pts;
    pts.emplace_back(0, Valuation(0));
    for (std::int64_t n = 1; n <= range; ++n) pts.emplace_back(n, vals[n]);
    // integer fast path
    BigInt scale = w.radius.is_finite() ? den(w.radius.value()) : BigInt(1);
    if (scale < (BigInt(1) << 20)) {
        auto s = static_cast<std::int64_t>(scale);
        std::vector<std::pair<std::int64_t, std::int64_t>> ipts;
        bool fits = true;
        for (const auto& [x, y] : pts) {
            if (y.is_infinite()) continue;
            BigInt Y = num(y.value()) * (s / den(y.value()));
            if (abs(Y) > (BigInt(1) << 60)) {
                fits = false;
                break;
            }
            ipts.emplace_back(x, static_cast<std::int64_t>(Y));
        }
        if (fits) return lower_hull_scaled(ipts, s);
    }
    return lower_hull(pts);
}

inline bool is_near_steinberg(const GhostContext& ctx, std::int64_t n, const WeightPoint& w, const WeightIndex& k2) {
    auto d = ctx.dimensions(k2);
    if (n <= d.d_ur || n >= d.d_iw - d.d_ur) return false;
    auto dp = derivative_polygon(ctx, k2);
    std::int64_t l = n - d.d_iw / 2;
    if (l < 0) l = -l;
    auto [sn, sd] = dp->steps[l];
    Valuation dist = w.distance_to(k2, ctx.p());
    if (dist.is_infinite()) return true;
    const Rational& r = dist.value();
    // r >= sn/sd, in 128 bits when r is small
    if (num(r) < (BigInt(1) << 40) && den(r) < (BigInt(1) << 40)) {
        auto rn = static_cast<std::int64_t>(num(r)), rd = static_cast<std::int64_t>(den(r));
        return static_cast<__int128>(rn) * sd >= static_cast<__int128>(sn) * rd;
    }
    return r >= Rational(sn, sd);
}

// n in [0, n_range] not near-Steinberg for any k2; only ghost zeros of g_n can qualify.
// Same test as is_near_steinberg, with the per-k2 data hoisted out of the n loop.
inline std::vector<std::int64_t> breakpoints_by_criterion(const GhostContext& ctx, const WeightPoint& w,
                                                          std::int64_t n_range) {
    using I = __int128;
    const std::int64_t kb0 = w.anchor.k_bullet(), p = ctx.p();
    const bool inf = w.radius.is_infinite();
    const bool small = inf || (num(w.radius.value()) < (BigInt(1) << 40) && den(w.radius.value()) < (BigInt(1) << 40));
    const std::int64_t rn = inf || !small ? 0 : static_cast<std::int64_t>(num(w.radius.value()));
    const std::int64_t rd = inf || !small ? 1 : static_cast<std::int64_t>(den(w.radius.value()));

    struct Zero {
        std::shared_ptr<const DerivativePolygon> dp;
        std::int64_t dist;  // 1 + v_p(kb - kb0), or -1 at the anchor
    };
    std::vector<Zero> zeros;
    auto zero = [&](std::int64_t kb) -> const Zero& {
        while (static_cast<std::int64_t>(zeros.size()) <= kb) {
            std::int64_t x = zeros.size();
            zeros.push_back({derivative_polygon(ctx, ctx.weight_from_bullet(x)), x == kb0 ? -1 : 1 + vp_small(x - kb0, p)});
        }
        return zeros[kb];
    };

    std::vector<std::int64_t> out{0};
    for (std::int64_t n = 1; n <= n_range; ++n) {
        auto sup = ghost_support(ctx, n);
        bool blocked = false;
        for (auto kb = sup.lo; kb <= sup.hi && !blocked; ++kb) {
            if (!small) {
                blocked = is_near_steinberg(ctx, n, w, ctx.weight_from_bullet(kb));
                continue;
            }
            const Zero& z = zero(kb);
            const auto& d = z.dp->dims;
            if (n <= d.d_ur || n >= d.d_iw - d.d_ur) continue;
            std::int64_t l = n - d.d_iw / 2;
            auto [sn, sd] = z.dp->steps[l < 0 ? -l : l];
            if (z.dist < 0) {
                blocked = inf || I(rn) * sd >= I(sn) * rd;
            } else {
                bool radius_smaller = !inf && I(rn) < I(z.dist) * rd;
                blocked = radius_smaller ? I(rn) * sd >= I(sn) * rd : I(z.dist) * sd >= I(sn);
            }
        }
        if (!blocked) out.push_back(n);
    }
    return out;
}

// The d_new newslopes for radius > M(k), read off the derivative slopes.
inline std::vector<Rational> newslopes_closed_form(const DerivativePolygon& dp, const Valuation& radius) {
    std::vector<Rational> left, right;
    for (std::size_t j = dp.N(); j >= 1; --j) {
        Rational v = dp.center;
        if (radius.is_finite() && radius.value() < dp.s(j)) v += radius.value() - dp.s(j);
        for (std::int64_t i = 0; i < dp.r(j); ++i) left.push_back(v);
    }
    for (std::size_t j = 1; j <= dp.N(); ++j) {
        Rational v = dp.center;
        if (radius.is_finite() && radius.value() < dp.s(j)) v += dp.s(j) - radius.value();
        for (std::int64_t i = 0; i < dp.r(j); ++i) right.push_back(v);
    }
    left.insert(left.end(), right.begin(), right.end());
    return left;
}

inline std::int64_t default_hull_range(const DimensionTriple& d) { return 2 * d.d_iw + 4; }

inline std::vector<Rational> newslopes_by_hull(const GhostContext& ctx, const WeightPoint& w,
                                               std::int64_t range = 0) {
    auto d = ctx.dimensions(w.anchor);
    if (range <= 0) range = default_hull_range(d);
    auto all = newton_polygon_at(ctx, range, w).slope_list();
    if (static_cast<std::int64_t>(all.size()) < d.d_iw - d.d_ur) throw DomainError("hull range too short");
    return {all.begin() + d.d_ur, all.begin() + (d.d_iw - d.d_ur)};
}

inline std::vector<Rational> k_newslopes(const GhostContext& ctx, const WeightIndex& k, const WeightPoint& w) {
    if (!(w.anchor == k)) throw std::invalid_argument("weight point must be anchored at k");
    auto dp = derivative_polygon(ctx, k);
    if (w.radius > dp->m_of_k) return newslopes_closed_form(*dp, w.radius);
    return newslopes_by_hull(ctx, w);
}

enum class Provenance { closed_form, sweep };

struct ThresholdVector {
    WeightIndex k;
    std::vector<Rational> local;
    std::vector<Provenance> provenance;
    std::vector<Rational> global;
    std::int64_t global_mult = 1;
};

// Central newslope indices (1-based, local) settled by the sweep.
inline std::pair<std::int64_t, std::int64_t> central_block(const DerivativePolygon& dp) {
    std::int64_t c = dp.n(dp.m_index - 1);
    return {dp.half() - c + 1, dp.half() + c};
}

// A newslope as an exact linear function of r on [r_lo, r_hi]: (a + b r) / dx.
struct NewslopePiece {
    Rational r_lo, r_hi;
    std::int64_t a = 0, b = 0, dx = 1;
    Rational at(const Rational& r) const { return (Rational(a) + r * b) / dx; }
};

struct SweepResult {
    Rational r_end;
    std::vector<Rational> critical;                      // every radius where central hull edges change
    std::vector<std::vector<NewslopePiece>> pieces;      // per central index, in order
    std::vector<Rational> thresholds;                    // per central index
    std::int64_t first_index = 1;                        // local index of pieces[0]
};

// Kinetic sweep over r in (0, r_end].  Inside a unit cell every ordinate is A + B r, so each hull
// edge over the central x-range stays an edge until some point crosses its supporting line, which
// happens at an exact rational radius.
inline SweepResult sweep_central(const GhostContext& ctx, const WeightIndex& k, std::int64_t range = 0) {
    using I = __int128;
    auto dp = derivative_polygon(ctx, k);
    const auto d = dp->dims;
    SweepResult res;
    auto [c_lo, c_hi] = central_block(*dp);
    res.first_index = c_lo;
    if (c_lo > c_hi) return res;
    res.r_end = std::max(dp->m_of_k.value(), dp->s(dp->m_index - 1));
    const std::int64_t T = range > 0 ? range : default_hull_range(d);
    const std::int64_t X_lo = d.d_ur + c_lo - 1, X_hi = d.d_ur + c_hi;
    const std::size_t count = static_cast<std::size_t>(c_hi - c_lo + 1);
    res.pieces.resize(count);

    Rational t(0);
    std::optional<std::int64_t> level;
    LinearProfile prof;
    std::vector<std::int64_t> hull;
    int guard = 0;
    while (t < res.r_end) {
        if (++guard > 1'000'000) throw DomainError("sweep did not terminate");
        std::int64_t L = static_cast<std::int64_t>(floor_of(t));
        if (!level || *level != L) {
            prof = linear_profile(ctx, k, L, T);
            level = L;
        }
        Rational cell_end = std::min(Rational(L + 1), res.r_end);
        const auto& A = prof.A;
        const auto& B = prof.B;
        const std::int64_t ta = static_cast<std::int64_t>(num(t)), tb = static_cast<std::int64_t>(den(t));

        // hull at t+: compare values at t, then derivatives
        hull.clear();
        auto above_or_on = [&](std::int64_t o, std::int64_t b, std::int64_t c) {
            I y0 = I(tb) * (A[b] - A[o]) + I(ta) * (B[b] - B[o]);
            I y1 = I(tb) * (A[c] - A[o]) + I(ta) * (B[c] - B[o]);
            I c0 = y0 * (c - o) - y1 * (b - o);
            if (c0 != 0) return c0 > 0;
            I c1 = I(B[b] - B[o]) * (c - o) - I(B[c] - B[o]) * (b - o);
            return c1 >= 0;
        };
        for (std::int64_t q = 0; q <= T; ++q) {
            while (hull.size() >= 2 && above_or_on(hull[hull.size() - 2], hull.back(), q)) hull.pop_back();
            hull.push_back(q);
        }

        Rational next = cell_end;
        auto nn = static_cast<std::int64_t>(num(next)), nd = static_cast<std::int64_t>(den(next));
        std::vector<std::pair<std::int64_t, std::int64_t>> edges;
        for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
            std::int64_t i = hull[e], l = hull[e + 1];
            if (l <= X_lo || i >= X_hi) continue;
            edges.emplace_back(i, l);
            for (std::int64_t j = 0; j <= T; ++j) {
                if (j == i || j == l) continue;
                I alpha = I(A[j] - A[i]) * (l - i) - I(A[l] - A[i]) * (j - i);
                I beta = I(B[j] - B[i]) * (l - i) - I(B[l] - B[i]) * (j - i);
                if (beta >= 0) continue;
                // crossing at r = alpha / -beta; keep it if t < r < next
                I nb = -beta;
                if (alpha * tb <= nb * ta) continue;
                if (alpha * nd >= nb * nn) continue;
                auto a64 = static_cast<std::int64_t>(alpha), b64 = static_cast<std::int64_t>(nb);
                if (I(a64) != alpha || I(b64) != nb) throw DomainError("sweep event exceeds 64 bits");
                next = Rational(a64, b64);
                nn = static_cast<std::int64_t>(num(next));
                nd = static_cast<std::int64_t>(den(next));
            }
        }
        res.critical.push_back(t);
        for (std::size_t idx = 0; idx < count; ++idx) {
            std::int64_t x = X_lo + 1 + static_cast<std::int64_t>(idx);
            for (auto [i, l] : edges)
                if (i < x && x <= l) {
                    res.pieces[idx].push_back({t, next, A[l] - A[i], B[l] - B[i], l - i});
                    break;
                }
        }
        t = next;
    }
    res.critical.push_back(res.r_end);

    const Rational& c = dp->center;
    for (const auto& ps : res.pieces) {
        Rational cs = res.r_end;
        for (auto it = ps.rbegin(); it != ps.rend(); ++it) {
            bool flat = it->b == 0 && Rational(it->a, it->dx) == c;
            if (!flat) break;
            cs = it->r_lo;
        }
        if (ps.empty() || ps.back().at(res.r_end) != c) throw DomainError("sweep: newslope not settled at r_end");
        res.thresholds.push_back(cs);
    }
    return res;
}

inline Rational sweep_threshold(const GhostContext& ctx, const WeightIndex& k, std::int64_t n) {
    auto res = sweep_central(ctx, k);
    std::int64_t idx = n - res.first_index;
    if (idx < 0 || idx >= static_cast<std::int64_t>(res.thresholds.size()))
        throw std::invalid_argument("index outside the central block");
    return res.thresholds[idx];
}

inline std::vector<Rational> global_stretch(const std::vector<Rational>& local, std::int64_t m) {
    if (m < 1) throw std::invalid_argument("global multiplicity must be >= 1");
    std::vector<Rational> out;
    for (const auto& v : local)
        for (std::int64_t i = 0; i < m; ++i) out.push_back(v);
    return out;
}

inline std::vector<SlopeRun> global_stretch(const std::vector<SlopeRun>& local, std::int64_t m) {
    if (m < 1) throw std::invalid_argument("global multiplicity must be >= 1");
    auto out = local;
    for (auto& run : out) run.mult *= m;
    return out;
}

inline ThresholdVector k_thresholds(const GhostContext& ctx, const WeightIndex& k) {
    auto dp = derivative_polygon(ctx, k);
    ThresholdVector tv{k, {}, {}, {}, ctx.global_mult()};
    const std::int64_t h = dp->half();
    tv.local.assign(2 * h, Rational(0));
    tv.provenance.assign(2 * h, Provenance::closed_form);
    for (std::size_t j = dp->m_index; j <= dp->N(); ++j) {
        for (std::int64_t n = h - dp->n(j) + 1; n <= h - dp->n(j - 1); ++n) tv.local[n - 1] = dp->s(j);
        for (std::int64_t n = h + dp->n(j - 1) + 1; n <= h + dp->n(j); ++n) tv.local[n - 1] = dp->s(j);
    }
    auto [c_lo, c_hi] = central_block(*dp);
    if (c_lo <= c_hi) {
        auto res = sweep_central(ctx, k);
        for (std::int64_t n = c_lo; n <= c_hi; ++n) {
            tv.local[n - 1] = res.thresholds[n - c_lo];
            tv.provenance[n - 1] = Provenance::sweep;
        }
    }
    tv.global = global_stretch(tv.local, tv.global_mult);
    return tv;
}

struct SlopeWindow {
    Rational radius;  // test radius r_i
    Rational upper;   // largest newslope on the disc
    Rational lower;   // smallest newslope on the disc
};

inline SlopeWindow slope_window(const GhostContext& ctx, const WeightIndex& k, std::size_t i) {
    auto dp = derivative_polygon(ctx, k);
    if (i < dp->m_index || i > dp->N()) throw std::invalid_argument("slope window index out of range");
    Rational base = std::max(dp->m_of_k.value(), dp->s(i - 1));
    Rational ri = base + std::min(Rational(1), dp->s(i) - base) / 2;
    const Rational& sN = dp->s(dp->N());
    return {ri, dp->center + sN - ri, dp->center - sN + ri};
}

// R with r_{M} < R < min(M(k)+1, s_M); without a known block, M(k) + 1/2.
inline Rational prediction_radius(const GhostContext& ctx, const WeightIndex& k) {
    auto dp = derivative_polygon(ctx, k);
    const Rational M = dp->m_of_k.value();
    if (dp->m_index > dp->N()) return M + Rational(1, 2);
    Rational lo = slope_window(ctx, k, dp->m_index).radius;
    return (lo + std::min(M + 1, dp->s(dp->m_index))) / 2;
}

}  // namespace ghost

#pragma once

#include "parallel.hpp"
#include "prediction.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghost {

enum class SampleKind { threshold, derivative, linv };

inline std::string kind_name(SampleKind k) {
    switch (k) {
        case SampleKind::threshold: return "threshold";
        case SampleKind::derivative: return "derivative";
        case SampleKind::linv: return "linv";
    }
    return "?";
}

inline SampleKind parse_kind(const std::string& s) {
    if (s == "threshold") return SampleKind::threshold;
    if (s == "derivative") return SampleKind::derivative;
    if (s == "linv") return SampleKind::linv;
    throw std::invalid_argument("unknown sample kind '" + s + "'");
}

struct DistributionSample {
    WeightIndex k;
    SampleKind kind = SampleKind::threshold;
    std::vector<Rational> values;       // ascending
    std::int64_t floor_entries = 0;     // LINV entries standing in for the exceptional block

    Rational moment(std::size_t n) const {
        if (values.empty()) throw std::invalid_argument("moment of an empty sample");
        Rational s;
        for (const auto& v : values) s += pow_int(v, n);
        return s / static_cast<std::int64_t>(values.size());
    }
    std::map<std::size_t, Rational> moments(std::size_t n_max) const {
        std::map<std::size_t, Rational> out;
        for (std::size_t n = 1; n <= n_max; ++n) out[n] = moment(n);
        return out;
    }
};

// 2(p+1) / ((p-1) k)
inline Rational normalization(const GhostContext& ctx, const WeightIndex& k) {
    return Rational(2 * (ctx.p() + 1), (ctx.p() - 1) * k.k());
}

inline DistributionSample sample(const GhostContext& ctx, const WeightIndex& k, SampleKind kind,
                                 bool include_exceptional = false) {
    DistributionSample s{k, kind};
    if (ctx.dimensions(k).d_new == 0) return s;
    const Rational c = normalization(ctx, k);
    const std::int64_t gm = ctx.global_mult();
    switch (kind) {
        case SampleKind::threshold: {
            for (const auto& v : k_thresholds(ctx, k).global) s.values.push_back(c * v);
            break;
        }
        case SampleKind::derivative: {
            // z'_i = c s_{ceil(i/2)} over the per-unit derivative slopes
            auto dp = derivative_polygon(ctx, k);
            for (std::size_t i = 1; i <= dp->N(); ++i)
                for (std::int64_t u = 0; u < 2 * dp->r(i) * gm; ++u) s.values.push_back(c * dp->s(i));
            break;
        }
        case SampleKind::linv: {
            auto sp = predict_slopes(ctx, k);
            for (const auto& run : sp.linv_known)
                for (std::int64_t u = 0; u < run.mult; ++u) s.values.push_back(-c * run.slope);
            if (include_exceptional) {
                s.floor_entries = sp.exceptional_count;
                for (std::int64_t u = 0; u < sp.exceptional_count; ++u) s.values.push_back(-c * sp.linv_floor);
            }
            break;
        }
    }
    std::sort(s.values.begin(), s.values.end());
    return s;
}

// sup_x |F(x) - x| against the uniform law on [0, 1]
inline Rational discrepancy(const DistributionSample& s) {
    if (s.values.empty()) throw std::invalid_argument("discrepancy of an empty sample");
    auto uniform = [](const Rational& x) { return x < 0 ? Rational(0) : (x > 1 ? Rational(1) : x); };
    const auto m = static_cast<std::int64_t>(s.values.size());
    Rational best(0);
    std::int64_t below = 0;
    for (std::size_t i = 0; i < s.values.size();) {
        std::size_t j = i;
        while (j < s.values.size() && s.values[j] == s.values[i]) ++j;
        Rational u = uniform(s.values[i]);
        Rational lo = abs(Rational(below, m) - u);
        below += static_cast<std::int64_t>(j - i);
        Rational hi = abs(Rational(below, m) - u);
        best = std::max({best, lo, hi});
        i = j;
    }
    return best;
}

struct MomentTrend {
    std::size_t n = 0;
    std::vector<Rational> moments;     // one per k, in the order given
    Rational target;                   // 1/(n+1)
    Rational error_last;               // |moment - target| at the largest k
    Rational error_first;
    bool monotone_tail = false;        // errors non-increasing over the last half
};

inline std::vector<MomentTrend> weyl_moments(const std::vector<DistributionSample>& samples, std::size_t n_max) {
    if (samples.size() < 3) throw std::invalid_argument("weyl_moments needs at least 3 samples");
    std::vector<MomentTrend> out;
    for (std::size_t n = 1; n <= n_max; ++n) {
        MomentTrend t;
        t.n = n;
        t.target = Rational(1, static_cast<std::int64_t>(n + 1));
        std::vector<Rational> err;
        for (const auto& s : samples) {
            t.moments.push_back(s.moment(n));
            err.push_back(abs(t.moments.back() - t.target));
        }
        t.error_first = err.front();
        t.error_last = err.back();
        t.monotone_tail = true;
        for (std::size_t i = err.size() / 2 + 1; i < err.size(); ++i)
            if (err[i] > err[i - 1]) t.monotone_tail = false;
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<DistributionSample> sample_range(const GhostContext& ctx, const std::vector<WeightIndex>& ks,
                                                    SampleKind kind, bool include_exceptional = false,
                                                    unsigned jobs = 0) {
    return parallel_map(ks, [&](const WeightIndex& k) { return sample(ctx, k, kind, include_exceptional); }, jobs);
}

// (4 floor(log_p k_bullet) + 10) / (p-1) + 2
inline Rational derivative_mismatch_bound(const GhostContext& ctx, const WeightIndex& k) {
    std::int64_t kb = std::max<std::int64_t>(k.k_bullet(), 1), lg = 0;
    for (std::int64_t q = kb; q >= ctx.p(); q /= ctx.p()) ++lg;
    return Rational(4 * lg + 10, ctx.p() - 1) + 2;
}

}  // namespace ghost

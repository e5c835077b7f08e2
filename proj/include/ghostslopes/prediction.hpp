#pragma once

#include "slopes.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace ghost {

enum class Relation { gt, ge, eq };

struct PredictionModel {
    WeightIndex k;
    std::int64_t d = 0;                 // global_mult * d_new
    std::size_t N = 0;
    std::size_t m_index = 1;
    Rational R;
    std::vector<Rational> r_list;       // r_1..r_N
    std::vector<std::int64_t> d_list;   // d_1..d_N
    std::vector<Rational> L_seq;        // L_1..L_d, non-decreasing
    std::vector<std::int64_t> K_vals;   // K_i = (k-2) i
    std::vector<std::vector<Relation>> pattern;  // rows i = 1..d, columns j = 1..d

    // d_M + ... + d_N
    std::int64_t known_half() const {
        std::int64_t t = 0;
        for (std::size_t l = m_index; l <= N; ++l) t += d_list[l - 1];
        return t;
    }
    std::int64_t exceptional_count() const { return d - 2 * known_half(); }
};

// Rows i = 1..d, columns j = 1..d.  known lists d_N, d_{N-1}, ..., d_M.
inline std::vector<std::vector<Relation>> relation_pattern(std::int64_t d, const std::vector<std::int64_t>& known) {
    std::int64_t top = 0;
    for (auto x : known) top += x;
    if (2 * top > d) throw std::invalid_argument("relation_pattern: known block exceeds d/2");
    std::vector<std::vector<Relation>> pat(d, std::vector<Relation>(d, Relation::ge));
    auto at = [&](std::int64_t i, std::int64_t j) -> Relation& { return pat[i - 1][j - 1]; };
    for (std::int64_t i = 1; i <= d; ++i)
        for (std::int64_t j = 1; j <= d; ++j)
            if (i == d || (i <= top && j > 2 * i) || (i >= d - top && i <= d - 1 && j > 2 * (d - i)))
                at(i, j) = Relation::gt;
    std::int64_t S = 0;
    for (auto x : known) {
        S += x;
        at(S, 2 * S) = Relation::eq;
        at(d - S, 2 * S) = Relation::eq;
    }
    return pat;
}

inline PredictionModel build_model(const GhostContext& ctx, const WeightIndex& k) {
    auto dp = derivative_polygon(ctx, k);
    PredictionModel m{k};
    const std::int64_t gm = ctx.global_mult();
    m.d = gm * dp->dims.d_new;
    if (m.d == 0) return m;
    m.N = dp->N();
    m.m_index = dp->m_index;
    m.R = prediction_radius(ctx, k);
    for (std::size_t l = 1; l <= m.N; ++l) {
        m.r_list.push_back(l >= m.m_index ? dp->s(l) : m.R);
        m.d_list.push_back(gm * dp->r(l));
    }
    Rational L(0);
    for (std::size_t l = m.N; l >= 1; --l)
        for (std::int64_t step = 0; step < 2 * m.d_list[l - 1]; ++step) {
            L += m.r_list[l - 1];
            m.L_seq.push_back(L);
        }
    for (std::int64_t i = 1; i <= m.d; ++i) m.K_vals.push_back((k.k() - 2) * i);

    std::vector<std::int64_t> known;
    for (std::size_t l = m.N; l >= m.m_index && l >= 1; --l) known.push_back(m.d_list[l - 1]);
    m.pattern = relation_pattern(m.d, known);
    return m;
}

struct SlopePrediction {
    WeightIndex k;
    std::vector<SlopeRun> a1_known;     // k-2-s_j, multiplicity 2 d_j, j = N..M
    Rational a1_floor;                  // k-2-R
    std::vector<SlopeRun> linv_known;   // -(CS+1) over the closed-form thresholds
    Rational linv_floor;                // -R-1
    std::int64_t exceptional_count = 0;
};

// grouped ascending runs of a multiset
inline std::vector<SlopeRun> to_runs(std::vector<Rational> values) {
    std::sort(values.begin(), values.end());
    std::vector<SlopeRun> out;
    for (const auto& v : values) {
        if (!out.empty() && out.back().slope == v) ++out.back().mult;
        else out.push_back({v, 1});
    }
    return out;
}

inline SlopePrediction predict_slopes(const GhostContext& ctx, const WeightIndex& k) {
    auto m = build_model(ctx, k);
    SlopePrediction sp{k};
    if (m.d == 0) return sp;
    for (std::size_t l = m.N; l >= m.m_index && l >= 1; --l)
        sp.a1_known.push_back({Rational(k.k() - 2) - m.r_list[l - 1], 2 * m.d_list[l - 1]});
    sp.a1_floor = Rational(k.k() - 2) - m.R;

    auto tv = k_thresholds(ctx, k);
    std::vector<Rational> linv;
    for (std::size_t n = 0; n < tv.local.size(); ++n)
        if (tv.provenance[n] == Provenance::closed_form)
            for (std::int64_t c = 0; c < ctx.global_mult(); ++c) linv.push_back(-(tv.local[n] + 1));
    sp.linv_known = to_runs(std::move(linv));
    sp.linv_floor = -m.R - 1;
    sp.exceptional_count = m.exceptional_count();
    return sp;
}

// slopes of A_1 -> v_p(L_f) by subtracting k-3
inline std::vector<SlopeRun> gs_translate(const std::vector<SlopeRun>& a1_slopes, std::int64_t k) {
    auto out = a1_slopes;
    for (auto& run : out) run.slope -= k - 3;
    return out;
}

struct IntegralityReport {
    std::vector<std::pair<SlopeRun, bool>> linv;   // known slope, lies in Z + k/2
    std::int64_t linv_exceptions = 0;              // multiplicity outside Z + k/2
    std::vector<SlopeRun> derivative_violations;   // derivative slopes breaking the parity rule
};

inline IntegralityReport integrality_report(const GhostContext& ctx, const WeightIndex& k) {
    IntegralityReport rep;
    auto sp = predict_slopes(ctx, k);
    const Rational half_k(k.k(), 2);
    for (const auto& run : sp.linv_known) {
        bool ok = is_integer(run.slope - half_k);
        rep.linv.push_back({run, ok});
        if (!ok) rep.linv_exceptions += run.mult;
    }
    auto dp = derivative_polygon(ctx, k);
    for (std::size_t i = 1; i <= dp->N(); ++i)
        if (!derivative_slope_parity_ok(*dp, i, ctx.a())) rep.derivative_violations.push_back({dp->s(i), dp->r(i)});
    return rep;
}

}  // namespace ghost

#include "oracles.hpp"

#include <ghostslopes/slopes.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace ghost;

namespace {

std::vector<Rational> ints(std::initializer_list<std::int64_t> xs) {
    std::vector<Rational> out;
    for (auto x : xs) out.emplace_back(x);
    return out;
}

std::vector<Rational> first_slopes(const GhostContext& ctx, const WeightIndex& k, const Rational& nu, std::size_t count) {
    auto all = newton_polygon_at(ctx, 40, WeightPoint{k, Valuation(nu)}).slope_list();
    return {all.begin(), all.begin() + count};
}

// v_p(g_{n,k^}(w_k)) straight from the oracle multiplicities
Rational oracle_hatted(const oracle::Params& c, std::int64_t n, std::int64_t kb0) {
    Rational t = 0;
    for (std::int64_t kb = 0; kb <= (c.p + 1) * (n + 4); ++kb)
        if (kb != kb0) t += oracle::mult(c, n, kb) * (1 + oracle::vp(kb - kb0, c.p));
    return t;
}

}  // namespace

TEST(Slopes, DerivativePolygonAtK24) {
    GhostContext ctx(7, 2, 1);
    auto dp = derivative_polygon(ctx, ctx.weight(24));
    EXPECT_EQ(dp->dims, (DimensionTriple{8, 1, 6}));
    EXPECT_EQ(dp->m_of_k, Valuation(2));
    EXPECT_EQ(dp->raw, ints({17, 19, 25, 34}));
    EXPECT_EQ(dp->slopes, ints({2, 6, 9}));
    EXPECT_EQ(dp->mults, (std::vector<std::int64_t>{1, 1, 1}));
    EXPECT_EQ(dp->m_index, 2u);
    EXPECT_EQ(dp->center, 11);
}

TEST(Slopes, NewslopeRowsInGoodRegionAtK24) {
    GhostContext ctx(7, 2, 1);
    auto k = ctx.weight(24);
    const Rational s2 = 6, s3 = 9;
    {
        Rational nu = 10;
        EXPECT_EQ(first_slopes(ctx, k, nu, 8), ints({1, 11, 11, 11, 11, 11, 11, 22}));
    }
    {
        Rational nu = 7;
        std::vector<Rational> row{1, 11 - (s3 - nu), 11, 11, 11, 11, 11 + (s3 - nu), 22};
        EXPECT_EQ(first_slopes(ctx, k, nu, 8), row);
    }
    for (Rational nu : {Rational(5, 2), Rational(4)}) {
        std::vector<Rational> row{1, 8 - (s2 - nu), 11 - (s2 - nu), 11, 11, 11 + (s2 - nu), 14 + (s2 - nu), 22};
        EXPECT_EQ(first_slopes(ctx, k, nu, 8), row) << "nu = " << nu;
        // the closed form covers the same six newslopes
        EXPECT_EQ(k_newslopes(ctx, k, WeightPoint{k, Valuation(nu)}), std::vector<Rational>(row.begin() + 1, row.begin() + 7));
    }
    EXPECT_EQ(k_newslopes(ctx, k, WeightPoint{k, Valuation(10)}), ints({11, 11, 11, 11, 11, 11}));
}

TEST(Slopes, NewslopeRowsBelowZeroDistanceAtK24) {
    GhostContext ctx(7, 2, 1);
    auto k = ctx.weight(24);
    {
        Rational nu(1, 2);
        std::vector<Rational> row;
        for (std::int64_t c : {1, 3, 6, 9, 11, 14, 16, 19}) row.push_back(c * nu);
        EXPECT_EQ(first_slopes(ctx, k, nu, 8), row);
    }
    {
        Rational nu(3, 2), eta = 2 - nu;
        std::vector<Rational> row{1, 4 - eta, 7 - eta, 11 - 2 * eta, 11, 15 - eta, 18 - 2 * eta, 22 - 3 * eta};
        EXPECT_EQ(first_slopes(ctx, k, nu, 8), row);
    }
}

TEST(Slopes, ThresholdsAtK24) {
    GhostContext ctx(7, 2, 1);
    auto tv = k_thresholds(ctx, ctx.weight(24));
    EXPECT_EQ(tv.local, ints({9, 6, 2, 1, 6, 9}));
    using P = Provenance;
    EXPECT_EQ(tv.provenance, (std::vector<P>{P::closed_form, P::closed_form, P::sweep, P::sweep, P::closed_form, P::closed_form}));
    EXPECT_EQ(tv.global, tv.local);

    GhostContext ctx2(7, 2, 1, 2);
    auto tv2 = k_thresholds(ctx2, ctx2.weight(24));
    EXPECT_EQ(tv2.global, ints({9, 9, 6, 6, 2, 2, 1, 1, 6, 6, 9, 9}));
}

TEST(Slopes, SweepPiecesAtK24) {
    GhostContext ctx(7, 2, 1);
    auto k = ctx.weight(24);
    auto res = sweep_central(ctx, k);
    ASSERT_EQ(res.first_index, 3);
    ASSERT_EQ(res.pieces.size(), 2u);
    EXPECT_EQ(res.r_end, 2);
    auto at = [&](std::size_t idx, const Rational& r) {
        for (const auto& piece : res.pieces[idx])
            if (piece.r_lo <= r && r <= piece.r_hi) return piece.at(r);
        throw std::out_of_range("no piece");
    };
    for (Rational nu : {Rational(1, 3), Rational(7, 10)}) {
        EXPECT_EQ(at(0, nu), 9 * nu);
        EXPECT_EQ(at(1, nu), 11 * nu);
    }
    for (Rational nu : {Rational(5, 4), Rational(19, 10)}) {
        EXPECT_EQ(at(0, nu), 11 - 2 * (2 - nu));
        EXPECT_EQ(at(1, nu), 11);
    }
    EXPECT_EQ(sweep_threshold(ctx, k, 3), 2);
    EXPECT_EQ(sweep_threshold(ctx, k, 4), 1);
    EXPECT_THROW(sweep_threshold(ctx, k, 1), std::invalid_argument);
}

TEST(Slopes, WindowsAtK24) {
    GhostContext ctx(7, 2, 1);
    auto k = ctx.weight(24);
    auto w2 = slope_window(ctx, k, 2);
    EXPECT_EQ(w2.radius, Rational(5, 2));
    EXPECT_EQ(w2.upper, Rational(35, 2));
    EXPECT_EQ(w2.lower, Rational(9, 2));
    EXPECT_EQ(slope_window(ctx, k, 3).radius, Rational(13, 2));
    EXPECT_THROW(slope_window(ctx, k, 1), std::invalid_argument);
    EXPECT_EQ(prediction_radius(ctx, k), Rational(11, 4));
}

TEST(Slopes, DerivativePolygonAgainstOracle) {
    for (auto c : {oracle::Params{7, 2, 1}, oracle::Params{11, 3, 4}, oracle::Params{11, 6, 9}, oracle::Params{5, 1, 2}}) {
        GhostContext ctx(c.p, c.a, c.s);
        for (std::int64_t kb = 0; kb < 45; ++kb) {
            auto k = ctx.weight_from_bullet(kb);
            auto d = oracle::dims(c, kb);
            auto dp = derivative_polygon(ctx, k);
            const std::int64_t h = d.iw / 2;
            const Rational center(k.k() - 2, 2);
            std::vector<std::pair<std::int64_t, Rational>> pts;
            for (std::int64_t l = 0; l <= d.nw / 2; ++l) {
                Rational up = oracle_hatted(c, h + l, kb), down = oracle_hatted(c, h - l, kb);
                ASSERT_EQ(up - down, Rational((k.k() - 2) * l)) << "duality, k=" << k.k() << " l=" << l;
                pts.emplace_back(l, up - center * l);
            }
            if (d.nw == 0) {
                ASSERT_TRUE(dp->raw.empty());
                continue;
            }
            std::vector<Rational> raw;
            for (auto& q : pts) raw.push_back(q.second);
            ASSERT_EQ(dp->raw, raw);
            auto hv = oracle::hull_values(pts);
            std::vector<Rational> per_unit;
            for (std::size_t i = 1; i < hv.size(); ++i) per_unit.push_back(hv[i] - hv[i - 1]);
            ASSERT_EQ(dp->hull.slope_list(), per_unit) << "k=" << k.k();
        }
    }
}

TEST(Slopes, DerivativeIntegrality) {
    for (auto c : {oracle::Params{7, 2, 1}, oracle::Params{11, 3, 4}, oracle::Params{13, 5, 2}, oracle::Params{11, 6, 9}}) {
        GhostContext ctx(c.p, c.a, c.s);
        for (std::int64_t kb = 0; kb < 150; ++kb) {
            auto dp = derivative_polygon(ctx, ctx.weight_from_bullet(kb));
            // measured from k/2; for even k (even a) this is the plain Z / a/2 + Z rule
            const Rational shift(ctx.weight_from_bullet(kb).k() % 2, 2);
            for (std::size_t i = 1; i <= dp->N(); ++i) {
                ASSERT_TRUE(derivative_slope_parity_ok(*dp, i, c.a));
                if (dp->r(i) == 1) ASSERT_TRUE(is_integer(dp->s(i) - shift)) << "k=" << dp->k.k();
                else {
                    ASSERT_EQ(dp->r(i) % 2, 0);
                    ASSERT_TRUE(is_integer(dp->s(i) - shift - Rational(c.a, 2))) << "k=" << dp->k.k();
                }
            }
        }
    }
}

TEST(Slopes, CriterionMatchesHull) {
    const std::uint64_t seed = 31337;
    oracle::print_seed(seed);
    std::mt19937_64 rng(seed);
    for (auto c : {oracle::Params{7, 2, 1}, oracle::Params{11, 3, 4}}) {
        GhostContext ctx(c.p, c.a, c.s);
        for (int t = 0; t < 40; ++t) {
            auto k = ctx.weight_from_bullet(rng() % 40);
            Rational r(static_cast<std::int64_t>(1 + rng() % 30), static_cast<std::int64_t>(1 + rng() % 5));
            WeightPoint w{k, Valuation(r)};
            std::int64_t X = ctx.dimensions(k).d_iw + 2;
            std::vector<std::pair<std::int64_t, Rational>> pts{{0, Rational(0)}};
            for (std::int64_t n = 1; n <= 2 * X + 10; ++n) pts.emplace_back(n, *oracle::ghost_val(c, n, k.k_bullet(), r));
            std::vector<std::int64_t> expect;
            for (auto x : oracle::hull_vertices(pts))
                if (x <= X) expect.push_back(x);
            ASSERT_EQ(breakpoints_by_criterion(ctx, w, X), expect) << "k=" << k.k() << " r=" << r;
        }
    }
}

TEST(Slopes, ThresholdsLockNewslopes) {
    const std::uint64_t seed = 2718;
    oracle::print_seed(seed);
    std::mt19937_64 rng(seed);
    const Rational eps(1, 997);
    for (auto c : {oracle::Params{7, 2, 1}, oracle::Params{11, 3, 4}, oracle::Params{11, 6, 9}}) {
        GhostContext ctx(c.p, c.a, c.s);
        for (int t = 0; t < 6; ++t) {
            auto k = ctx.weight_from_bullet(2 + rng() % 30);
            auto d = ctx.dimensions(k);
            auto tv = k_thresholds(ctx, k);
            const Rational center(k.k() - 2, 2);
            const std::int64_t T = 2 * d.d_iw + 4;
            auto newslope = [&](const Rational& r, std::int64_t n) {
                std::vector<PolygonPoint> pts{{0, Rational(0)}};
                for (std::int64_t m = 1; m <= T; ++m) pts.push_back({m, *oracle::ghost_val(c, m, k.k_bullet(), r)});
                return lower_hull_finite(pts).slope_ending_at(d.d_ur + n);
            };
            for (std::int64_t n = 1; n <= d.d_new; ++n) {
                const Rational& cs = tv.local[n - 1];
                ASSERT_EQ(newslope(cs + eps, n), center) << "k=" << k.k() << " n=" << n;
                ASSERT_EQ(newslope(cs + 3, n), center);
                if (cs > eps) ASSERT_NE(newslope(cs - eps, n), center) << "k=" << k.k() << " n=" << n;
            }
        }
    }
}

TEST(Slopes, GlobalStretch) {
    EXPECT_EQ(global_stretch(ints({1, 2}), 3), ints({1, 1, 1, 2, 2, 2}));
    EXPECT_EQ(global_stretch(std::vector<SlopeRun>{{Rational(2), 1}}, 4), (std::vector<SlopeRun>{{Rational(2), 4}}));
    EXPECT_THROW(global_stretch(ints({1}), 0), std::invalid_argument);
}

#pragma once

// Invariant and property checks behind `ghostslopes verify`.

#include <ghostslopes/ghostslopes.hpp>

#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace ghost::verify {

struct Outcome {
    std::string name;
    bool ok = true;
    std::string detail;
};

class Suite {
public:
    Suite(const GhostContext& ctx, std::uint64_t seed, std::int64_t k_max) : ctx_(ctx), seed_(seed), k_max_(k_max) {}

    std::vector<Outcome> run() {
        std::vector<Outcome> out;
        auto add = [&](std::string name, std::function<std::string()> body) {
            Outcome o{std::move(name)};
            try {
                o.detail = body();
                o.ok = o.detail.empty();
            } catch (const std::exception& e) {
                o.ok = false;
                o.detail = std::string("exception: ") + e.what();
            }
            out.push_back(std::move(o));
        };
        add("multiplicity symmetry", [&] { return multiplicity_symmetry(); });
        add("derivative duality and integrality", [&] { return duality_integrality(); });
        add("zero-distance bound", [&] { return zero_distance_bound(); });
        add("criterion matches hull", [&] { return criterion_vs_hull(); });
        add("threshold symmetry and ordering", [&] { return threshold_shape(); });
        add("prediction consistency", [&] { return prediction_consistency(); });
        add("derivative sample tracks thresholds", [&] { return derivative_tracking(); });
        add("wedge identities", [&] { return wedge_identities(); });
        add("canonical rendering", [&] { return canonical_rendering(); });
        return out;
    }

private:
    std::vector<WeightIndex> weights_upto(std::int64_t k_max) const {
        std::vector<WeightIndex> ks;
        for (std::int64_t kb = 0;; ++kb) {
            auto w = ctx_.weight_from_bullet(kb);
            if (w.k() > k_max) break;
            ks.push_back(w);
        }
        return ks;
    }
    WeightIndex random_weight(std::mt19937_64& rng, std::int64_t k_max) const {
        auto ks = (k_max - ctx_.k_eps()) / (ctx_.p() - 1);
        return ctx_.weight_from_bullet(std::uniform_int_distribution<std::int64_t>(0, ks)(rng));
    }

    std::string multiplicity_symmetry() const {
        std::mt19937_64 rng(seed_);
        for (int t = 0; t < 500; ++t) {
            auto k = random_weight(rng, k_max_);
            auto d = ctx_.dimensions(k);
            auto n = std::uniform_int_distribution<std::int64_t>(0, d.d_iw)(rng);
            if (ghost_multiplicity(ctx_, n, k) != ghost_multiplicity(ctx_, d.d_iw - n, k))
                return "asymmetric at k=" + std::to_string(k.k()) + " n=" + std::to_string(n);
        }
        return {};
    }

    std::string duality_integrality() const {
        for (const auto& k : weights_upto(std::min<std::int64_t>(k_max_, 1500))) {
            auto dp = derivative_polygon(ctx_, k);  // throws if duality breaks
            for (std::size_t i = 1; i <= dp->N(); ++i)
                if (!derivative_slope_parity_ok(*dp, i, ctx_.a())) return "integrality fails at k=" + std::to_string(k.k());
        }
        return {};
    }

    std::string zero_distance_bound() const {
        for (const auto& k : weights_upto(k_max_ * 4)) {
            std::int64_t kb = std::max<std::int64_t>(k.k_bullet(), 1), lg = 0;
            for (std::int64_t q = kb; q >= ctx_.p(); q /= ctx_.p()) ++lg;
            if (max_zero_distance(ctx_, k) > Valuation(lg + 3)) return "bound fails at k=" + std::to_string(k.k());
        }
        return {};
    }

    std::string criterion_vs_hull() const {
        std::mt19937_64 rng(seed_ + 1);
        for (int t = 0; t < 25; ++t) {
            auto k = random_weight(rng, std::min<std::int64_t>(k_max_, 400));
            auto num = std::uniform_int_distribution<std::int64_t>(1, 40)(rng);
            auto den = std::uniform_int_distribution<std::int64_t>(1, 6)(rng);
            WeightPoint w{k, Valuation(Rational(num, den))};
            auto d = ctx_.dimensions(k);
            std::int64_t X = d.d_iw + 2;
            auto crit = breakpoints_by_criterion(ctx_, w, X);
            auto poly = newton_polygon_at(ctx_, 2 * X + 10, w);
            std::vector<std::int64_t> verts;
            for (const auto& v : poly.vertices)
                if (v.x <= X) verts.push_back(v.x);
            if (crit != verts)
                return "mismatch at k=" + std::to_string(k.k()) + " r=" + std::to_string(num) + "/" + std::to_string(den);
        }
        return {};
    }

    std::string threshold_shape() const {
        std::mt19937_64 rng(seed_ + 2);
        for (int t = 0; t < 15; ++t) {
            auto k = random_weight(rng, std::min<std::int64_t>(k_max_, 600));
            auto tv = k_thresholds(ctx_, k);
            auto dp = derivative_polygon(ctx_, k);
            const auto n = tv.local.size();
            for (std::size_t i = 0; i < n; ++i) {
                // only closed-form entries mirror; the swept central block need not
                if (tv.provenance[i] != tv.provenance[n - 1 - i] ||
                    (tv.provenance[i] == Provenance::closed_form && tv.local[i] != tv.local[n - 1 - i]))
                    return "asymmetric thresholds at k=" + std::to_string(k.k());
                if (tv.local[i] < 0 || (dp->N() && tv.local[i] > dp->s(dp->N())))
                    return "threshold out of range at k=" + std::to_string(k.k());
                if (tv.provenance[i] == Provenance::sweep && tv.local[i] > std::max(dp->m_of_k.value(), dp->s(dp->m_index - 1)))
                    return "swept threshold above its window at k=" + std::to_string(k.k());
            }
        }
        return {};
    }

    std::string prediction_consistency() const {
        std::mt19937_64 rng(seed_ + 3);
        for (int t = 0; t < 15; ++t) {
            auto k = random_weight(rng, std::min<std::int64_t>(k_max_, 600));
            auto m = build_model(ctx_, k);
            for (std::size_t i = 1; i < m.L_seq.size(); ++i)
                if (m.L_seq[i] < m.L_seq[i - 1]) return "L sequence decreases at k=" + std::to_string(k.k());
            // each equality column j holds exactly j-1 strict entries
            for (std::int64_t j = 1; j <= m.d; ++j) {
                std::int64_t eq = 0, gt = 0;
                for (std::int64_t i = 1; i <= m.d; ++i) {
                    eq += m.pattern[i - 1][j - 1] == Relation::eq;
                    gt += m.pattern[i - 1][j - 1] == Relation::gt;
                }
                if (eq > 0 && gt != j - 1) return "pattern column count off at k=" + std::to_string(k.k());
            }
            auto sp = predict_slopes(ctx_, k);
            auto tv = k_thresholds(ctx_, k);
            std::int64_t sweep = 0;
            for (auto p : tv.provenance) sweep += p == Provenance::sweep;
            if (sweep * ctx_.global_mult() != sp.exceptional_count)
                return "exceptional count differs from the central block at k=" + std::to_string(k.k());
        }
        return {};
    }

    std::string derivative_tracking() const {
        std::mt19937_64 rng(seed_ + 4);
        for (int t = 0; t < 15; ++t) {
            auto k = random_weight(rng, std::min<std::int64_t>(k_max_, 600));
            auto dp = derivative_polygon(ctx_, k);
            auto tv = k_thresholds(ctx_, k);
            const std::int64_t h = dp->half();
            std::int64_t differ = 0;
            // position n in the right half carries the slope s_j with n_{j-1} < n - h <= n_j
            for (std::int64_t n = 1; n <= 2 * h; ++n) {
                std::int64_t off = n > h ? n - h : h - n + 1;
                std::size_t j = 1;
                while (dp->n(j) < off) ++j;
                bool same = tv.local[n - 1] == dp->s(j);
                if (dp->s(j) > dp->m_of_k.value() && !same) return "z' != z above M(k) at k=" + std::to_string(k.k());
                differ += !same;
            }
            if (Rational(differ) > derivative_mismatch_bound(ctx_, k))
                return "Z and Z' differ too much at k=" + std::to_string(k.k());
        }
        return {};
    }

    std::string wedge_identities() const {
        std::mt19937_64 rng(seed_ + 5);
        for (int t = 0; t < 10; ++t) {
            std::size_t d = 2 + rng() % 3, m = 1 + rng() % (d - 1), n = rng() % (d - m + 1);
            std::vector<ExactMatrix> bs;
            for (std::size_t i = 0; i < m; ++i) bs.push_back(random_matrix(d, d, rng));
            if (!wedge_collapse_check(bs, n, Rational(1 + rng() % 5, 1 + rng() % 3), d)) return "collapse identity fails";
            std::vector<std::int64_t> xs;
            for (std::size_t i = 0; i < d; ++i) xs.push_back(static_cast<std::int64_t>(rng() % 12) - 3);
            if (binomial_vandermonde(xs) != vandermonde_over_factorials(xs)) return "binomial Vandermonde relation fails";
            std::vector<Rational> mv;
            for (std::size_t i = 0; i < d; ++i) mv.push_back(static_cast<std::int64_t>(rng() % 19) - 9);
            if (!linear_system_roundtrip(d, Rational(2 + rng() % 5), mv)) return "round trip fails";
        }
        for (std::size_t d = 1; d <= 10; ++d)
            for (std::size_t j = 2; j <= d; j += 2)
                if (d_matrix_truncated(d, j, Truncation::split).determinant() != 1 || !minor_unit_check(d, j))
                    return "split matrix check fails at d=" + std::to_string(d);
        return {};
    }

    std::string canonical_rendering() const {
        std::vector<GhostPolynomial> gs;
        for (int n = 1; n <= 6; ++n) gs.push_back(ghost_polynomial(ctx_, n));
        auto a = to_json(gs).dump(), b = to_json(gs).dump();
        if (a != b) return "ghost JSON not byte-stable";
        auto k = ctx_.weight_from_bullet(3);
        if (to_json(k_thresholds(ctx_, k)).dump() != to_json(k_thresholds(ctx_, k)).dump())
            return "threshold JSON not byte-stable";
        return {};
    }

    const GhostContext& ctx_;
    std::uint64_t seed_;
    std::int64_t k_max_;
};

}  // namespace ghost::verify

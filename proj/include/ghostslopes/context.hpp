#pragma once

#include "valuation.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ghost {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

enum class Mode { strict, exploratory };

struct DimensionTriple {
    std::int64_t d_iw = 0;
    std::int64_t d_ur = 0;
    std::int64_t d_new = 0;
    friend bool operator==(const DimensionTriple&, const DimensionTriple&) = default;
};

// A weight k in the fixed class mod p-1; only a GhostContext hands these out.
class WeightIndex {
public:
    std::int64_t k() const { return k_; }
    std::int64_t k_bullet() const { return kb_; }
    friend bool operator==(const WeightIndex&, const WeightIndex&) = default;
    friend auto operator<=>(const WeightIndex& x, const WeightIndex& y) { return x.k_ <=> y.k_; }

private:
    friend class GhostContext;
    WeightIndex(std::int64_t k, std::int64_t kb) : k_(k), kb_(kb) {}
    std::int64_t k_;
    std::int64_t kb_;
};

struct DerivativePolygon;

namespace detail {
struct ContextCache {
    std::shared_mutex dim_mutex;
    std::vector<DimensionTriple> dims;  // indexed by k_bullet

    std::shared_mutex poly_mutex;
    std::unordered_map<std::int64_t, std::shared_ptr<const DerivativePolygon>> polygons;
};
}  // namespace detail

inline std::int64_t floor_div(std::int64_t x, std::int64_t y) {
    std::int64_t q = x / y;
    if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
    return q;
}

class GhostContext {
public:
    GhostContext(std::int64_t p, std::int64_t a, std::int64_t s_eps, std::int64_t global_mult = 1,
                 Mode mode = Mode::exploratory, std::int64_t k_ceiling = 50'000'000)
        : p_(p), a_(a), s_eps_(s_eps), global_mult_(global_mult), mode_(mode), k_ceiling_(k_ceiling),
          cache_(std::make_shared<detail::ContextCache>()) {
        if (!is_prime(p)) throw ConfigError("p = " + std::to_string(p) + " is not prime");
        if (mode == Mode::strict) {
            if (p < 11) throw ConfigError("strict mode needs p >= 11");
            if (a < 2 || a > p - 5) throw ConfigError("strict mode needs 2 <= a <= p-5");
        } else {
            if (p < 5) throw ConfigError("p must be at least 5");
            if (a < 1 || a > p - 4) throw ConfigError("a must lie in [1, p-4]");
            exploratory_ = p < 11 || a < 2 || a > p - 5;
        }
        if (s_eps < 0 || s_eps > p - 2) throw ConfigError("s_eps must lie in [0, p-2]");
        if (global_mult < 1) throw ConfigError("global multiplicity must be >= 1");
        if (k_ceiling < 2) throw ConfigError("k ceiling must be >= 2");

        k_eps_ = 2 + mod(a + 2 * s_eps);
        delta_ = (s_eps + mod(a + s_eps)) / (p - 1);
        if (a + s_eps < p - 1) {
            t1_ = s_eps + delta_;
            t2_ = a + s_eps + delta_ + 2;
        } else {
            // the printed a + s_eps + delta + 1 breaks ghost duality; s_eps + delta + 1 restores it
            t1_ = mod(a + s_eps) + delta_ + 1;
            t2_ = s_eps + delta_ + 1;
        }
    }

    std::int64_t p() const { return p_; }
    std::int64_t a() const { return a_; }
    std::int64_t s_eps() const { return s_eps_; }
    std::int64_t global_mult() const { return global_mult_; }
    Mode mode() const { return mode_; }
    // true when parameters sit outside the strict hypotheses
    bool exploratory_warning() const { return exploratory_; }
    std::int64_t k_eps() const { return k_eps_; }
    std::int64_t delta_eps() const { return delta_; }
    std::int64_t t1() const { return t1_; }
    std::int64_t t2() const { return t2_; }
    std::int64_t k_ceiling() const { return k_ceiling_; }

    // representative of x mod p-1 in [0, p-2]
    std::int64_t mod(std::int64_t x) const {
        std::int64_t r = x % (p_ - 1);
        return r < 0 ? r + p_ - 1 : r;
    }

    bool in_class(std::int64_t k) const { return k >= 2 && mod(k - k_eps_) == 0; }

    WeightIndex weight(std::int64_t k) const {
        if (!in_class(k))
            throw DomainError("k = " + std::to_string(k) + " is not >= 2 with k = " + std::to_string(k_eps_) +
                              " mod " + std::to_string(p_ - 1));
        return WeightIndex(k, (k - k_eps_) / (p_ - 1));
    }
    WeightIndex weight_from_bullet(std::int64_t kb) const {
        if (kb < 0) throw DomainError("negative k_bullet");
        return WeightIndex(kb * (p_ - 1) + k_eps_, kb);
    }

    // Closed formulas, no cache.  The clamp on d_ur is a guard only.
    std::int64_t d_iw_of_bullet(std::int64_t kb) const { return 2 * kb + 2 - 2 * delta_; }
    std::int64_t d_ur_of_bullet(std::int64_t kb) const {
        std::int64_t q = floor_div(kb - t1_, p_ + 1);
        std::int64_t v = 2 * q + 1 + (kb - (p_ + 1) * q >= t2_ ? 1 : 0);
        return v < 0 ? 0 : v;
    }
    DimensionTriple dims_of_bullet(std::int64_t kb) const {
        DimensionTriple t{d_iw_of_bullet(kb), d_ur_of_bullet(kb), 0};
        t.d_new = t.d_iw - 2 * t.d_ur;
        return t;
    }

    DimensionTriple dimensions(const WeightIndex& w) const {
        auto kb = w.k_bullet();
        {
            std::shared_lock lock(cache_->dim_mutex);
            if (kb < static_cast<std::int64_t>(cache_->dims.size())) return cache_->dims[kb];
        }
        std::unique_lock lock(cache_->dim_mutex);
        auto& dims = cache_->dims;
        while (static_cast<std::int64_t>(dims.size()) <= kb) dims.push_back(dims_of_bullet(dims.size()));
        return dims[kb];
    }
    DimensionTriple dimensions(std::int64_t k) const { return dimensions(weight(k)); }

    Valuation weight_distance(const WeightIndex& x, const WeightIndex& y) const {
        return ghost::weight_distance(x.k(), y.k(), p_);
    }

    std::int64_t kb_ceiling() const { return (k_ceiling_ - k_eps_) / (p_ - 1); }

    detail::ContextCache& cache() const { return *cache_; }

private:
    std::int64_t p_, a_, s_eps_, global_mult_;
    Mode mode_;
    std::int64_t k_ceiling_;
    bool exploratory_ = false;
    std::int64_t k_eps_ = 0, delta_ = 0, t1_ = 0, t2_ = 0;
    std::shared_ptr<detail::ContextCache> cache_;
};

}  // namespace ghost

#include "oracles.hpp"

#include <ghostslopes/wedge.hpp>

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace ghost;

namespace {

int perm_sign(const std::vector<std::size_t>& s) {
    int inv = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) inv += s[i] > s[j];
    return inv % 2 ? -1 : 1;
}

// the defining double sum: row subsets, then every permutation of them
Rational brute_trace(const std::vector<ExactMatrix>& mats) {
    const std::size_t d = mats.front().rows(), n = mats.size();
    Rational total;
    std::vector<bool> pick(d, false);
    std::fill(pick.begin(), pick.begin() + n, true);
    do {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < d; ++i)
            if (pick[i]) idx.push_back(i);
        std::vector<std::size_t> sigma(n);
        std::iota(sigma.begin(), sigma.end(), 0);
        do {
            Rational term = perm_sign(sigma);
            for (std::size_t l = 0; l < n; ++l) term *= mats[l](idx[l], idx[sigma[l]]);
            total += term;
        } while (std::next_permutation(sigma.begin(), sigma.end()));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return total;
}

Rational leibniz_det(const ExactMatrix& m) {
    std::vector<std::size_t> sigma(m.rows());
    std::iota(sigma.begin(), sigma.end(), 0);
    Rational total;
    do {
        Rational term = perm_sign(sigma);
        for (std::size_t i = 0; i < m.rows(); ++i) term *= m(i, sigma[i]);
        total += term;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total;
}

// sum of principal i x i minors
Rational principal_sum(const ExactMatrix& m, std::size_t i) {
    const std::size_t d = m.rows();
    if (i == 0) return 1;
    Rational total;
    std::vector<bool> pick(d, false);
    std::fill(pick.begin(), pick.begin() + i, true);
    do {
        std::vector<std::size_t> idx;
        for (std::size_t r = 0; r < d; ++r)
            if (pick[r]) idx.push_back(r);
        total += leibniz_det(m.submatrix(idx, idx));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return total;
}

// characteristic polynomial coefficients by Faddeev-LeVerrier; returns e_0..e_d
std::vector<Rational> elementary_from_charpoly(const ExactMatrix& a) {
    const std::size_t d = a.rows();
    std::vector<Rational> c(d + 1);
    c[d] = 1;
    ExactMatrix m(d, d);
    for (std::size_t k = 1; k <= d; ++k) {
        m = a * m + ExactMatrix::scalar(d, c[d - k + 1]);
        c[d - k] = -(a * m).trace() / static_cast<std::int64_t>(k);
    }
    std::vector<Rational> e(d + 1);
    for (std::size_t k = 0; k <= d; ++k) e[k] = (k % 2 ? -1 : 1) * c[d - k];
    return e;
}

}  // namespace

TEST(Wedge, SmallCases) {
    ExactMatrix b{{1, 2}, {3, 4}};
    EXPECT_EQ(formal_wedge_trace({b, b}), -2);
    EXPECT_EQ(formal_wedge_trace({b}), 5);
    for (std::size_t d = 1; d <= 6; ++d)
        for (std::size_t j = 1; j <= d; ++j)
            EXPECT_EQ(formal_wedge_trace(std::vector<ExactMatrix>(j, ExactMatrix::identity(d))), Rational(binomial(d, j)));
    EXPECT_EQ(d_matrix(3), (ExactMatrix{{1, 0, 0}, {2, 1, 0}, {1, 1, 1}}));
    EXPECT_EQ(binomial_vandermonde({3, 1, 0}), -3);
    EXPECT_EQ(binomial_vandermonde({17}), 1);
    EXPECT_TRUE(minor_unit_check(6, 2));
    EXPECT_TRUE(minor_unit_check(8, 4));
    EXPECT_TRUE(minor_unit_check(6, 6));
}

TEST(Wedge, Errors) {
    ExactMatrix b{{1, 2}, {3, 4}};
    EXPECT_THROW(formal_wedge_trace({b, b, b}), std::invalid_argument);
    EXPECT_THROW(formal_wedge_trace({b, ExactMatrix::identity(3)}), std::invalid_argument);
    EXPECT_THROW(formal_wedge_trace({ExactMatrix::identity(9)}), std::invalid_argument);
    EXPECT_THROW(d_matrix_truncated(6, 3, Truncation::split), std::invalid_argument);
    EXPECT_THROW(d_matrix_truncated(6, 7, Truncation::upper_left), std::invalid_argument);
    EXPECT_THROW(wedge_placement_sum({b, b}, 1, Rational(2), 2), std::invalid_argument);
    EXPECT_THROW((ExactMatrix{{1, 2}, {2, 4}}.inverse()), std::domain_error);
}

TEST(Wedge, TraceMatchesPermutationSum) {
    const std::uint64_t seed = 5151;
    oracle::print_seed(seed);
    std::mt19937_64 rng(seed);
    for (int t = 0; t < 60; ++t) {
        std::size_t d = 1 + rng() % 5, n = 1 + rng() % d;
        std::vector<ExactMatrix> mats;
        for (std::size_t l = 0; l < n; ++l) mats.push_back(random_matrix(d, d, rng));
        ASSERT_EQ(formal_wedge_trace(mats), brute_trace(mats));
    }
}

TEST(Wedge, SymmetrizedPairIsPolarization) {
    const std::uint64_t seed = 6161;
    oracle::print_seed(seed);
    std::mt19937_64 rng(seed);
    for (int t = 0; t < 20; ++t) {
        auto b = random_matrix(4, 4, rng), c = random_matrix(4, 4, rng);
        auto sym = formal_wedge_trace({b, c}) + formal_wedge_trace({c, b});
        // tr ^2 (B + C) - tr ^2 B - tr ^2 C, through principal minors
        ASSERT_EQ(sym, principal_sum(b + c, 2) - principal_sum(b, 2) - principal_sum(c, 2));
        ASSERT_EQ(formal_wedge_trace({b * Rational(3), c}), 3 * formal_wedge_trace({b, c}));
    }
}

TEST(Wedge, SingleMatrixPowerIsElementarySymmetric) {
    const std::uint64_t seed = 7171;
    oracle::print_seed(seed);
    std::mt19937_64 rng(seed);
    for (int t = 0; t < 20; ++t) {
        auto a = random_matrix(4, 4, rng);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) a(i, j) /= 1 + static_cast<std::int64_t>(rng() % 3);
        auto e = elementary_from_charpoly(a);
        for (std::size_t n = 1; n <= 4; ++n)
            ASSERT_EQ(formal_wedge_trace(std::vector<ExactMatrix>(n, a)), e[n]) << "n=" << n;
        ASSERT_EQ(e[4], a.determinant());
    }
}

TEST(Wedge, CollapseIdentity) {
    const std::uint64_t seed = 8181;
    oracle::print_seed(seed);
    std::mt19937_64 rng(seed);
    ExactMatrix b{{1, 2}, {3, 4}};
    Rational alpha(7, 3);
    EXPECT_EQ(wedge_placement_sum({b}, 1, alpha, 2), alpha * b.trace());
    EXPECT_EQ(wedge_placement_sum({}, 3, alpha, 5), Rational(binomial(5, 3)) * pow_int(alpha, 3));
    for (int t = 0; t < 20; ++t) {
        std::size_t m = 1 + rng() % 3, n = rng() % (4 - m + 1);
        std::vector<ExactMatrix> bs;
        for (std::size_t l = 0; l < m; ++l) bs.push_back(random_matrix(4, 4, rng));
        Rational a(static_cast<std::int64_t>(rng() % 19) - 9, 1 + static_cast<std::int64_t>(rng() % 4));
        ASSERT_TRUE(wedge_collapse_check(bs, n, a, 4)) << "m=" << m << " n=" << n;
    }
}

TEST(Wedge, DeterminantsOfDMatrices) {
    for (std::size_t d = 1; d <= 10; ++d)
        for (std::size_t j = 1; j <= d; ++j) {
            ASSERT_EQ(d_matrix_truncated(d, j, Truncation::upper_left).determinant(), 1) << d << " " << j;
            ASSERT_TRUE(d_matrix_truncated(d, j, Truncation::upper_left).inverse().is_integral());
            if (j % 2 == 0) {
                ASSERT_EQ(d_matrix_truncated(d, j, Truncation::split).determinant(), 1) << d << " " << j;
                ASSERT_TRUE(minor_unit_check(d, j)) << d << " " << j;
            }
        }
}

TEST(Wedge, BinomialVandermonde) {
    const std::uint64_t seed = 9191;
    oracle::print_seed(seed);
    std::mt19937_64 rng(seed);
    for (int t = 0; t < 100; ++t) {
        std::vector<std::int64_t> xs(1 + rng() % 7);
        for (auto& x : xs) x = static_cast<std::int64_t>(rng() % 21) - 10;
        ASSERT_EQ(binomial_vandermonde(xs), vandermonde_over_factorials(xs));
    }
    // consecutive descending arguments give (-1)^{C(n,2)}
    for (std::int64_t n = 1; n <= 8; ++n)
        for (std::int64_t n0 = 0; n0 <= 5; ++n0) {
            std::vector<std::int64_t> xs;
            for (std::int64_t i = n - 1; i >= 0; --i) xs.push_back(n0 + i);
            Rational sign = (n * (n - 1) / 2) % 2 ? -1 : 1;
            ASSERT_EQ(binomial_vandermonde(xs), sign) << "n=" << n << " n0=" << n0;
            std::reverse(xs.begin(), xs.end());
            ASSERT_EQ(binomial_vandermonde(xs), 1);
        }
}

TEST(Wedge, LinearSystemRoundTrip) {
    const std::uint64_t seed = 1011;
    oracle::print_seed(seed);
    std::mt19937_64 rng(seed);
    EXPECT_EQ(forward_f_values(3, Rational(5), {Rational(4)})[0], 4);
    for (int t = 0; t < 20; ++t) {
        std::size_t d = 1 + rng() % 8, j = 1 + rng() % d;
        std::vector<Rational> m_vec;
        for (std::size_t l = 0; l < j; ++l)
            m_vec.emplace_back(static_cast<std::int64_t>(rng() % 41) - 20, 1 + static_cast<std::int64_t>(rng() % 5));
        Rational alpha(1 + static_cast<std::int64_t>(rng() % 9), 1 + static_cast<std::int64_t>(rng() % 3));
        ASSERT_TRUE(linear_system_roundtrip(d, alpha, m_vec));
        if (j % 2 == 0) ASSERT_TRUE(linear_system_roundtrip(d, alpha, m_vec, Truncation::split));
    }
}

TEST(Wedge, ExpansionIdentityAgainstInterpolation) {
    const std::uint64_t seed = 1213;
    oracle::print_seed(seed);
    std::mt19937_64 rng(seed);
    for (int t = 0; t < 6; ++t) {
        std::size_t d = 2 + rng() % 4;
        Rational alpha(1 + static_cast<std::int64_t>(rng() % 5), 1 + static_cast<std::int64_t>(rng() % 2));
        std::vector<ExactMatrix> a{ExactMatrix::scalar(d, alpha), random_matrix(d, d, rng, -3, 3),
                                   random_matrix(d, d, rng, -3, 3)};
        for (std::size_t i = 1; i <= d; ++i) {
            // e_i(A_0 + A_1 u + A_2 u^2) has degree <= 2i; sample and solve for the coefficients
            const std::size_t deg = 2 * i;
            ExactMatrix vand(deg + 1, deg + 1);
            std::vector<Rational> ys;
            for (std::size_t u = 0; u <= deg; ++u) {
                for (std::size_t c = 0; c <= deg; ++c) vand(u, c) = pow_int(Rational(std::int64_t(u)), c);
                ys.push_back(principal_sum(a[0] + a[1] * Rational(std::int64_t(u)) + a[2] * Rational(std::int64_t(u * u)), i));
            }
            auto coeffs = vand.inverse() * ys;
            for (std::size_t j = 0; j <= deg; ++j) {
                ASSERT_EQ(wedge_power_coefficient(a, i, j), coeffs[j]) << "d=" << d << " i=" << i << " j=" << j;
                ASSERT_EQ(collapsed_coefficient(a, alpha, i, j), coeffs[j]) << "d=" << d << " i=" << i << " j=" << j;
            }
        }
    }
}

#pragma once

#include "rational.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghost {

class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {
        if (rows == 0 || cols == 0) throw std::invalid_argument("matrix dimensions must be positive");
    }
    ExactMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("matrix dimensions must be positive");
        for (const auto& r : rows) {
            if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
            a_.insert(a_.end(), r.begin(), r.end());
        }
    }

    static ExactMatrix identity(std::size_t d) {
        ExactMatrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) m(i, i) = 1;
        return m;
    }
    static ExactMatrix scalar(std::size_t d, const Rational& c) {
        ExactMatrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) m(i, i) = c;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    // 0-based
    Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;

    ExactMatrix operator+(const ExactMatrix& o) const {
        same_shape(o);
        ExactMatrix r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
        return r;
    }
    ExactMatrix operator*(const Rational& c) const {
        ExactMatrix r = *this;
        for (auto& x : r.a_) x *= c;
        return r;
    }
    ExactMatrix operator*(const ExactMatrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product: shape mismatch");
        ExactMatrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                if ((*this)(i, k) == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
            }
        return r;
    }
    std::vector<Rational> operator*(const std::vector<Rational>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("matrix-vector product: shape mismatch");
        std::vector<Rational> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    Rational trace() const {
        if (!square()) throw std::invalid_argument("trace of a non-square matrix");
        Rational t;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    // rows and columns kept, both 0-based and ascending
    ExactMatrix submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
        ExactMatrix m(rs.size(), cs.size());
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = 0; j < cs.size(); ++j) m(i, j) = (*this)(rs[i], cs[j]);
        return m;
    }
    ExactMatrix without(std::size_t row, std::size_t col) const {
        std::vector<std::size_t> rs, cs;
        for (std::size_t i = 0; i < rows_; ++i)
            if (i != row) rs.push_back(i);
        for (std::size_t j = 0; j < cols_; ++j)
            if (j != col) cs.push_back(j);
        return submatrix(rs, cs);
    }

    Rational determinant() const {
        if (!square()) throw std::invalid_argument("determinant of a non-square matrix");
        ExactMatrix m = *this;
        const std::size_t n = rows_;
        Rational det(1);
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t piv = c;
            while (piv < n && m(piv, c) == 0) ++piv;
            if (piv == n) return Rational(0);
            if (piv != c) {
                for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
                det = -det;
            }
            det *= m(c, c);
            for (std::size_t r = c + 1; r < n; ++r) {
                if (m(r, c) == 0) continue;
                Rational f = m(r, c) / m(c, c);
                for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
            }
        }
        return det;
    }

    ExactMatrix inverse() const {
        if (!square()) throw std::invalid_argument("inverse of a non-square matrix");
        const std::size_t n = rows_;
        ExactMatrix m = *this, inv = identity(n);
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t piv = c;
            while (piv < n && m(piv, c) == 0) ++piv;
            if (piv == n) throw std::domain_error("singular matrix");
            if (piv != c)
                for (std::size_t j = 0; j < n; ++j) {
                    std::swap(m(piv, j), m(c, j));
                    std::swap(inv(piv, j), inv(c, j));
                }
            Rational f = m(c, c);
            for (std::size_t j = 0; j < n; ++j) {
                m(c, j) /= f;
                inv(c, j) /= f;
            }
            for (std::size_t r = 0; r < n; ++r) {
                if (r == c || m(r, c) == 0) continue;
                Rational g = m(r, c);
                for (std::size_t j = 0; j < n; ++j) {
                    m(r, j) -= g * m(c, j);
                    inv(r, j) -= g * inv(c, j);
                }
            }
        }
        return inv;
    }

    bool is_integral() const {
        return std::all_of(a_.begin(), a_.end(), [](const Rational& x) { return is_integer(x); });
    }

private:
    void same_shape(const ExactMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
    }
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> a_;
};

inline ExactMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, int lo = -9, int hi = 9) {
    std::uniform_int_distribution<int> dist(lo, hi);
    ExactMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(rng);
    return m;
}

inline BigInt binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// C(x, i) for any integer x, including negative x
inline Rational binomial_general(std::int64_t x, std::int64_t i) {
    if (i < 0) return 0;
    Rational r(1);
    for (std::int64_t t = 0; t < i; ++t) r = r * (x - t) / (t + 1);
    return r;
}

constexpr std::size_t kWedgeMaxDim = 8;

// Each position l picks its row from mats[l]; for fixed rows i_1 < ... < i_n the
// inner sum over permutations is the determinant of that mixed submatrix.
inline Rational formal_wedge_trace(const std::vector<ExactMatrix>& mats) {
    if (mats.empty()) return Rational(1);
    const std::size_t d = mats.front().rows(), n = mats.size();
    for (const auto& m : mats)
        if (!m.square() || m.rows() != d) throw std::invalid_argument("formal_wedge_trace: matrices must all be d x d");
    if (n > d) throw std::invalid_argument("formal_wedge_trace: more factors than the dimension");
    if (d > kWedgeMaxDim) throw std::invalid_argument("formal_wedge_trace: d > 8 is outside the oracle budget");

    Rational total;
    std::vector<bool> pick(d, false);
    std::fill(pick.begin(), pick.begin() + n, true);
    do {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < d; ++i)
            if (pick[i]) idx.push_back(i);
        ExactMatrix sub(n, n);
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t c = 0; c < n; ++c) sub(l, c) = mats[l](idx[l], idx[c]);
        total += sub.determinant();
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return total;
}

// sum over placements of the B's among m + n slots, the remaining slots alpha * I
inline Rational wedge_placement_sum(const std::vector<ExactMatrix>& bs, std::size_t n, const Rational& alpha,
                                    std::size_t d) {
    const std::size_t m = bs.size(), total = m + n;
    if (total > d) throw std::invalid_argument("wedge_collapse: m + n exceeds d");
    const ExactMatrix a = ExactMatrix::scalar(d, alpha);
    Rational sum;
    std::vector<bool> slot(total, false);
    std::fill(slot.begin(), slot.begin() + m, true);
    do {
        std::vector<ExactMatrix> seq;
        std::size_t next = 0;
        for (std::size_t l = 0; l < total; ++l) seq.push_back(slot[l] ? bs[next++] : a);
        sum += seq.empty() ? Rational(1) : formal_wedge_trace(seq);
    } while (std::prev_permutation(slot.begin(), slot.end()));
    return sum;
}

inline bool wedge_collapse_check(const std::vector<ExactMatrix>& bs, std::size_t n, const Rational& alpha,
                                 std::size_t d) {
    Rational lhs = wedge_placement_sum(bs, n, alpha, d);
    Rational rhs = Rational(binomial(d - bs.size(), n)) * pow_int(alpha, n) *
                   (bs.empty() ? Rational(1) : formal_wedge_trace(bs));
    return lhs == rhs;
}

enum class Truncation { upper_left, split };

// entries C(d-j, d-i), 1-based
inline ExactMatrix d_matrix(std::size_t d) {
    if (d == 0) throw std::invalid_argument("d_matrix: d must be positive");
    ExactMatrix m(d, d);
    for (std::size_t i = 1; i <= d; ++i)
        for (std::size_t j = 1; j <= d; ++j)
            m(i - 1, j - 1) = Rational(binomial(std::int64_t(d - j), std::int64_t(d) - std::int64_t(i)));
    return m;
}

inline ExactMatrix d_matrix_truncated(std::size_t d, std::size_t j, Truncation mode) {
    if (j < 1 || j > d) throw std::invalid_argument("d_matrix_truncated: need 1 <= j <= d");
    auto full = d_matrix(d);
    std::vector<std::size_t> cols(j);
    for (std::size_t c = 0; c < j; ++c) cols[c] = c;
    if (mode == Truncation::upper_left) return full.submatrix(cols, cols);
    if (j % 2) throw std::invalid_argument("d_matrix_truncated: SPLIT needs an even j");
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < j / 2; ++r) rows.push_back(r);
    for (std::size_t r = d - j / 2; r < d; ++r) rows.push_back(r);
    return full.submatrix(rows, cols);
}

// det of (C(x_j, i)), i = 0..n-1 down the rows, x_j across the columns
inline Rational binomial_vandermonde(const std::vector<std::int64_t>& xs) {
    const std::size_t n = xs.size();
    if (n == 0) return Rational(1);
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = binomial_general(xs[j], std::int64_t(i));
    return m.determinant();
}

// prod_{i<j} (x_j - x_i) / (0! 1! ... (n-1)!)
inline Rational vandermonde_over_factorials(const std::vector<std::int64_t>& xs) {
    Rational v(1);
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) v *= xs[j] - xs[i];
    BigInt f = 1, prod = 1;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        f *= i;
        prod *= f;
    }
    return v / Rational(prod);
}

// the (j-1) x (j-1) minor of the split matrix at row j/2, column j
inline Rational split_minor(std::size_t d, std::size_t j) {
    if (j % 2 || j < 2 || j > d) throw std::invalid_argument("split_minor: need an even 2 <= j <= d");
    auto m = d_matrix_truncated(d, j, Truncation::split);
    return m.without(j / 2 - 1, j - 1).determinant();
}

inline bool minor_unit_check(std::size_t d, std::size_t j) {
    auto v = split_minor(d, j);
    return v == 1 || v == -1;
}

// alpha^{-i} F_{i,j} = sum_l C(d-l, d-i) (M^{(l)} alpha^{-l}), i = 1..d
inline std::vector<Rational> forward_f_values(std::size_t d, const Rational& alpha, const std::vector<Rational>& m_vec) {
    const std::size_t j = m_vec.size();
    if (j < 1 || j > d) throw std::invalid_argument("forward_f_values: need 1 <= j <= d");
    std::vector<Rational> f(d);
    for (std::size_t i = 1; i <= d; ++i) {
        Rational y;
        for (std::size_t l = 1; l <= j; ++l)
            y += Rational(binomial(std::int64_t(d - l), std::int64_t(d - i))) * m_vec[l - 1] /
                 pow_int(alpha, l);
        f[i - 1] = y * pow_int(alpha, i);
    }
    return f;
}

// Recovers M^{(j)} from F_{1,j}..F_{d,j} through the integer inverse of the chosen j x j system.
inline Rational recover_top(std::size_t d, const Rational& alpha, const std::vector<Rational>& f, std::size_t j,
                            Truncation mode) {
    auto sys = d_matrix_truncated(d, j, mode);
    auto inv = sys.inverse();
    if (!inv.is_integral()) throw std::domain_error("recover_top: inverse is not integral");
    std::vector<std::size_t> rows;
    if (mode == Truncation::upper_left) {
        for (std::size_t r = 0; r < j; ++r) rows.push_back(r);
    } else {
        for (std::size_t r = 0; r < j / 2; ++r) rows.push_back(r);
        for (std::size_t r = d - j / 2; r < d; ++r) rows.push_back(r);
    }
    std::vector<Rational> y;
    for (auto r : rows) y.push_back(f[r] / pow_int(alpha, r + 1));
    auto z = inv * y;
    return z[j - 1] * pow_int(alpha, j);
}

inline bool linear_system_roundtrip(std::size_t d, const Rational& alpha, const std::vector<Rational>& m_vec,
                                    Truncation mode = Truncation::upper_left) {
    if (alpha == 0) throw std::invalid_argument("linear_system_roundtrip: alpha must be nonzero");
    auto f = forward_f_values(d, alpha, m_vec);
    return recover_top(d, alpha, f, m_vec.size(), mode) == m_vec.back();
}

// M_j^{(l)}: sum over compositions k_1 + ... + k_l = j, k_t >= 1, of tr(A_{k_1} ^ ... ^ A_{k_l}).
// a[k] is A_k; a[0] is ignored and indices past the end count as zero.
inline Rational composition_trace(const std::vector<ExactMatrix>& a, std::size_t j, std::size_t l) {
    if (l == 0) return j == 0 ? Rational(1) : Rational(0);
    Rational total;
    std::vector<std::size_t> parts(l);
    auto rec = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
        if (pos == l) {
            if (left != 0) return;
            std::vector<ExactMatrix> seq;
            for (auto k : parts) seq.push_back(a[k]);
            total += formal_wedge_trace(seq);
            return;
        }
        std::size_t rest = l - pos - 1;
        for (std::size_t k = 1; k < a.size() && k + rest <= left; ++k) {
            parts[pos] = k;
            self(self, pos + 1, left - k);
        }
    };
    rec(rec, 0, j);
    return total;
}

// coefficient of u^j in tr(^i M(u)) with M(u) = sum a[k] u^k, over all compositions with zero parts allowed
inline Rational wedge_power_coefficient(const std::vector<ExactMatrix>& a, std::size_t i, std::size_t j) {
    Rational total;
    std::vector<std::size_t> parts(i);
    auto rec = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
        if (pos == i) {
            if (left != 0) return;
            std::vector<ExactMatrix> seq;
            for (auto k : parts) seq.push_back(a[k]);
            total += formal_wedge_trace(seq);
            return;
        }
        for (std::size_t k = 0; k < a.size() && k <= left; ++k) {
            parts[pos] = k;
            self(self, pos + 1, left - k);
        }
    };
    rec(rec, 0, j);
    return total;
}

// the same coefficient after collapsing the scalar A_0 = alpha I: sum_l C(d-l, i-l) alpha^{i-l} M_j^{(l)}
inline Rational collapsed_coefficient(const std::vector<ExactMatrix>& a, const Rational& alpha, std::size_t i,
                                      std::size_t j) {
    const std::size_t d = a.at(1).rows();
    if (j == 0) return Rational(binomial(d, i)) * pow_int(alpha, i);
    Rational total;
    for (std::size_t l = 1; l <= std::min(i, j); ++l)
        total += Rational(binomial(d - l, i - l)) * pow_int(alpha, i - l) * composition_trace(a, j, l);
    return total;
}

}  // namespace ghost

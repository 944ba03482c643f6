#pragma once

#include <bimops/errors.hpp>
#include <bimops/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bimops {

/*
 * Dense row-major matrix of exact rationals.
 *
 * 0 x n and n x 0 shapes are legal. A product through an inner dimension of
 * zero is the zero matrix of the outer shape, which is what the recurrence
 * formulas need at degree 0 (e.g. a 1x0 coefficient times a 0x1 factor).
 */
class RatMatrix {
public:
    RatMatrix() = default;

    RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    RatMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
            for (const auto& v : row) {
                data_.push_back(v);
                data_.back().canonicalize();
            }
        }
    }

    static RatMatrix zero(std::size_t rows, std::size_t cols) { return RatMatrix(rows, cols); }

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    RatMatrix transpose() const {
        RatMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    RatMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("block outside matrix");
        RatMatrix b(nr, nc);
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
        return b;
    }

    void set_block(std::size_t r0, std::size_t c0, const RatMatrix& b) {
        if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw std::out_of_range("block outside matrix");
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const Rational& v) { return sgn(v) == 0; });
    }

    bool is_symmetric() const {
        if (!is_square()) return false;
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = r + 1; c < cols_; ++c)
                if ((*this)(r, c) != (*this)(c, r)) return false;
        return true;
    }

    friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const RatMatrix& a, const RatMatrix& b) { return !(a == b); }

    RatMatrix& operator+=(const RatMatrix& o) {
        require_same_shape(o, "+");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    RatMatrix& operator-=(const RatMatrix& o) {
        require_same_shape(o, "-");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    RatMatrix& operator*=(const Rational& s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend RatMatrix operator+(RatMatrix a, const RatMatrix& b) { return a += b; }
    friend RatMatrix operator-(RatMatrix a, const RatMatrix& b) { return a -= b; }
    friend RatMatrix operator*(RatMatrix a, const Rational& s) { return a *= s; }
    friend RatMatrix operator*(const Rational& s, RatMatrix a) { return a *= s; }
    friend RatMatrix operator-(RatMatrix a) { return a *= Rational(-1); }

    friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("matrix product shape mismatch: " + a.shape() + " * " + b.shape());
        RatMatrix p(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Rational& lhs = a(r, k);
                if (sgn(lhs) == 0) continue;
                for (std::size_t c = 0; c < b.cols_; ++c) p(r, c) += lhs * b(k, c);
            }
        return p;
    }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

private:
    void require_same_shape(const RatMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string("matrix ") + op + " shape mismatch: " + shape() + " vs " + o.shape());
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

namespace detail {

using IntRows = std::vector<std::vector<Integer>>;

// Scales every row by the lcm of its denominators; row scaling by positive
// integers preserves rank and the signs of all leading principal minors.
inline IntRows clear_denominators(const RatMatrix& a, const RatMatrix* rhs = nullptr) {
    const std::size_t extra = rhs ? rhs->cols() : 0;
    IntRows m(a.rows(), std::vector<Integer>(a.cols() + extra));
    for (std::size_t r = 0; r < a.rows(); ++r) {
        Integer l = 1;
        for (std::size_t c = 0; c < a.cols(); ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(r, c).get_den_mpz_t());
        for (std::size_t c = 0; c < extra; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), (*rhs)(r, c).get_den_mpz_t());
        for (std::size_t c = 0; c < a.cols(); ++c) m[r][c] = a(r, c).get_num() * (l / a(r, c).get_den());
        for (std::size_t c = 0; c < extra; ++c)
            m[r][a.cols() + c] = (*rhs)(r, c).get_num() * (l / (*rhs)(r, c).get_den());
    }
    return m;
}

// One Bareiss update of rows below `pivot_row` using column `pivot_col`;
// `prev` is the previous pivot, so every division is exact.
inline void bareiss_step(IntRows& m, std::size_t pivot_row, std::size_t pivot_col, const Integer& prev) {
    const Integer& piv = m[pivot_row][pivot_col];
    const std::size_t width = m[pivot_row].size();
    Integer t;
    for (std::size_t i = pivot_row + 1; i < m.size(); ++i) {
        const Integer lead = m[i][pivot_col];
        if (sgn(lead) == 0) {
            // Only the scaling by piv/prev remains.
            for (std::size_t j = pivot_col + 1; j < width; ++j) {
                if (sgn(m[i][j]) == 0) continue;
                t = m[i][j] * piv;
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            continue;
        }
        for (std::size_t j = pivot_col + 1; j < width; ++j) {
            t = m[i][j] * piv - lead * m[pivot_row][j];
            mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        }
        m[i][pivot_col] = 0;
    }
}

} // namespace detail

/// Solves A X = B exactly by fraction-free (Bareiss) elimination.
inline RatMatrix solve(const RatMatrix& a, const RatMatrix& b) {
    if (!a.is_square()) throw std::invalid_argument("solve: matrix not square (" + a.shape() + ")");
    if (b.rows() != a.rows()) throw std::invalid_argument("solve: right-hand side has wrong row count");
    const std::size_t n = a.rows();
    auto m = detail::clear_denominators(a, &b);
    Integer prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && sgn(m[p][k]) == 0) ++p;
        if (p == n) throw SingularMatrix("singular matrix: no pivot in column " + std::to_string(k));
        if (p != k) std::swap(m[p], m[k]);
        detail::bareiss_step(m, k, k, prev);
        prev = m[k][k];
    }
    RatMatrix x(n, b.cols());
    Rational s;
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t i = n; i-- > 0;) {
            s = m[i][n + c];
            for (std::size_t j = i + 1; j < n; ++j)
                if (sgn(m[i][j]) != 0) s -= Rational(m[i][j]) * x(j, c);
            x(i, c) = s / Rational(m[i][i]);
        }
    }
    return x;
}

inline RatMatrix invert(const RatMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("invert: matrix not square (" + a.shape() + ")");
    return solve(a, RatMatrix::identity(a.rows()));
}

inline std::size_t rank(const RatMatrix& a) {
    auto m = detail::clear_denominators(a);
    std::size_t r = 0;
    Integer prev = 1;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && sgn(m[p][c]) == 0) ++p;
        if (p == a.rows()) continue;
        if (p != r) std::swap(m[p], m[r]);
        detail::bareiss_step(m, r, c, prev);
        prev = m[r][c];
        ++r;
    }
    return r;
}

inline Rational determinant(const RatMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("determinant: matrix not square");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    Rational scale = 1;
    for (std::size_t r = 0; r < n; ++r) {
        Integer l = 1;
        for (std::size_t c = 0; c < n; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(r, c).get_den_mpz_t());
        scale *= Rational(l);
    }
    auto m = detail::clear_denominators(a);
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && sgn(m[p][k]) == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            std::swap(m[p], m[k]);
            sign = -sign;
        }
        detail::bareiss_step(m, k, k, prev);
        prev = m[k][k];
    }
    return Rational(sign) * Rational(m[n - 1][n - 1]) / scale;
}

/// True iff every leading principal minor is strictly positive.
inline bool is_positive_definite(const RatMatrix& a) {
    if (!a.is_symmetric()) throw NotSymmetric("is_positive_definite: matrix is not symmetric");
    const std::size_t n = a.rows();
    auto m = detail::clear_denominators(a);
    Integer prev = 1;
    // Without pivoting, the k-th Bareiss pivot is the k-th leading minor of the scaled matrix.
    for (std::size_t k = 0; k < n; ++k) {
        if (sgn(m[k][k]) <= 0) return false;
        detail::bareiss_step(m, k, k, prev);
        prev = m[k][k];
    }
    return true;
}

} // namespace bimops

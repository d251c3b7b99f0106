#pragma once

#include "skein/field.hpp"

#include <cassert>
#include <optional>
#include <utility>
#include <vector>

namespace skein {

// Dense exact matrices. Sizes in this project stay in the low thousands, so
// plain Gaussian elimination over the field is the right tool; no pivoting
// strategy beyond "first nonzero" is needed for exact arithmetic.
template <class F>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : nr_(rows), nc_(cols), a_(static_cast<size_t>(rows) * cols, F(0)) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = F(1);
        return m;
    }

    int rows() const { return nr_; }
    int cols() const { return nc_; }

    F& operator()(int r, int c) {
        assert(r >= 0 && r < nr_ && c >= 0 && c < nc_);
        return a_[static_cast<size_t>(r) * nc_ + c];
    }
    const F& operator()(int r, int c) const {
        assert(r >= 0 && r < nr_ && c >= 0 && c < nc_);
        return a_[static_cast<size_t>(r) * nc_ + c];
    }

    Matrix transposed() const {
        Matrix t(nc_, nr_);
        for (int r = 0; r < nr_; ++r)
            for (int c = 0; c < nc_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        assert(a.nc_ == b.nr_);
        Matrix p(a.nr_, b.nc_);
        for (int i = 0; i < a.nr_; ++i)
            for (int k = 0; k < a.nc_; ++k) {
                const F& x = a(i, k);
                if (is_zero(x)) continue;
                for (int j = 0; j < b.nc_; ++j) {
                    if (is_zero(b(k, j))) continue;
                    p(i, j) += x * b(k, j);
                }
            }
        return p;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.nr_ == b.nr_ && a.nc_ == b.nc_ && a.a_ == b.a_;
    }

private:
    int nr_ = 0, nc_ = 0;
    std::vector<F> a_;
};

// Row-reduce in place to reduced row echelon form. Returns the pivot columns
// (their count is the rank). If `transform` is non-null it must come in as an
// identity-compatible matrix with the same row count; the same row operations
// are applied to it, so on exit transform * original == reduced.
template <class F>
std::vector<int> rref_inplace(Matrix<F>& m, Matrix<F>* transform = nullptr) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int pr = -1;
        for (int r = row; r < m.rows(); ++r)
            if (!is_zero(m(r, col))) { pr = r; break; }
        if (pr < 0) continue;
        if (pr != row) {
            for (int c = 0; c < m.cols(); ++c) std::swap(m(row, c), m(pr, c));
            if (transform)
                for (int c = 0; c < transform->cols(); ++c) std::swap((*transform)(row, c), (*transform)(pr, c));
        }
        F inv = field_inverse(m(row, col));
        for (int c = 0; c < m.cols(); ++c) m(row, c) = m(row, c) * inv;
        if (transform)
            for (int c = 0; c < transform->cols(); ++c) (*transform)(row, c) = (*transform)(row, c) * inv;
        for (int r = 0; r < m.rows(); ++r) {
            if (r == row || is_zero(m(r, col))) continue;
            F f = m(r, col);
            for (int c = 0; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
            if (transform)
                for (int c = 0; c < transform->cols(); ++c) (*transform)(r, c) -= f * (*transform)(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class F>
int rank(Matrix<F> m) {
    return static_cast<int>(rref_inplace(m).size());
}

// Basis of the right null space, one vector (length cols) per non-pivot column.
template <class F>
std::vector<std::vector<F>> kernel_basis(Matrix<F> m) {
    std::vector<int> pivots = rref_inplace(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<std::vector<F>> basis;
    for (int free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<F> v(m.cols(), F(0));
        v[free] = F(1);
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m(static_cast<int>(i), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Incrementally maintained row space. Vectors arrive one at a time (think:
// relation generators); the stored rows are kept mutually reduced, so both
// membership tests and quotient-coordinate reductions are a single forward
// sweep.
template <class F>
class RowSpan {
public:
    explicit RowSpan(int width) : width_(width) {}

    int width() const { return width_; }
    int dim() const { return static_cast<int>(rows_.size()); }

    // v minus its projection onto the span; zero iff v is in the span.
    std::vector<F> reduce(std::vector<F> v) const {
        assert(static_cast<int>(v.size()) == width_);
        for (size_t i = 0; i < rows_.size(); ++i) {
            F f = v[piv_[i]];
            if (is_zero(f)) continue;
            for (int j = 0; j < width_; ++j) v[j] -= f * rows_[i][j];
        }
        return v;
    }

    bool contains(std::vector<F> v) const {
        v = reduce(std::move(v));
        for (const F& x : v)
            if (!is_zero(x)) return false;
        return true;
    }

    // Returns true when v enlarged the span.
    bool insert(std::vector<F> v) {
        v = reduce(std::move(v));
        int p = -1;
        for (int j = 0; j < width_; ++j)
            if (!is_zero(v[j])) { p = j; break; }
        if (p < 0) return false;
        F inv = field_inverse(v[p]);
        for (int j = 0; j < width_; ++j) v[j] = v[j] * inv;
        for (size_t i = 0; i < rows_.size(); ++i) {
            F f = rows_[i][p];
            if (is_zero(f)) continue;
            for (int j = 0; j < width_; ++j) rows_[i][j] -= f * v[j];
        }
        rows_.push_back(std::move(v));
        piv_.push_back(p);
        return true;
    }

private:
    int width_ = 0;
    std::vector<std::vector<F>> rows_;
    std::vector<int> piv_;
};

// One solution of A x = b, if consistent.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F>& a, const std::vector<F>& b) {
    assert(static_cast<int>(b.size()) == a.rows());
    Matrix<F> aug(a.rows(), a.cols() + 1);
    for (int r = 0; r < a.rows(); ++r) {
        for (int c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
        aug(r, a.cols()) = b[r];
    }
    std::vector<int> pivots = rref_inplace(aug);
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt; // row [0 … 0 | 1]
    std::vector<F> x(a.cols(), F(0));
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(static_cast<int>(i), a.cols());
    return x;
}

} // namespace skein

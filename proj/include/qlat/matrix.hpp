#pragma once

#include <cassert>
#include <vector>

#include "qlat/ring.hpp"

namespace qlat {

template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, const T& fill) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    T& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    std::vector<T> col(int j) const {
        std::vector<T> v;
        v.reserve(rows_);
        for (int i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
        return v;
    }
    void set_col(int j, const std::vector<T>& v) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }
    void swap_cols(int a, int b) {
        for (int i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }
    void swap_rows(int a, int b) {
        for (int j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    Matrix block(int r0, int c0, int nr, int nc) const {
        Matrix out(nr, nc, T{});
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
        return out;
    }
    Matrix select_cols(const std::vector<int>& idx) const {
        Matrix out(rows_, static_cast<int>(idx.size()), T{});
        for (int i = 0; i < rows_; ++i)
            for (size_t j = 0; j < idx.size(); ++j) out(i, static_cast<int>(j)) = (*this)(i, idx[j]);
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

using RingMatrix = Matrix<RingElt>;
using RingVector = std::vector<RingElt>;

inline RingMatrix zeros(const RingSpec& r, int rows, int cols) { return RingMatrix(rows, cols, r.zero()); }

inline RingMatrix identity(const RingSpec& r, int n) {
    RingMatrix m = zeros(r, n, n);
    for (int i = 0; i < n; ++i) m(i, i) = r.one();
    return m;
}

template <typename T>
Matrix<T> transpose(const Matrix<T>& a) {
    Matrix<T> t(a.cols(), a.rows(), T{});
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    assert(a.cols() == b.rows());
    Matrix<T> c(a.rows(), b.cols(), a(0, 0) - a(0, 0));
    for (int i = 0; i < a.rows(); ++i)
        for (int l = 0; l < a.cols(); ++l) {
            const T& ail = a(i, l);
            if (ail.is_zero()) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += ail * b(l, j);
        }
    return c;
}

template <typename T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) a(i, j) += b(i, j);
    return a;
}

template <typename T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) a(i, j) -= b(i, j);
    return a;
}

inline RingMatrix scaled(const RingElt& s, RingMatrix a) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) a(i, j) *= s;
    return a;
}

inline RingVector mat_vec(const RingMatrix& a, const RingVector& v) {
    RingVector out(a.rows(), v.front().ring()->zero());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
    return out;
}

// T^t G T, the Gram matrix of the columns of T.
inline RingMatrix congruent(const RingMatrix& g, const RingMatrix& t) { return transpose(t) * (g * t); }

// B(u, v) = u^t G v.
inline RingElt bilinear(const RingMatrix& g, const RingVector& u, const RingVector& v) {
    RingElt s = u.front().ring()->zero();
    for (int i = 0; i < g.rows(); ++i) {
        if (u[i].is_zero()) continue;
        RingElt row = s - s;
        for (int j = 0; j < g.cols(); ++j) row += g(i, j) * v[j];
        s += u[i] * row;
    }
    return s;
}

RingMatrix block_diagonal(const std::vector<RingMatrix>& blocks);
RingMatrix hstack(const RingMatrix& a, const RingMatrix& b);
int min_valuation(const RingMatrix& a);

}  // namespace qlat

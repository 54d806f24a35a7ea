#ifndef SELFSIM_MATRIX_HPP
#define SELFSIM_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "selfsim/errors.hpp"
#include "selfsim/numbers.hpp"

namespace selfsim::exact {

/// Dense row-major matrix over an exact scalar (Int or Rat).
template <class T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), e_(size_t(rows) * cols) {}

    Matrix(std::initializer_list<std::initializer_list<long>> init) {
        rows_ = int(init.size());
        cols_ = rows_ ? int(init.begin()->size()) : 0;
        e_.reserve(size_t(rows_) * cols_);
        for (const auto& row : init) {
            if (int(row.size()) != cols_) fail("ShapeMismatch", "ragged initializer");
            for (long v : row) e_.emplace_back(v);
        }
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& at(int i, int j) { return e_[size_t(i) * cols_ + j]; }
    const T& at(int i, int j) const { return e_[size_t(i) * cols_ + j]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const T& v : e_)
            if (sgn(v) != 0) return false;
        return true;
    }

    bool is_square() const { return rows_ == cols_; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    Matrix operator+(const Matrix& o) const {
        require_same_shape(o);
        Matrix r(rows_, cols_);
        for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] + o.e_[k];
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        require_same_shape(o);
        Matrix r(rows_, cols_);
        for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] - o.e_[k];
        return r;
    }

    Matrix scaled(const T& c) const {
        Matrix r(rows_, cols_);
        for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] * c;
        return r;
    }

    void swap_rows(int a, int b) {
        if (a == b) return;
        for (int j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
    }

    void swap_cols(int a, int b) {
        if (a == b) return;
        for (int i = 0; i < rows_; ++i) std::swap(at(i, a), at(i, b));
    }

private:
    void require_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) fail("ShapeMismatch", "matrix shapes differ");
    }

    int rows_, cols_;
    std::vector<T> e_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

RatMatrix to_rational(const IntMatrix& m);
/// Throws ShapeMismatch when an entry has a denominator.
IntMatrix to_integer(const RatMatrix& m);

/// Product with zero-skipping (the matrices in this project are mostly
/// sparse patterns held densely) and OpenMP over output rows.
RatMatrix mul(const RatMatrix& a, const RatMatrix& b);
IntMatrix mul(const IntMatrix& a, const IntMatrix& b);
/// Plain reference product, kept for the parallel/serial cross-checks.
RatMatrix mul_serial(const RatMatrix& a, const RatMatrix& b);
IntMatrix mul_serial(const IntMatrix& a, const IntMatrix& b);

std::vector<Int> mul_vec(const IntMatrix& m, const std::vector<Int>& v);
std::vector<Int> vec_mul(const std::vector<Int>& v, const IntMatrix& m);

/// Block-diagonal amplification: k copies of m along the diagonal.
RatMatrix amplify(const RatMatrix& m, int k);

RatMatrix kronecker(const RatMatrix& a, const RatMatrix& b);

} // namespace selfsim::exact

#endif

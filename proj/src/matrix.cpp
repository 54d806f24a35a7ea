#include "selfsim/matrix.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace selfsim::exact {

RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = Rat(m.at(i, j));
    return r;
}

IntMatrix to_integer(const RatMatrix& m) {
    IntMatrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (!is_integer(m.at(i, j))) fail("ShapeMismatch", "matrix entry is not an integer");
            r.at(i, j) = m.at(i, j).get_num();
        }
    return r;
}

namespace {

template <class T>
Matrix<T> mul_impl(const Matrix<T>& a, const Matrix<T>& b, bool parallel) {
    if (a.cols() != b.rows()) fail("ShapeMismatch", "inner dimensions differ");
    Matrix<T> r(a.rows(), b.cols());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel && a.rows() > 8)
#endif
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const T& aik = a.at(i, k);
            if (sgn(aik) == 0) continue;
            for (int j = 0; j < b.cols(); ++j) {
                const T& bkj = b.at(k, j);
                if (sgn(bkj) == 0) continue;
                r.at(i, j) += aik * bkj;
            }
        }
    }
    (void)parallel;
    return r;
}

template <class T>
Matrix<T> mul_serial_impl(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) fail("ShapeMismatch", "inner dimensions differ");
    Matrix<T> r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            T acc(0);
            for (int k = 0; k < a.cols(); ++k) acc += a.at(i, k) * b.at(k, j);
            r.at(i, j) = acc;
        }
    return r;
}

} // namespace

RatMatrix mul(const RatMatrix& a, const RatMatrix& b) { return mul_impl(a, b, true); }
IntMatrix mul(const IntMatrix& a, const IntMatrix& b) { return mul_impl(a, b, true); }
RatMatrix mul_serial(const RatMatrix& a, const RatMatrix& b) { return mul_serial_impl(a, b); }
IntMatrix mul_serial(const IntMatrix& a, const IntMatrix& b) { return mul_serial_impl(a, b); }

std::vector<Int> mul_vec(const IntMatrix& m, const std::vector<Int>& v) {
    if (int(v.size()) != m.cols()) fail("ShapeMismatch", "vector length differs from cols");
    std::vector<Int> r(m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r[i] += m.at(i, j) * v[j];
    return r;
}

std::vector<Int> vec_mul(const std::vector<Int>& v, const IntMatrix& m) {
    if (int(v.size()) != m.rows()) fail("ShapeMismatch", "vector length differs from rows");
    std::vector<Int> r(m.cols());
    for (int i = 0; i < m.rows(); ++i) {
        if (sgn(v[i]) == 0) continue;
        for (int j = 0; j < m.cols(); ++j) r[j] += v[i] * m.at(i, j);
    }
    return r;
}

RatMatrix amplify(const RatMatrix& m, int k) {
    RatMatrix r(m.rows() * k, m.cols() * k);
    for (int c = 0; c < k; ++c)
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) {
                if (sgn(m.at(i, j)) == 0) continue;
                r.at(c * m.rows() + i, c * m.cols() + j) = m.at(i, j);
            }
    return r;
}

RatMatrix kronecker(const RatMatrix& a, const RatMatrix& b) {
    RatMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            if (sgn(a.at(i, j)) == 0) continue;
            for (int p = 0; p < b.rows(); ++p)
                for (int q = 0; q < b.cols(); ++q) {
                    if (sgn(b.at(p, q)) == 0) continue;
                    r.at(i * b.rows() + p, j * b.cols() + q) = a.at(i, j) * b.at(p, q);
                }
        }
    return r;
}

} // namespace selfsim::exact

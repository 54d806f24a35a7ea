#include "selfsim/hnf.hpp"

namespace selfsim::exact {

namespace {

void add_row_multiple(IntMatrix& m, int dst, int src, const Int& q) {
    if (sgn(q) == 0) return;
    for (int j = 0; j < m.cols(); ++j) m.at(dst, j) -= q * m.at(src, j);
}

void negate_row(IntMatrix& m, int i) {
    for (int j = 0; j < m.cols(); ++j) m.at(i, j) = -m.at(i, j);
}

Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

} // namespace

HnfResult hnf(const IntMatrix& m) {
    HnfResult res;
    res.h = m;
    res.u = IntMatrix::identity(m.rows());
    IntMatrix& h = res.h;
    IntMatrix& u = res.u;
    const int rows = m.rows(), cols = m.cols();

    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        // shrink column c below row r to a single nonzero via gcd steps
        while (true) {
            int best = -1;
            for (int i = r; i < rows; ++i) {
                if (sgn(h.at(i, c)) == 0) continue;
                if (best < 0 || mpz_cmpabs(h.at(i, c).get_mpz_t(), h.at(best, c).get_mpz_t()) < 0) best = i;
            }
            if (best < 0) break;
            h.swap_rows(r, best);
            u.swap_rows(r, best);
            bool clean = true;
            for (int i = r + 1; i < rows; ++i) {
                if (sgn(h.at(i, c)) == 0) continue;
                Int q = floor_div(h.at(i, c), h.at(r, c));
                add_row_multiple(h, i, r, q);
                add_row_multiple(u, i, r, q);
                if (sgn(h.at(i, c)) != 0) clean = false;
            }
            if (clean) break;
        }
        if (sgn(h.at(r, c)) == 0) continue;
        if (sgn(h.at(r, c)) < 0) {
            negate_row(h, r);
            negate_row(u, r);
        }
        for (int i = 0; i < r; ++i) {
            Int q = floor_div(h.at(i, c), h.at(r, c));
            add_row_multiple(h, i, r, q);
            add_row_multiple(u, i, r, q);
        }
        res.pivot_cols.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

namespace {

void add_col_multiple(IntMatrix& m, int dst, int src, const Int& q) {
    if (sgn(q) == 0) return;
    for (int i = 0; i < m.rows(); ++i) m.at(i, dst) -= q * m.at(i, src);
}

} // namespace

SnfResult snf(const IntMatrix& m) {
    SnfResult res;
    res.s = m;
    res.u = IntMatrix::identity(m.rows());
    res.v = IntMatrix::identity(m.cols());
    IntMatrix& s = res.s;
    const int rows = m.rows(), cols = m.cols();
    const int t = std::min(rows, cols);

    for (int k = 0; k < t; ++k) {
        // move a nonzero of smallest magnitude into (k,k)
        auto find_pivot = [&]() -> std::pair<int, int> {
            std::pair<int, int> best{-1, -1};
            for (int i = k; i < rows; ++i)
                for (int j = k; j < cols; ++j) {
                    if (sgn(s.at(i, j)) == 0) continue;
                    if (best.first < 0 ||
                        mpz_cmpabs(s.at(i, j).get_mpz_t(), s.at(best.first, best.second).get_mpz_t()) < 0)
                        best = {i, j};
                }
            return best;
        };
        while (true) {
            auto [pi, pj] = find_pivot();
            if (pi < 0) goto done; // all remaining entries zero
            if (pi != k) {
                s.swap_rows(k, pi);
                res.u.swap_rows(k, pi);
            }
            if (pj != k) {
                s.swap_cols(k, pj);
                res.v.swap_cols(k, pj);
            }
            bool dirty = false;
            for (int i = k + 1; i < rows; ++i) {
                if (sgn(s.at(i, k)) == 0) continue;
                Int q = s.at(i, k) / s.at(k, k);
                add_row_multiple(s, i, k, q);
                add_row_multiple(res.u, i, k, q);
                if (sgn(s.at(i, k)) != 0) dirty = true;
            }
            for (int j = k + 1; j < cols; ++j) {
                if (sgn(s.at(k, j)) == 0) continue;
                Int q = s.at(k, j) / s.at(k, k);
                add_col_multiple(s, j, k, q);
                add_col_multiple(res.v, j, k, q);
                if (sgn(s.at(k, j)) != 0) dirty = true;
            }
            if (dirty) continue;
            // divisibility fix-up: fold any entry the pivot misses back in
            bool fixed = true;
            for (int i = k + 1; i < rows && fixed; ++i)
                for (int j = k + 1; j < cols && fixed; ++j) {
                    if (sgn(s.at(i, j)) == 0) continue;
                    Int rem = s.at(i, j) % s.at(k, k);
                    if (sgn(rem) != 0) {
                        add_row_multiple(s, k, i, Int(-1));
                        add_row_multiple(res.u, k, i, Int(-1));
                        fixed = false;
                    }
                }
            if (fixed) break;
        }
        if (sgn(s.at(k, k)) < 0) {
            negate_row(s, k);
            negate_row(res.u, k);
        }
    }
done:
    return res;
}

} // namespace selfsim::exact

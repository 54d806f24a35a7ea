#include "selfsim/elimination.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace selfsim::exact {

namespace {

// One-step Bareiss: after eliminating with pivot (r,c), every entry is the
// exact quotient by the previous pivot, so the matrix stays integral.
int bareiss_rank(IntMatrix m, bool parallel) {
    const int rows = m.rows(), cols = m.cols();
    int r = 0;
    Int prev(1);
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (sgn(m.at(i, c)) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        m.swap_rows(r, piv);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel && rows - r > 16)
#endif
        for (int i = r + 1; i < rows; ++i) {
            if (sgn(m.at(i, c)) == 0) {
                // row already clear in this column; still needs rescaling
                for (int j = c + 1; j < cols; ++j) {
                    if (sgn(m.at(i, j)) == 0) continue;
                    Int t = m.at(i, j) * m.at(r, c);
                    mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                    m.at(i, j) = t;
                }
                continue;
            }
            for (int j = c + 1; j < cols; ++j) {
                Int t = m.at(i, j) * m.at(r, c) - m.at(i, c) * m.at(r, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                m.at(i, j) = t;
            }
            m.at(i, c) = 0;
        }
        (void)parallel;
        prev = m.at(r, c);
        ++r;
    }
    return r;
}

IntMatrix clear_denominators(const RatMatrix& m) {
    IntMatrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i) {
        Int l(1);
        for (int j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m.at(i, j).get_den().get_mpz_t());
        for (int j = 0; j < m.cols(); ++j) {
            Rat s = m.at(i, j) * Rat(l);
            r.at(i, j) = s.get_num();
        }
    }
    return r;
}

} // namespace

namespace {

// Gaussian elimination on sparse rows, pivoting on the shortest row.
// Exact over Q, so the result is the true rank; this only exists because
// compressions of big block patterns are a few nonzeros per row.
int sparse_rank(const RatMatrix& m) {
    std::vector<std::vector<std::pair<int, Rat>>> rows;
    for (int i = 0; i < m.rows(); ++i) {
        std::vector<std::pair<int, Rat>> row;
        for (int j = 0; j < m.cols(); ++j)
            if (sgn(m.at(i, j)) != 0) row.emplace_back(j, m.at(i, j));
        if (!row.empty()) rows.push_back(std::move(row));
    }
    int r = 0;
    while (!rows.empty()) {
        size_t best = 0;
        for (size_t i = 1; i < rows.size(); ++i)
            if (rows[i].size() < rows[best].size()) best = i;
        std::vector<std::pair<int, Rat>> piv = std::move(rows[best]);
        rows.erase(rows.begin() + long(best));
        ++r;
        const int pc = piv.front().first;
        const Rat pv = piv.front().second;
        std::vector<std::vector<std::pair<int, Rat>>> next;
        next.reserve(rows.size());
        for (auto& row : rows) {
            Rat coef(0);
            for (const auto& [c, v] : row)
                if (c == pc) {
                    coef = v / pv;
                    break;
                }
            if (sgn(coef) == 0) {
                next.push_back(std::move(row));
                continue;
            }
            std::vector<std::pair<int, Rat>> merged;
            merged.reserve(row.size() + piv.size());
            size_t a = 0, b = 0;
            while (a < row.size() || b < piv.size()) {
                if (b == piv.size() || (a < row.size() && row[a].first < piv[b].first)) {
                    merged.push_back(std::move(row[a++]));
                } else if (a == row.size() || piv[b].first < row[a].first) {
                    merged.emplace_back(piv[b].first, -coef * piv[b].second);
                    ++b;
                } else {
                    Rat val = row[a].second - coef * piv[b].second;
                    if (sgn(val) != 0) merged.emplace_back(row[a].first, std::move(val));
                    ++a;
                    ++b;
                }
            }
            if (!merged.empty()) next.push_back(std::move(merged));
        }
        rows = std::move(next);
    }
    return r;
}

bool mostly_zero(const RatMatrix& m) {
    if (m.rows() < 64) return false;
    size_t nnz = 0;
    const size_t cap = size_t(m.rows()) * size_t(m.cols()) / 8;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (sgn(m.at(i, j)) != 0 && ++nnz > cap) return false;
    return true;
}

} // namespace

int rank(const IntMatrix& m) { return bareiss_rank(m, true); }
int rank_serial(const IntMatrix& m) { return bareiss_rank(m, false); }
int rank(const RatMatrix& m) {
    if (mostly_zero(m)) return sparse_rank(m);
    return bareiss_rank(clear_denominators(m), true);
}
int rank_serial(const RatMatrix& m) { return bareiss_rank(clear_denominators(m), false); }

Int det(const IntMatrix& input) {
    if (!input.is_square()) fail("ShapeMismatch", "determinant of a non-square matrix");
    const int n = input.rows();
    if (n == 0) return Int(1);
    IntMatrix m = input;
    Int prev(1);
    int sign = 1;
    for (int r = 0; r < n; ++r) {
        int piv = -1;
        for (int i = r; i < n; ++i)
            if (sgn(m.at(i, r)) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return Int(0);
        if (piv != r) {
            m.swap_rows(r, piv);
            sign = -sign;
        }
        for (int i = r + 1; i < n; ++i) {
            for (int j = r + 1; j < n; ++j) {
                Int t = m.at(i, j) * m.at(r, r) - m.at(i, r) * m.at(r, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                m.at(i, j) = t;
            }
            m.at(i, r) = 0;
        }
        prev = m.at(r, r);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

} // namespace selfsim::exact

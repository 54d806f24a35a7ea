#include "selfsim/lattice.hpp"

namespace selfsim::exact {

std::vector<Int> Lattice::basis_row(int i) const {
    std::vector<Int> r(ambient_dim);
    for (int j = 0; j < ambient_dim; ++j) r[j] = basis.at(i, j);
    return r;
}

Lattice lattice_from_rows(const IntMatrix& rows) {
    HnfResult h = hnf(rows);
    Lattice l;
    l.ambient_dim = rows.cols();
    l.basis = IntMatrix(h.rank, rows.cols());
    for (int i = 0; i < h.rank; ++i)
        for (int j = 0; j < rows.cols(); ++j) l.basis.at(i, j) = h.h.at(i, j);
    return l;
}

Lattice kernel_basis(const IntMatrix& m) {
    // Row-reduce m^T with a unimodular u: the u-rows matching zero rows of
    // h = u m^T span exactly { v : m v^T = 0 }, which is saturated.
    HnfResult h = hnf(m.transpose());
    const int c = m.cols();
    const int k = c - h.rank;
    IntMatrix gens(k, c);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < c; ++j) gens.at(i, j) = h.u.at(h.rank + i, j);
    return lattice_from_rows(gens);
}

bool same_lattice(const Lattice& a, const Lattice& b) {
    return a.ambient_dim == b.ambient_dim && a.basis == b.basis;
}

std::optional<std::vector<Int>> solve_in_lattice(const Lattice& l, const std::vector<Int>& v) {
    if (int(v.size()) != l.ambient_dim) fail("ShapeMismatch", "vector has wrong ambient dimension");
    std::vector<Int> rem = v;
    std::vector<Int> coords(l.rank());
    for (int i = 0; i < l.rank(); ++i) {
        int p = 0;
        while (p < l.ambient_dim && sgn(l.basis.at(i, p)) == 0) ++p;
        if (p == l.ambient_dim) return std::nullopt; // zero basis row cannot happen
        Int q, r;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rem[p].get_mpz_t(), l.basis.at(i, p).get_mpz_t());
        if (sgn(r) != 0) return std::nullopt;
        coords[i] = q;
        if (sgn(q) != 0)
            for (int j = 0; j < l.ambient_dim; ++j) rem[j] -= q * l.basis.at(i, j);
    }
    for (const Int& x : rem)
        if (sgn(x) != 0) return std::nullopt;
    return coords;
}

} // namespace selfsim::exact

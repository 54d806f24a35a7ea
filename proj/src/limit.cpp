#include "selfsim/limit.hpp"

#include "selfsim/elimination.hpp"

namespace selfsim::dimension {

using exact::Int;
using exact::Rat;
using exact::RatMatrix;

K1Metadata k1_metadata(const ifs::MapSpec& spec) {
    K1Metadata m;
    if (spec.name == "tent") {
        m.known = true;
        m.statement = "K1 of every finite core and of the limit core is trivial";
        m.citation = "Kajiwara-Watatani, dimension groups for self-similar maps";
    } else if (spec.name == "gasket") {
        m.known = true;
        m.statement = "K1 of the limit core is the countable free abelian group Z^inf";
        m.citation = "Kajiwara-Watatani, dimension groups for self-similar maps";
    } else if (spec.name == "fullshift2") {
        m.known = true;
        m.statement = "the limit core is the UHF algebra M_2^inf with trivial K1";
        m.citation = "standard UHF K-theory";
    }
    return m;
}

namespace {

/// phi(v) lies in the integer span of the c-vectors iff the triangular
/// coefficients k_0 = phi_0 and k_m = N^m (phi_m - phi_{m-1}) are integers
/// and reproduce every branch row.
bool in_c_span(const ifs::MapSpec& spec, const RatMatrix& phi) {
    if (phi.rows() == 0) return true;
    const int r_max = phi.cols() - 1;
    std::vector<Rat> k(static_cast<size_t>(r_max) + 1);
    k[0] = phi.at(0, 0);
    Int npow(1);
    for (int m = 1; m <= r_max; ++m) {
        npow *= spec.branch_count;
        k[size_t(m)] = (phi.at(0, m) - phi.at(0, m - 1)) * Rat(npow);
    }
    for (const Rat& x : k)
        if (!exact::is_integer(x)) return false;
    // verify against every branch row: phi_{b,r} = sum_{m<=r} k_m / N^m
    for (int bi = 0; bi < phi.rows(); ++bi) {
        Rat acc(0);
        Int np(1);
        for (int r = 0; r <= r_max; ++r) {
            acc += k[size_t(r)] / Rat(np);
            if (acc != phi.at(bi, r)) return false;
            np *= spec.branch_count;
        }
    }
    return true;
}

bool columns_independent(const RatMatrix& m) { return exact::rank(m) == m.cols(); }

} // namespace

LimitReport limit_report(const ifs::MapSpec& spec, int n_max, int r_max, long long size_guard) {
    LimitReport rep;
    rep.n_max = n_max;
    rep.r_max = r_max;
    rep.k1 = k1_metadata(spec);

    std::vector<K0Presentation> pres;
    for (int n = 0; n <= n_max; ++n) {
        pres.push_back(k0_finite(spec, n));
        rep.ranks.push_back(pres.back().lattice.rank());
    }

    for (int n = 0; n < n_max; ++n) {
        rep.inclusions.push_back(inclusion_matrix(spec, n, size_guard));
        rep.betas.push_back(beta_matrix(spec, n, size_guard));
        if (!rep.inclusions.back().injective) rep.inclusions_injective = false;
    }

    // tau^{(b,r)} and tau^inf invariance under every inclusion, checked on
    // every canonical basis vector with both sides evaluated directly.
    for (int n = 1; n < n_max && rep.traces_invariant; ++n) {
        const K0Presentation& pn = pres[size_t(n)];
        const K0Presentation& pn1 = pres[size_t(n) + 1];
        if (pn.trivial) continue;
        for (int c = 0; c < pn.lattice.rank() && rep.traces_invariant; ++c) {
            std::vector<Int> v = pn.lattice.basis_row(c);
            std::vector<Int> img(static_cast<size_t>(pn1.ambient_dim()));
            for (int j = 0; j < pn1.ambient_dim(); ++j)
                img[size_t(j)] = rep.inclusions[size_t(n)].raw_images.at(c, j);
            for (const auto& b : spec.branch_set)
                for (int r = 0; r <= pn.n - 1; ++r) {
                    Rat lhs = trace_value(spec, pn1, img, b, r, size_guard);
                    Rat rhs = trace_value(spec, pn, v, b, r, size_guard);
                    if (lhs != rhs) {
                        rep.traces_invariant = false;
                        rep.trace_note = "tau(" + b + "," + std::to_string(r) + ") not preserved at level " +
                                         std::to_string(n);
                    }
                }
            if (rep.traces_invariant &&
                trace_infinity(spec, pn1, img) != trace_infinity(spec, pn, v)) {
                rep.traces_invariant = false;
                rep.trace_note = "tau(inf) not preserved at level " + std::to_string(n);
            }
        }
    }

    // phi images of the canonical bases
    for (int n = 0; n <= n_max; ++n) {
        const K0Presentation& p = pres[size_t(n)];
        RatMatrix images(int(spec.branch_set.size()) * (r_max + 1), p.lattice.rank());
        RatMatrix table(images.rows() + 1, p.lattice.rank());
        bool span = true;
        for (int c = 0; c < p.lattice.rank(); ++c) {
            std::vector<Int> v =
                p.trivial ? std::vector<Int>{Int(1)} : p.lattice.basis_row(c);
            RatMatrix phi = phi_image(spec, p, v, r_max, size_guard);
            int row = 0;
            for (int bi = 0; bi < phi.rows(); ++bi)
                for (int r = 0; r <= r_max; ++r) images.at(row++, c) = phi.at(bi, r);
            for (int i = 0; i < images.rows(); ++i) table.at(i, c) = images.at(i, c);
            table.at(images.rows(), c) = trace_infinity(spec, p, v);
            if (!in_c_span(spec, phi)) span = false;
        }
        rep.phi_independent.push_back(spec.branch_set.empty() ? true : columns_independent(images));
        rep.phi_in_c_span.push_back(span);
        rep.level_traces.push_back(std::move(table));
    }

    // c_m = phi([p^m]) for m = 0..n_max
    rep.c_vectors = RatMatrix((n_max + 1) * std::max<int>(1, int(spec.branch_set.size())), r_max + 1);
    for (int m = 0; m <= n_max; ++m) {
        RatMatrix phi = phi_image(spec, pres[size_t(m)], rank_one_class(pres[size_t(m)]), r_max, size_guard);
        for (int bi = 0; bi < phi.rows(); ++bi)
            for (int r = 0; r <= r_max; ++r)
                rep.c_vectors.at(m * std::max(1, phi.rows()) + bi, r) = phi.at(bi, r);
    }

    // divisibility probe: push the level-1 rank-one class to stage m and
    // test whether it is divisible by 2 inside the stage lattice
    std::vector<Int> cur = rank_one_class(pres.size() > 1 ? pres[1] : pres[0]);
    for (int m = 1; m <= n_max; ++m) {
        if (m > 1) cur = inclusion_image_ambient(spec, pres[size_t(m) - 1], pres[size_t(m)], cur, size_guard);
        auto coords = exact::solve_in_lattice(pres[size_t(m)].lattice, cur);
        if (!coords) fail("NotInLattice", "pushed class escaped the stage lattice");
        bool even = true;
        for (const Int& x : *coords)
            if (sgn(Int(x % 2)) != 0) even = false;
        rep.two_x_solvable.push_back(even);
    }

    return rep;
}

} // namespace selfsim::dimension

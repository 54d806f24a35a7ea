#include "selfsim/traces.hpp"

namespace selfsim::dimension {

using exact::Int;
using exact::Rat;
using exact::RatMatrix;

namespace {

Rat inv_power(int base, int exp) {
    Int d(1);
    for (int i = 0; i < exp; ++i) d *= base;
    Rat r(Int(1), d);
    r.canonicalize();
    return r;
}

/// Direct functional at a level with n >= r+1.
Rat direct_value(const ifs::MapSpec& spec, const K0Presentation& p, const std::vector<Int>& v,
                 const std::string& base, int r) {
    const int pp = p.n - r;
    const std::string point = spec.h_iterate(base, pp);
    int coord = p.coord_of(point, base, pp);
    if (coord < 0) fail("Internal", "missing singular block for trace functional");
    return Rat(v[size_t(coord)]) * inv_power(spec.branch_count, r);
}

} // namespace

Rat trace_value(const ifs::MapSpec& spec, const K0Presentation& p, const std::vector<Int>& v,
                const std::string& base, int r, long long size_guard) {
    if (!spec.is_branched(base)) fail("UnknownPoint", "'" + base + "' is not a branched point");
    if (r <= p.n - 1) return direct_value(spec, p, v, base, r);
    K0Presentation cur_p = p;
    std::vector<Int> cur = v;
    while (cur_p.n < r + 1) {
        K0Presentation next = k0_finite(spec, cur_p.n + 1);
        cur = inclusion_image_ambient(spec, cur_p, next, cur, size_guard);
        cur_p = std::move(next);
    }
    return direct_value(spec, cur_p, cur, base, r);
}

Rat trace_infinity(const ifs::MapSpec& spec, const K0Presentation& p, const std::vector<Int>& v) {
    auto rank = p.common_rank(v);
    if (!rank) fail("RankMismatch", "weighted ranks differ across singular points");
    return Rat(*rank) * inv_power(spec.branch_count, p.n);
}

RatMatrix phi_image(const ifs::MapSpec& spec, const K0Presentation& p, const std::vector<Int>& v,
                    int r_max, long long size_guard) {
    RatMatrix out(int(spec.branch_set.size()), r_max + 1);
    K0Presentation cur_p = p;
    std::vector<Int> cur = v;
    for (int r = 0; r <= r_max; ++r) {
        while (cur_p.n < r + 1) {
            K0Presentation next = k0_finite(spec, cur_p.n + 1);
            cur = inclusion_image_ambient(spec, cur_p, next, cur, size_guard);
            cur_p = std::move(next);
        }
        for (int bi = 0; bi < int(spec.branch_set.size()); ++bi)
            out.at(bi, r) = direct_value(spec, cur_p, cur, spec.branch_set[size_t(bi)], r);
    }
    return out;
}

std::vector<Int> rank_one_class(const K0Presentation& p) {
    if (p.trivial) return {Int(1)};
    std::vector<Int> v(static_cast<size_t>(p.ambient_dim()));
    for (const auto& point : p.singular) v[size_t(p.compact_coord(point))] = 1;
    return v;
}

TraceTable trace_pairing(const ifs::MapSpec& spec, int n, int r_max, long long size_guard,
                         bool use_paper_basis) {
    K0Presentation p = k0_finite(spec, n);
    TraceTable t;
    exact::IntMatrix basis = p.lattice.basis;
    if (use_paper_basis) {
        auto nb = paper_basis(spec, p);
        if (!nb) fail("UnknownBuiltin", "no printed basis for '" + spec.name + "'");
        basis = nb->rows;
        t.column_names = nb->names;
    } else {
        for (int i = 0; i < basis.rows(); ++i) t.column_names.push_back("g" + std::to_string(i + 1));
    }
    for (const auto& b : spec.branch_set)
        for (int r = 0; r <= r_max; ++r)
            t.row_names.push_back("tau(" + b + "," + std::to_string(r) + ")");
    t.row_names.push_back("tau(inf)");

    t.values = RatMatrix(int(t.row_names.size()), basis.rows());
    for (int c = 0; c < basis.rows(); ++c) {
        std::vector<Int> v(static_cast<size_t>(basis.cols()));
        for (int j = 0; j < basis.cols(); ++j) v[size_t(j)] = basis.at(c, j);
        RatMatrix phi = phi_image(spec, p, v, r_max, size_guard);
        int row = 0;
        for (int bi = 0; bi < phi.rows(); ++bi)
            for (int r = 0; r <= r_max; ++r) t.values.at(row++, c) = phi.at(bi, r);
        t.values.at(row, c) = trace_infinity(spec, p, v);
    }
    return t;
}

} // namespace selfsim::dimension

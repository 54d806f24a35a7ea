#include "selfsim/k0.hpp"

#include <algorithm>

#include "selfsim/elimination.hpp"

namespace selfsim::dimension {

using exact::Int;
using exact::IntMatrix;
using exact::Rat;
using exact::RatMatrix;
using exact::pow_ll;
using fiber::Block;
using fiber::BlockKind;

int K0Presentation::coord_of(const std::string& point, const std::string& base, int p) const {
    for (int c = 0; c < ambient_dim(); ++c) {
        const auto& [pi, bi] = ambient[size_t(c)];
        if (singular[size_t(pi)] != point) continue;
        const Block& b = fibers[size_t(pi)].blocks[size_t(bi)];
        if (b.kind == BlockKind::Singular && b.base == base && b.p == p) return c;
    }
    return -1;
}

int K0Presentation::compact_coord(const std::string& point) const {
    for (int c = 0; c < ambient_dim(); ++c) {
        const auto& [pi, bi] = ambient[size_t(c)];
        if (singular[size_t(pi)] != point) continue;
        if (fibers[size_t(pi)].blocks[size_t(bi)].kind == BlockKind::Compact) return c;
    }
    return -1;
}

std::vector<Int> K0Presentation::identity_class() const {
    if (trivial) fail("Internal", "trivial presentation has no block coordinates");
    std::vector<Int> v(static_cast<size_t>(ambient_dim()));
    for (int c = 0; c < ambient_dim(); ++c) v[size_t(c)] = long(block(c).algebra_size);
    return v;
}

exact::Int K0Presentation::weighted_rank(int point_index, const std::vector<Int>& v) const {
    Int r(0);
    for (int c = 0; c < ambient_dim(); ++c)
        if (ambient[size_t(c)].first == point_index) r += Int(block(c).weight) * v[size_t(c)];
    return r;
}

std::optional<exact::Int> K0Presentation::common_rank(const std::vector<Int>& v) const {
    if (trivial) return v.at(0);
    Int r = weighted_rank(0, v);
    for (int pi = 1; pi < int(singular.size()); ++pi)
        if (weighted_rank(pi, v) != r) return std::nullopt;
    return r;
}

K0Presentation k0_finite(const ifs::MapSpec& spec, int n) {
    K0Presentation p;
    p.n = n;
    p.singular = ifs::singular_points(spec, n);
    if (p.singular.empty()) {
        p.trivial = true;
        p.rank_rows = IntMatrix(1, 1);
        p.rank_rows.at(0, 0) = 1;
        IntMatrix one(1, 1);
        one.at(0, 0) = 1;
        p.lattice = exact::lattice_from_rows(one);
        return p;
    }
    for (const auto& x : p.singular)
        p.fibers.push_back(fiber::fiber_decomposition(spec, ifs::PointRef::special(x), n));
    for (int pi = 0; pi < int(p.fibers.size()); ++pi)
        for (int bi = 0; bi < int(p.fibers[size_t(pi)].blocks.size()); ++bi)
            p.ambient.emplace_back(pi, bi);

    const int s = int(p.singular.size());
    p.rank_rows = IntMatrix(s, p.ambient_dim());
    for (int c = 0; c < p.ambient_dim(); ++c)
        p.rank_rows.at(p.ambient[size_t(c)].first, c) = p.block(c).weight;

    if (s == 1) {
        p.lattice = exact::lattice_from_rows(IntMatrix::identity(p.ambient_dim()));
    } else {
        IntMatrix diffs(s - 1, p.ambient_dim());
        for (int i = 1; i < s; ++i)
            for (int c = 0; c < p.ambient_dim(); ++c)
                diffs.at(i - 1, c) = p.rank_rows.at(0, c) - p.rank_rows.at(i, c);
        p.lattice = exact::kernel_basis(diffs);
    }
    return p;
}

namespace {

std::vector<Int> trivial_identity(const ifs::MapSpec& spec, int n) {
    Int v(1);
    for (int i = 0; i < n; ++i) v *= spec.branch_count;
    return {v};
}

std::vector<Int> identity_class_of(const ifs::MapSpec& spec, const K0Presentation& p) {
    if (p.trivial) return trivial_identity(spec, p.n);
    return p.identity_class();
}

} // namespace

std::optional<NamedBasis> paper_basis(const ifs::MapSpec& spec, const K0Presentation& p) {
    NamedBasis nb;
    const int dim = p.ambient_dim();
    auto unit_rows = [&](int count) { nb.rows = IntMatrix(count, dim); };

    if (spec.name == "tent") {
        // e_i = C(1,1/2,1)@1 + r_i@0 with r_i = C(0,1/2,i+1) for i < n and
        // r_n = compact@0; e_{n+1} = compact@1 + r_1@0. Levels 0 and 1
        // degenerate (no fiber at 0, or no singular points at all).
        const int n = p.n;
        if (p.trivial) {
            nb.names = {"e1"};
            nb.rows = IntMatrix(1, 1);
            nb.rows.at(0, 0) = 1;
            return nb;
        }
        unit_rows(n + 1);
        for (int i = 1; i <= n + 1; ++i) nb.names.push_back("e" + std::to_string(i));
        const int c_at_1 = p.coord_of("1", "half", 1);
        const int comp_1 = p.compact_coord("1");
        const int comp_0 = p.compact_coord("0");
        for (int i = 1; i <= n; ++i) {
            nb.rows.at(i - 1, c_at_1) = 1;
            if (n >= 2) {
                int coord = (i < n) ? p.coord_of("0", "half", i + 1) : comp_0;
                nb.rows.at(i - 1, coord) = 1;
            }
        }
        nb.rows.at(n, comp_1) = 1;
        if (n >= 2) nb.rows.at(n, p.coord_of("0", "half", 2)) = 1;
        return nb;
    }

    if (spec.name == "gasket") {
        // a_i = block-p=i@P + compact@Q + compact@R (a_{n+1} compact@P),
        // b_i = p=1@P + p=i@Q + compact@R, c_i = p=1@P + compact@Q + p=i@R.
        const int n = p.n;
        if (p.trivial) {
            nb.names = {"a1"};
            nb.rows = IntMatrix(1, 1);
            nb.rows.at(0, 0) = 1;
            return nb;
        }
        unit_rows(3 * n + 1);
        auto block_at = [&](const std::string& pt, int i) {
            if (i == n + 1) return p.compact_coord(pt);
            for (int c = 0; c < dim; ++c) {
                const Block& b = p.block(c);
                if (p.singular[size_t(p.ambient[size_t(c)].first)] == pt &&
                    b.kind == BlockKind::Singular && b.p == i)
                    return c;
            }
            return -1;
        };
        int row = 0;
        for (int i = 1; i <= n + 1; ++i, ++row) {
            nb.names.push_back("a" + std::to_string(i));
            nb.rows.at(row, block_at("P", i)) = 1;
            nb.rows.at(row, block_at("Q", n + 1)) = 1;
            nb.rows.at(row, block_at("R", n + 1)) = 1;
        }
        for (int i = 1; i <= n; ++i, ++row) {
            nb.names.push_back("b" + std::to_string(i));
            nb.rows.at(row, block_at("P", 1)) = 1;
            nb.rows.at(row, block_at("Q", i)) = 1;
            nb.rows.at(row, block_at("R", n + 1)) = 1;
        }
        for (int i = 1; i <= n; ++i, ++row) {
            nb.names.push_back("c" + std::to_string(i));
            nb.rows.at(row, block_at("P", 1)) = 1;
            nb.rows.at(row, block_at("Q", n + 1)) = 1;
            nb.rows.at(row, block_at("R", i)) = 1;
        }
        return nb;
    }

    if (spec.name == "fullshift2") {
        nb.names = {"u1"};
        nb.rows = IntMatrix(1, 1);
        nb.rows.at(0, 0) = 1;
        return nb;
    }

    return std::nullopt;
}

exact::RatMatrix RealizedFamily::generic(long long dim) const {
    RatMatrix d(static_cast<int>(dim * amplification), static_cast<int>(dim * amplification));
    long long r = exact::to_ll(rank);
    for (long long i = 0; i < r; ++i) d.at(int(i), int(i)) = 1;
    return d;
}

RealizedFamily realize_class(const ifs::MapSpec& spec, const K0Presentation& p,
                             const std::vector<Int>& v, long long size_guard, long long slot_offset) {
    if (int(v.size()) != (p.trivial ? 1 : p.ambient_dim()))
        fail("ShapeMismatch", "class vector has wrong length");
    for (const Int& x : v)
        if (sgn(x) < 0) fail("NegativeEntry", "class vector must be non-negative to realize");
    auto rank = p.common_rank(v);
    if (!rank) fail("RankMismatch", "weighted ranks differ across singular points");

    RealizedFamily fam;
    fam.rank = *rank;
    if (p.trivial) {
        long long dim0 = pow_ll(spec.branch_count, p.n);
        fam.amplification = int((exact::to_ll(*rank) + dim0 - 1) / dim0);
        if (fam.amplification < 1) fam.amplification = 1;
        return fam;
    }
    const long long dim = pow_ll(spec.branch_count, p.n);
    // smallest amplification with room for every block's slots
    long long k = 1;
    for (int c = 0; c < p.ambient_dim(); ++c) {
        const Block& b = p.block(c);
        long long top = exact::to_ll(v[size_t(c)]) + slot_offset;
        k = std::max(k, (top + b.algebra_size - 1) / b.algebra_size);
    }
    k = std::max(k, (exact::to_ll(*rank) + dim - 1) / dim);
    fam.amplification = int(k);
    if (dim * k > size_guard)
        fail("SizeGuardExceeded", "realization needs dimension " + std::to_string(dim * k));

    for (int pi = 0; pi < int(p.singular.size()); ++pi) {
        const auto& dec = p.fibers[size_t(pi)];
        RatMatrix t(static_cast<int>(dim * k), static_cast<int>(dim * k));
        for (int c = 0; c < p.ambient_dim(); ++c) {
            if (p.ambient[size_t(c)].first != pi) continue;
            int bi = p.ambient[size_t(c)].second;
            long long m = exact::to_ll(v[size_t(c)]);
            for (long long s = 0; s < m; ++s)
                fiber::add_minimal_projection(spec, dec, bi, slot_offset + s, int(k), t);
        }
        fam.at.emplace(p.singular[size_t(pi)], std::move(t));
    }
    return fam;
}

namespace {

RatMatrix fiber_matrix_for_point(const K0Presentation& pn, const RealizedFamily& fam,
                                 const ifs::PointRef& y, long long dim) {
    if (!y.is_generic() && !pn.trivial) {
        auto it = fam.at.find(*y.label);
        if (it != fam.at.end()) return it->second;
    }
    return fam.generic(dim);
}

/// Level-(n+1) fiber of the embedded family at point P: block diagonal
/// over the digit j of the level-n fibers at gamma_j(P), equal matrices
/// at digits sharing a branched target.
RatMatrix assemble_embedding(const ifs::MapSpec& spec, const K0Presentation& pn,
                             const RealizedFamily& fam, const std::string& point) {
    const int N = spec.branch_count;
    const long long dim = pow_ll(N, pn.n);
    const int k = fam.amplification;
    RatMatrix a(static_cast<int>(k * N * dim), static_cast<int>(k * N * dim));
    for (int j = 0; j < N; ++j) {
        const std::string* ylabel = spec.gamma_target(point, j);
        ifs::PointRef y = ylabel ? ifs::PointRef::special(*ylabel) : ifs::PointRef::generic();
        RatMatrix t = fiber_matrix_for_point(pn, fam, y, dim);
        for (int c = 0; c < k; ++c)
            for (int c2 = 0; c2 < k; ++c2)
                for (long long w = 0; w < dim; ++w)
                    for (long long w2 = 0; w2 < dim; ++w2) {
                        const Rat& val = t.at(int(c * dim + w), int(c2 * dim + w2));
                        if (sgn(val) == 0) continue;
                        a.at(int(c * (N * dim) + j * dim + w), int(c2 * (N * dim) + j * dim + w2)) = val;
                    }
    }
    return a;
}

std::vector<Int> add_scaled(std::vector<Int> v, const std::vector<Int>& w, const Int& c) {
    for (size_t i = 0; i < v.size(); ++i) v[i] += c * w[i];
    return v;
}

using Assembler = RatMatrix (*)(const ifs::MapSpec&, const K0Presentation&, const RealizedFamily&,
                                const std::string&);

RatMatrix assemble_beta(const ifs::MapSpec& spec, const K0Presentation& pn, const RealizedFamily& fam,
                        const std::string& point) {
    const int N = spec.branch_count;
    const long long dim = pow_ll(N, pn.n);
    ifs::PointRef p = spec.has_point(point) ? ifs::PointRef::special(point) : ifs::PointRef::generic();
    RatMatrix t = fiber_matrix_for_point(pn, fam, p, dim);
    RatMatrix q(N, N);
    Rat e(1, N);
    e.canonicalize();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) q.at(i, j) = e;
    // copy-major layout survives the product: (c*dim + w) x N + d
    return exact::kronecker(t, q);
}

std::vector<Int> image_ambient(const ifs::MapSpec& spec, const K0Presentation& pn,
                               const K0Presentation& pn1, const std::vector<Int>& v,
                               long long size_guard, long forced_offset, long long slot_offset,
                               Assembler assemble, const Int& trivial_factor) {
    if (int(v.size()) != (pn.trivial ? 1 : pn.ambient_dim()))
        fail("ShapeMismatch", "class vector has wrong length");
    if (pn1.trivial) return {trivial_factor * v.at(0)};

    Int min_entry(0);
    for (const Int& x : v) min_entry = std::min(min_entry, x);
    Int offset = (forced_offset >= 0) ? Int(forced_offset) : -min_entry;

    std::vector<Int> id_n = identity_class_of(spec, pn);
    std::vector<Int> shifted = add_scaled(v, id_n, offset);
    RealizedFamily fam = realize_class(spec, pn, shifted, size_guard, slot_offset);

    std::vector<Int> out;
    for (size_t pi = 0; pi < pn1.singular.size(); ++pi) {
        RatMatrix a = assemble(spec, pn, fam, pn1.singular[pi]);
        std::vector<Int> mult = fiber::decompose_projection(spec, pn1.fibers[pi], a, size_guard);
        out.insert(out.end(), mult.begin(), mult.end());
    }
    if (sgn(offset) != 0) {
        // the embedding is unital, so the offset leaves along the identity
        std::vector<Int> id_image;
        if (assemble == &assemble_embedding) {
            id_image = identity_class_of(spec, pn1);
        } else {
            RealizedFamily idfam = realize_class(spec, pn, identity_class_of(spec, pn), size_guard);
            for (size_t pi = 0; pi < pn1.singular.size(); ++pi) {
                RatMatrix a = assemble(spec, pn, idfam, pn1.singular[pi]);
                std::vector<Int> mult = fiber::decompose_projection(spec, pn1.fibers[pi], a, size_guard);
                id_image.insert(id_image.end(), mult.begin(), mult.end());
            }
        }
        out = add_scaled(out, id_image, -offset);
    }
    return out;
}

} // namespace

std::vector<Int> inclusion_image_ambient(const ifs::MapSpec& spec, const K0Presentation& pn,
                                         const K0Presentation& pn1, const std::vector<Int>& v,
                                         long long size_guard, long forced_offset, long long slot_offset) {
    return image_ambient(spec, pn, pn1, v, size_guard, forced_offset, slot_offset, &assemble_embedding,
                         Int(spec.branch_count));
}

std::vector<Int> beta_image_ambient(const ifs::MapSpec& spec, const K0Presentation& pn,
                                    const K0Presentation& pn1, const std::vector<Int>& v,
                                    long long size_guard, long forced_offset, long long slot_offset) {
    return image_ambient(spec, pn, pn1, v, size_guard, forced_offset, slot_offset, &assemble_beta, Int(1));
}

std::optional<std::vector<Int>> solve_in_rows(const IntMatrix& rows, const std::vector<Int>& v) {
    exact::HnfResult h = exact::hnf(rows);
    if (h.rank != rows.rows()) fail("ShapeMismatch", "basis rows are dependent");
    exact::Lattice l;
    l.ambient_dim = rows.cols();
    l.basis = IntMatrix(h.rank, rows.cols());
    for (int i = 0; i < h.rank; ++i)
        for (int j = 0; j < rows.cols(); ++j) l.basis.at(i, j) = h.h.at(i, j);
    auto y = exact::solve_in_lattice(l, v);
    if (!y) return std::nullopt;
    return exact::vec_mul(*y, h.u);
}

namespace {

LevelMap level_map(const ifs::MapSpec& spec, int n, long long size_guard, bool beta) {
    K0Presentation pn = k0_finite(spec, n);
    K0Presentation pn1 = k0_finite(spec, n + 1);
    const IntMatrix& basis = pn.lattice.basis;
    const int cols = pn.trivial ? 1 : basis.rows();

    LevelMap lm;
    lm.raw_images = IntMatrix(cols, pn1.trivial ? 1 : pn1.ambient_dim());
    lm.canonical = IntMatrix(pn1.lattice.rank(), cols);
    for (int c = 0; c < cols; ++c) {
        std::vector<Int> v;
        if (pn.trivial) {
            v = {Int(1)};
        } else {
            v = pn.lattice.basis_row(c);
        }
        std::vector<Int> img = beta ? beta_image_ambient(spec, pn, pn1, v, size_guard)
                                    : inclusion_image_ambient(spec, pn, pn1, v, size_guard);
        for (int j = 0; j < int(img.size()); ++j) lm.raw_images.at(c, j) = img[size_t(j)];
        auto coords = exact::solve_in_lattice(pn1.lattice, img);
        if (!coords) fail("NotInLattice", "embedding image escaped the level-" + std::to_string(n + 1) +
                                              " lattice (internal inconsistency)");
        for (int i = 0; i < int(coords->size()); ++i) lm.canonical.at(i, c) = (*coords)[size_t(i)];
    }
    lm.injective = exact::rank(lm.canonical) == cols;

    auto bn = paper_basis(spec, pn);
    auto bn1 = paper_basis(spec, pn1);
    if (bn && bn1) {
        IntMatrix m(bn1->rows.rows(), bn->rows.rows());
        for (int c = 0; c < bn->rows.rows(); ++c) {
            std::vector<Int> v(static_cast<size_t>(bn->rows.cols()));
            for (int j = 0; j < bn->rows.cols(); ++j) v[size_t(j)] = bn->rows.at(c, j);
            std::vector<Int> img = beta ? beta_image_ambient(spec, pn, pn1, v, size_guard)
                                        : inclusion_image_ambient(spec, pn, pn1, v, size_guard);
            auto coords = solve_in_rows(bn1->rows, img);
            if (!coords) fail("NotInLattice", "image not in the span of the printed basis");
            for (int i = 0; i < int(coords->size()); ++i) m.at(i, c) = (*coords)[size_t(i)];
        }
        lm.paper = std::move(m);
    }
    return lm;
}

} // namespace

LevelMap inclusion_matrix(const ifs::MapSpec& spec, int n, long long size_guard) {
    return level_map(spec, n, size_guard, false);
}

LevelMap beta_matrix(const ifs::MapSpec& spec, int n, long long size_guard) {
    return level_map(spec, n, size_guard, true);
}

} // namespace selfsim::dimension

#include "selfsim/fiber.hpp"

#include <cstdlib>
#include <map>
#include <set>

#include "selfsim/elimination.hpp"

namespace selfsim::fiber {

using exact::Int;
using exact::Rat;
using exact::RatMatrix;
using exact::pow_ll;

std::string Block::tag() const {
    if (kind == BlockKind::Compact) return "compact";
    std::string w;
    for (int d : prefix) w += std::to_string(d);
    return "C(" + base + ",p=" + std::to_string(p) + (w.empty() ? "" : ",w=" + w) + ")";
}

long long word_value(int branch_count, const std::vector<int>& word) {
    long long v = 0;
    for (int d : word) v = v * branch_count + d;
    return v;
}

std::vector<int> word_digits(int branch_count, long long value, int length) {
    std::vector<int> w(length);
    for (int k = length - 1; k >= 0; --k) {
        w[size_t(k)] = int(value % branch_count);
        value /= branch_count;
    }
    return w;
}

long long default_size_guard() {
    if (const char* env = std::getenv("SELFSIM_SIZE_GUARD")) {
        long long v = std::atoll(env);
        if (v > 0) return v;
    }
    return 4096;
}

WordClasses endpoint_classes(const ifs::MapSpec& spec, const ifs::PointRef& point, int n) {
    const int N = spec.branch_count;
    const long long total = pow_ll(N, n);
    WordClasses wc;
    wc.n = n;
    wc.word_count = total;
    wc.class_of.assign(size_t(total), -1);

    std::map<long long, std::vector<long long>> by_rep;
    for (long long w = 0; w < total; ++w) {
        // walk the trajectory; record the unique branch hit, if any
        const std::string* cur = point.is_generic() ? nullptr : &*point.label;
        int branch_step = 0;
        const std::string* branch_base = nullptr;
        long long rest = w;
        for (int k = 1; k <= n && cur; ++k) {
            int digit = int((w / pow_ll(N, n - k)) % N);
            const std::string* next = spec.gamma_target(*cur, digit);
            if (next && spec.is_branched(*next)) {
                branch_step = k;
                branch_base = next;
            }
            cur = next;
        }
        (void)rest;
        long long rep = w;
        if (branch_step > 0) {
            const auto& entry = spec.entry_set.at(*branch_base);
            int digit = int((w / pow_ll(N, n - branch_step)) % N);
            rep = w + (long long)(entry.front() - digit) * pow_ll(N, n - branch_step);
        }
        by_rep[rep].push_back(w);
    }
    for (auto& [rep, members] : by_rep) {
        long long id = (long long)wc.members.size();
        for (long long w : members) wc.class_of[size_t(w)] = id;
        wc.members.push_back(std::move(members));
    }
    return wc;
}

FiberDecomposition fiber_decomposition(const ifs::MapSpec& spec, const ifs::PointRef& point, int n) {
    const int N = spec.branch_count;
    FiberDecomposition dec;
    dec.point = point;
    dec.n = n;
    dec.dim = pow_ll(N, n);

    Block compact;
    compact.kind = BlockKind::Compact;
    compact.algebra_size = exact::to_ll(ifs::backward_count(spec, point, n));
    compact.weight = 1;
    dec.blocks.push_back(std::move(compact));
    if (point.is_generic()) return dec;

    for (int p = 1; p <= n; ++p)
        for (const auto& base : spec.branch_set) {
            if (spec.h_iterate(base, p) != *point.label) continue;
            Block b;
            b.kind = BlockKind::Singular;
            b.base = base;
            b.p = p;
            b.algebra_size = pow_ll(N, n - p);
            b.weight = spec.branch_index.at(base) - 1;
            // forced index word along x_k = h^{p-k}(base)
            std::string from = *point.label;
            for (int k = 1; k < p; ++k) {
                std::string to = spec.h_iterate(base, p - k);
                int found = -1;
                for (const auto& [j, dst] : spec.gamma.at(from))
                    if (dst == to) {
                        found = j;
                        break;
                    }
                if (found < 0) fail("Internal", "broken branch trajectory at '" + from + "'");
                b.prefix.push_back(found);
                from = to;
            }
            dec.blocks.push_back(std::move(b));
        }

    // dimension identity N^n = d_n + sum (e-1) N^{n-p}
    long long sum = dec.blocks[0].algebra_size;
    for (size_t i = 1; i < dec.blocks.size(); ++i)
        sum += (long long)dec.blocks[i].weight * dec.blocks[i].algebra_size;
    if (sum != dec.dim) fail("Internal", "fiber dimension identity failed at " + point.display());
    return dec;
}

namespace {

void check_guard(long long dim, long long guard) {
    if (dim > guard)
        fail("SizeGuardExceeded", "matrix dimension " + std::to_string(dim) + " exceeds guard " +
                                      std::to_string(guard) + " (raise --size-guard or SELFSIM_SIZE_GUARD)");
}

/// Positions prefix . entry . suffix for one singular block, as flat indices.
long long block_position(const ifs::MapSpec& spec, const Block& b, int n, int entry, long long suffix) {
    const int N = spec.branch_count;
    long long v = word_value(N, b.prefix);
    v = v * N + entry;
    return v * pow_ll(N, n - b.p) + suffix;
}

} // namespace

FiberMatrices build_fiber_matrices(const ifs::MapSpec& spec, const FiberDecomposition& dec,
                                   long long size_guard, int amplification) {
    const long long dim = dec.dim;
    check_guard(dim * amplification, size_guard);
    const long long adim = dim * amplification;

    FiberMatrices fm;
    fm.amplification = amplification;

    WordClasses wc = endpoint_classes(spec, dec.point, dec.n);
    fm.q = RatMatrix(int(adim), int(adim));
    for (const auto& members : wc.members) {
        Rat v(1, (long)members.size());
        v.canonicalize();
        for (int c = 0; c < amplification; ++c)
            for (long long w : members)
                for (long long w2 : members) fm.q.at(int(c * dim + w), int(c * dim + w2)) = v;
    }

    for (size_t bi = 1; bi < dec.blocks.size(); ++bi) {
        const Block& b = dec.blocks[bi];
        const auto& entries = spec.entry_set.at(b.base);
        const int e = int(entries.size());
        RatMatrix z(static_cast<int>(adim), static_cast<int>(adim));
        Rat off(-1, e);
        off.canonicalize();
        Rat diag = Rat(1) + off;
        for (int c = 0; c < amplification; ++c)
            for (long long t = 0; t < b.algebra_size; ++t)
                for (int l = 0; l < e; ++l)
                    for (int l2 = 0; l2 < e; ++l2) {
                        long long row = c * dim + block_position(spec, b, dec.n, entries[size_t(l)], t);
                        long long col = c * dim + block_position(spec, b, dec.n, entries[size_t(l2)], t);
                        z.at(int(row), int(col)) = (l == l2) ? diag : off;
                    }
        fm.central.push_back(std::move(z));
    }
    return fm;
}

void add_minimal_projection(const ifs::MapSpec& spec, const FiberDecomposition& dec, int block_index,
                            long long slot, int amplification, exact::RatMatrix& into) {
    const long long dim = dec.dim;
    const Block& b = dec.blocks.at(size_t(block_index));
    if (into.rows() != dim * amplification || into.cols() != dim * amplification)
        fail("ShapeMismatch", "accumulator has the wrong size");

    if (b.kind == BlockKind::Compact) {
        WordClasses wc = endpoint_classes(spec, dec.point, dec.n);
        long long d = (long long)wc.members.size();
        long long copy = slot / d, cls = slot % d;
        if (copy >= amplification) fail("ShapeMismatch", "minimal projection slot out of range");
        const auto& members = wc.members[size_t(cls)];
        Rat v(1, (long)members.size());
        v.canonicalize();
        for (long long w : members)
            for (long long w2 : members) into.at(int(copy * dim + w), int(copy * dim + w2)) += v;
        return;
    }

    const auto& entries = spec.entry_set.at(b.base);
    const int e = int(entries.size());
    long long copy = slot / b.algebra_size, suffix = slot % b.algebra_size;
    if (copy >= amplification) fail("ShapeMismatch", "minimal projection slot out of range");
    Rat off(-1, e);
    off.canonicalize();
    Rat diag = Rat(1) + off;
    for (int l = 0; l < e; ++l)
        for (int l2 = 0; l2 < e; ++l2) {
            long long row = copy * dim + block_position(spec, b, dec.n, entries[size_t(l)], suffix);
            long long col = copy * dim + block_position(spec, b, dec.n, entries[size_t(l2)], suffix);
            into.at(int(row), int(col)) += (l == l2) ? diag : off;
        }
}

exact::RatMatrix minimal_projection(const ifs::MapSpec& spec, const FiberDecomposition& dec,
                                    int block_index, long long slot, int amplification) {
    RatMatrix m(static_cast<int>(dec.dim * amplification), static_cast<int>(dec.dim * amplification));
    add_minimal_projection(spec, dec, block_index, slot, amplification, m);
    return m;
}

exact::RatMatrix pi_embed(int branch_count, int q, const std::vector<std::vector<int>>& positions,
                          const exact::RatMatrix& t) {
    const long long inner = pow_ll(branch_count, q);
    if (t.rows() != inner || t.cols() != inner) fail("ShapeMismatch", "block has wrong size for pi");
    if (positions.empty()) fail("ShapeMismatch", "pi needs at least one position");
    const int p = int(positions.front().size());
    std::set<long long> seen;
    const long long dim = pow_ll(branch_count, p + q);
    RatMatrix m(static_cast<int>(dim), static_cast<int>(dim));
    for (const auto& word : positions) {
        if (int(word.size()) != p) fail("ShapeMismatch", "pi positions must have equal length");
        long long base = word_value(branch_count, word) * inner;
        if (!seen.insert(base).second) fail("DuplicatePosition", "repeated pi position");
        for (long long i = 0; i < inner; ++i)
            for (long long j = 0; j < inner; ++j) {
                const Rat& v = t.at(int(i), int(j));
                if (sgn(v) != 0) m.at(int(base + i), int(base + j)) = v;
            }
    }
    return m;
}

exact::RatMatrix sigma_embed(int branch_count, int q, const std::vector<int>& word_i,
                             const std::vector<int>& word_j, const exact::RatMatrix& t) {
    const long long inner = pow_ll(branch_count, q);
    if (t.rows() != inner || t.cols() != inner) fail("ShapeMismatch", "block has wrong size for sigma");
    if (word_i.size() != word_j.size()) fail("ShapeMismatch", "sigma words must have equal length");
    const int p = int(word_i.size());
    long long bi = word_value(branch_count, word_i) * inner;
    long long bj = word_value(branch_count, word_j) * inner;
    if (bi == bj) fail("DuplicatePosition", "sigma needs two distinct positions");
    const long long dim = pow_ll(branch_count, p + q);
    RatMatrix m(static_cast<int>(dim), static_cast<int>(dim));
    for (long long i = 0; i < inner; ++i)
        for (long long j = 0; j < inner; ++j) {
            const Rat& v = t.at(int(i), int(j));
            if (sgn(v) == 0) continue;
            m.at(int(bi + i), int(bi + j)) = v;
            m.at(int(bi + i), int(bj + j)) = v;
            m.at(int(bj + i), int(bi + j)) = v;
            m.at(int(bj + i), int(bj + j)) = v;
        }
    return m;
}

std::vector<exact::Int> decompose_projection(const ifs::MapSpec& spec, const FiberDecomposition& dec,
                                             const exact::RatMatrix& t, long long size_guard) {
    if (t.rows() != t.cols()) fail("ShapeMismatch", "projection must be square");
    if (t.rows() % dec.dim != 0) fail("ShapeMismatch", "matrix size is not a multiple of the fiber size");
    const int k = int(t.rows() / dec.dim);

    if (mul(t, t) != t || t.transpose() != t) fail("NotAProjection", "matrix is not a symmetric idempotent");

    FiberMatrices fm = build_fiber_matrices(spec, dec, size_guard, k);
    RatMatrix qt = mul(fm.q, t);
    if (qt != mul(t, fm.q)) fail("NotInFiberAlgebra", "projection does not commute with Q");
    for (const auto& z : fm.central)
        if (mul(z, t) != mul(t, z)) fail("NotInFiberAlgebra", "projection does not commute with a central z");

    std::vector<Int> mult;
    mult.emplace_back(exact::rank(mul(qt, fm.q)));
    for (size_t bi = 1; bi < dec.blocks.size(); ++bi) {
        const RatMatrix& z = fm.central[bi - 1];
        int r = exact::rank(mul(mul(z, t), z));
        int w = dec.blocks[bi].weight;
        if (r % w != 0) fail("NotInFiberAlgebra", "block compression rank is not a weight multiple");
        mult.emplace_back(r / w);
    }
    return mult;
}

std::vector<exact::Int> identity_multiplicities(const FiberDecomposition& dec) {
    std::vector<Int> v;
    v.emplace_back(long(dec.blocks[0].algebra_size));
    for (size_t i = 1; i < dec.blocks.size(); ++i) v.emplace_back(long(dec.blocks[i].algebra_size));
    return v;
}

} // namespace selfsim::fiber

// Acceptance suite: one check per shipped guarantee, each printed as a
// single PASS/FAIL line. Run with --criterion N for one of them, --list
// to enumerate. Exit code is the number of failing checks.

#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "reference_data.hpp"
#include "selfsim/elimination.hpp"
#include "selfsim/limit.hpp"

using namespace selfsim;
using dimension::K0Presentation;
using exact::Int;
using exact::Rat;
using exact::RatMatrix;
using exact::rat;
using ifs::PointRef;

namespace {

constexpr long long kGuard = 1 << 14;

struct Ctx {
    std::ostringstream log;
    bool ok = true;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            log << "      " << what << "\n";
        }
    }
};

std::multiset<long long> block_sizes(const fiber::FiberDecomposition& dec) {
    std::multiset<long long> s;
    for (const auto& b : dec.blocks) s.insert(b.algebra_size);
    return s;
}

std::string show_sizes(const std::multiset<long long>& s) {
    std::ostringstream os;
    for (long long v : s) os << v << " ";
    return os.str();
}

std::vector<Int> row_of(const exact::IntMatrix& m, int i) {
    std::vector<Int> v(static_cast<size_t>(m.cols()));
    for (int j = 0; j < m.cols(); ++j) v[size_t(j)] = m.at(i, j);
    return v;
}

void compare_matrices(Ctx& c, const exact::IntMatrix& got, const exact::IntMatrix& want,
                      const std::string& label) {
    if (got.rows() != want.rows() || got.cols() != want.cols()) {
        c.expect(false, label + ": shape " + std::to_string(got.rows()) + "x" +
                            std::to_string(got.cols()) + " vs " + std::to_string(want.rows()) + "x" +
                            std::to_string(want.cols()));
        return;
    }
    for (int i = 0; i < got.rows(); ++i)
        for (int j = 0; j < got.cols(); ++j)
            if (got.at(i, j) != want.at(i, j))
                c.expect(false, label + ": entry (" + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ") computed " +
                                    exact::to_string(got.at(i, j)) + " vs expected " +
                                    exact::to_string(want.at(i, j)));
}

// ---- criterion bodies -------------------------------------------------

void c1_tent_fibers(Ctx& c) {
    const auto& t = ifs::builtin("tent");
    for (int n = 1; n <= 6; ++n) {
        auto at1 = block_sizes(fiber::fiber_decomposition(t, PointRef::special("1"), n));
        std::multiset<long long> want1{exact::pow_ll(2, n - 1), exact::pow_ll(2, n - 1)};
        c.expect(at1 == want1, "x=1 n=" + std::to_string(n) + ": got " + show_sizes(at1));
        if (n >= 2) {
            auto at0 = block_sizes(fiber::fiber_decomposition(t, PointRef::special("0"), n));
            std::multiset<long long> want0{exact::pow_ll(2, n - 1) + 1};
            for (int p = 0; p <= n - 2; ++p) want0.insert(exact::pow_ll(2, p));
            c.expect(at0 == want0, "x=0 n=" + std::to_string(n) + ": got " + show_sizes(at0));
        }
        auto gen = block_sizes(fiber::fiber_decomposition(t, PointRef::generic(), n));
        c.expect(gen == std::multiset<long long>{exact::pow_ll(2, n)},
                 "generic n=" + std::to_string(n));
    }
}

void c2_gasket_fibers(Ctx& c) {
    const auto& g = ifs::builtin("gasket");
    for (int n = 1; n <= 4; ++n) {
        std::multiset<long long> want{(exact::pow_ll(3, n) + 1) / 2};
        for (int p = 1; p <= n; ++p) want.insert(exact::pow_ll(3, p - 1));
        for (const auto* pt : {"P", "Q", "R"}) {
            auto dec = fiber::fiber_decomposition(g, PointRef::special(pt), n);
            c.expect(block_sizes(dec) == want,
                     std::string(pt) + " n=" + std::to_string(n) + ": got " + show_sizes(block_sizes(dec)));
            for (int p = 1; p <= n; ++p) {
                const auto& b = dec.blocks[size_t(p)];
                std::string expect_base = pt == std::string("P") ? "T"
                                          : pt == std::string("Q") ? (p % 2 ? "S" : "U")
                                                                   : (p % 2 ? "U" : "S");
                c.expect(b.base == expect_base, std::string(pt) + " n=" + std::to_string(n) + " p=" +
                                                    std::to_string(p) + ": chain tag " + b.base);
            }
        }
    }
}

void c3_dimension_identity(Ctx& c) {
    for (const auto* name : {"tent", "gasket", "fullshift2"}) {
        const auto& spec = ifs::builtin(name);
        int n_max = spec.branch_count == 2 ? 6 : 4;
        for (int n = 1; n <= n_max; ++n)
            for (const auto& x : ifs::singular_points(spec, n)) {
                auto dec = fiber::fiber_decomposition(spec, PointRef::special(x), n);
                long long sum = dec.blocks[0].algebra_size;
                for (size_t i = 1; i < dec.blocks.size(); ++i)
                    sum += (long long)dec.blocks[i].weight * dec.blocks[i].algebra_size;
                c.expect(sum == dec.dim, std::string(name) + " " + x + " n=" + std::to_string(n));
                c.expect(Int(long(dec.blocks[0].algebra_size)) ==
                             ifs::backward_count(spec, PointRef::special(x), n),
                         std::string(name) + " " + x + " compact size vs d_n");
            }
    }
}

void c4_fiber_matrix_invariants(Ctx& c) {
    for (const auto* name : {"tent", "gasket"}) {
        const auto& spec = ifs::builtin(name);
        int n_max = spec.branch_count == 2 ? 6 : 4;
        for (int n = 1; n <= n_max; ++n)
            for (const auto& x : ifs::singular_points(spec, n)) {
                auto dec = fiber::fiber_decomposition(spec, PointRef::special(x), n);
                auto fm = fiber::build_fiber_matrices(spec, dec, kGuard);
                std::string at = std::string(name) + " " + x + " n=" + std::to_string(n);
                c.expect(mul(fm.q, fm.q) == fm.q && fm.q.transpose() == fm.q, at + ": Q projection");
                c.expect(exact::rank(fm.q) == int(dec.blocks[0].algebra_size), at + ": rank Q = d_n");
                RatMatrix sum = fm.q;
                for (size_t i = 0; i < fm.central.size(); ++i) {
                    const auto& z = fm.central[i];
                    c.expect(mul(z, z) == z && z.transpose() == z, at + ": z projection");
                    c.expect(mul(fm.q, z).is_zero() && mul(z, fm.q).is_zero(), at + ": Q z orthogonal");
                    for (size_t j = i + 1; j < fm.central.size(); ++j)
                        c.expect(mul(z, fm.central[j]).is_zero(), at + ": z z' orthogonal");
                    sum = sum + z;
                }
                c.expect(sum == RatMatrix::identity(int(dec.dim)), at + ": unit decomposition");
            }
    }
}

void c5_k0_ranks(Ctx& c) {
    for (int n = 0; n <= 6; ++n)
        c.expect(dimension::k0_finite(ifs::builtin("tent"), n).lattice.rank() == n + 1,
                 "tent n=" + std::to_string(n));
    for (int n = 0; n <= 4; ++n)
        c.expect(dimension::k0_finite(ifs::builtin("gasket"), n).lattice.rank() == 3 * n + 1,
                 "gasket n=" + std::to_string(n));
    for (int n = 0; n <= 6; ++n)
        c.expect(dimension::k0_finite(ifs::builtin("fullshift2"), n).lattice.rank() == 1,
                 "fullshift2 n=" + std::to_string(n));
}

void c6_tent_inclusions(Ctx& c) {
    for (int n = 1; n <= 4; ++n) {
        auto lm = dimension::inclusion_matrix(ifs::builtin("tent"), n, kGuard);
        compare_matrices(c, *lm.paper, refdata::tent_inclusion_published(n),
                         "n=" + std::to_string(n));
    }
    if (!c.ok)
        c.log << "      note: the computed columns are the rule-by-rule images of the printed basis\n"
                 "      (subdiagonal plus final-ones for e_1..e_n, and -e_1+e_2+e_{n+1}+e_{n+2} for\n"
                 "      e_{n+1}); they preserve the trace pairing, while the published closed form\n"
                 "      does not for n >= 2. The two agree exactly at n = 1.\n";
}

void c7_gasket_inclusion(Ctx& c) {
    for (int n = 1; n <= 3; ++n) {
        auto lm = dimension::inclusion_matrix(ifs::builtin("gasket"), n, kGuard);
        c.expect(exact::rank(lm.canonical) == 3 * n + 1,
                 "column rank at n=" + std::to_string(n));
        if (n == 3)
            compare_matrices(c, *lm.paper, refdata::gasket_inclusion_3_4_published(), "n=3");
    }
    if (!c.ok)
        c.log << "      note: computed b-columns place the shifted unit in the c-rows and vice\n"
                 "      versa (the fiber at Q assembles the level-n fiber at R and conversely);\n"
                 "      the published matrix couples b to b and c to c.\n";
}

void c8_trace_pairing(Ctx& c) {
    const int r_max = 6;
    const auto& t = ifs::builtin("tent");
    // phi of the rank-one constant classes
    for (int n = 0; n <= 5; ++n) {
        auto p = dimension::k0_finite(t, n);
        RatMatrix phi = dimension::phi_image(t, p, dimension::rank_one_class(p), r_max, kGuard);
        for (int r = 0; r <= r_max; ++r) {
            Rat want = r < n ? rat(0) : rat(1, long(exact::pow_ll(2, n)));
            c.expect(phi.at(0, r) == want, "phi([p^" + std::to_string(n) + "]) at r=" + std::to_string(r));
        }
    }
    // invariance under every inclusion, all built-ins
    for (const auto* name : {"tent", "gasket", "fullshift2"}) {
        const auto& spec = ifs::builtin(name);
        int n_max = spec.branch_count == 2 ? 5 : 3;
        for (int n = 1; n < n_max; ++n) {
            auto pn = dimension::k0_finite(spec, n);
            auto pn1 = dimension::k0_finite(spec, n + 1);
            if (pn.trivial) continue;
            for (int k = 0; k < pn.lattice.rank(); ++k) {
                auto v = pn.lattice.basis_row(k);
                auto img = dimension::inclusion_image_ambient(spec, pn, pn1, v, kGuard);
                for (const auto& b : spec.branch_set)
                    for (int r = 0; r <= n - 1; ++r)
                        c.expect(dimension::trace_value(spec, pn1, img, b, r, kGuard) ==
                                     dimension::trace_value(spec, pn, v, b, r, kGuard),
                                 std::string(name) + " tau(" + b + "," + std::to_string(r) +
                                     ") at level " + std::to_string(n));
                c.expect(dimension::trace_infinity(spec, pn1, img) ==
                             dimension::trace_infinity(spec, pn, v),
                         std::string(name) + " tau(inf) at level " + std::to_string(n));
            }
        }
    }
    // integer independence of the phi images of the tent bases
    for (int n = 1; n <= 5; ++n) {
        auto p = dimension::k0_finite(t, n);
        RatMatrix images(r_max + 1, p.lattice.rank());
        for (int k = 0; k < p.lattice.rank(); ++k) {
            RatMatrix phi = dimension::phi_image(t, p, p.lattice.basis_row(k), r_max, kGuard);
            for (int r = 0; r <= r_max; ++r) images.at(r, k) = phi.at(0, r);
        }
        c.expect(exact::rank(images) == p.lattice.rank(),
                 "phi images dependent at level " + std::to_string(n));
    }
}

void c9_endomorphism(Ctx& c) {
    const auto& t = ifs::builtin("tent");
    for (int n = 0; n <= 4; ++n) {
        auto pn = dimension::k0_finite(t, n);
        auto pn1 = dimension::k0_finite(t, n + 1);
        auto img = dimension::beta_image_ambient(t, pn, pn1, dimension::rank_one_class(pn), kGuard);
        c.expect(img == dimension::rank_one_class(pn1), "tent beta([p^" + std::to_string(n) + "])");
    }
    const auto& f = ifs::builtin("fullshift2");
    for (int n = 0; n <= 4; ++n)
        c.expect(dimension::beta_matrix(f, n, kGuard).canonical == exact::IntMatrix{{1}},
                 "fullshift2 beta stage " + std::to_string(n));
    auto rep_f = dimension::limit_report(f, 5, 3, kGuard);
    for (int m = 2; m <= 5; ++m)
        c.expect(rep_f.two_x_solvable[size_t(m) - 1], "fullshift2 2x=c1 at stage " + std::to_string(m));
    auto rep_t = dimension::limit_report(t, 5, 3, kGuard);
    for (int m = 1; m <= 5; ++m)
        c.expect(!rep_t.two_x_solvable[size_t(m) - 1], "tent 2x=c1 solvable at stage " + std::to_string(m));
}

void c10_oracles(Ctx& c) {
    // backward counts against pairwise word merging
    for (const auto* name : {"tent", "gasket", "fullshift2"}) {
        const auto& spec = ifs::builtin(name);
        for (int n = 0; n <= 5; ++n) {
            for (const auto& x : spec.points)
                c.expect(ifs::backward_count(spec, PointRef::special(x), n) ==
                             oracles::backward_count_bruteforce(spec, PointRef::special(x), n),
                         std::string(name) + " d_n(" + x + ") n=" + std::to_string(n));
            c.expect(ifs::backward_count(spec, PointRef::generic(), n) ==
                         oracles::backward_count_bruteforce(spec, PointRef::generic(), n),
                     std::string(name) + " d_n(generic) n=" + std::to_string(n));
        }
    }
    // 100 randomized block-sum projections per built-in
    std::mt19937 rng(20240229);
    for (const auto* name : {"tent", "gasket", "fullshift2"}) {
        const auto& spec = ifs::builtin(name);
        int n = spec.branch_count == 2 ? 4 : 2;
        std::vector<PointRef> pts;
        for (const auto& x : ifs::singular_points(spec, n)) pts.push_back(PointRef::special(x));
        if (pts.empty()) pts.push_back(PointRef::generic());
        for (int trial = 0; trial < 100; ++trial) {
            const auto& pt = pts[trial % pts.size()];
            auto dec = fiber::fiber_decomposition(spec, pt, n);
            RatMatrix t(int(dec.dim), int(dec.dim));
            Int expected(0);
            for (int bi = 0; bi < int(dec.blocks.size()); ++bi) {
                long long cap = dec.blocks[size_t(bi)].algebra_size;
                long long m = (long long)(rng() % (unsigned long long)(cap + 1));
                for (long long s = 0; s < m; ++s) fiber::add_minimal_projection(spec, dec, bi, s, 1, t);
                expected += Int(long(m)) * dec.blocks[size_t(bi)].weight;
            }
            bool good = Int(exact::rank(t)) == expected;
            if (good) {
                auto mult = fiber::decompose_projection(spec, dec, t, kGuard);
                Int total(0);
                for (size_t i = 0; i < mult.size(); ++i) total += mult[i] * dec.blocks[i].weight;
                good = total == expected;
            }
            c.expect(good, std::string(name) + " random projection trial " + std::to_string(trial));
            if (!good) break;
        }
    }
    // functoriality: every basis representative embeds independently of
    // the realization
    for (const auto* name : {"tent", "gasket", "fullshift2"}) {
        const auto& spec = ifs::builtin(name);
        int n_max = spec.branch_count == 2 ? 4 : 2;
        for (int n = 1; n <= n_max; ++n) {
            auto pn = dimension::k0_finite(spec, n);
            auto pn1 = dimension::k0_finite(spec, n + 1);
            for (int k = 0; k < pn.lattice.rank(); ++k) {
                auto v = pn.trivial ? std::vector<Int>{Int(1)} : pn.lattice.basis_row(k);
                auto a = dimension::inclusion_image_ambient(spec, pn, pn1, v, kGuard);
                auto b = dimension::inclusion_image_ambient(spec, pn, pn1, v, kGuard, -1, 1);
                auto d = dimension::inclusion_image_ambient(spec, pn, pn1, v, kGuard, 2, 0);
                c.expect(a == b && a == d,
                         std::string(name) + " level " + std::to_string(n) + " basis " + std::to_string(k));
            }
        }
    }
}

void c11_orbit_counts(Ctx& c) {
    for (const auto* name : {"tent", "gasket", "fullshift2"}) {
        const auto& spec = ifs::builtin(name);
        for (const auto& start : spec.points)
            for (int p = 1; p <= 6; ++p)
                for (int q = 0; p + q <= 6; ++q)
                    for (const auto& fam : ifs::pq_orbits(spec, start, p, q)) {
                        Int want = Int(spec.branch_index.at(fam.base)) *
                                   Int(long(exact::pow_ll(spec.branch_count, q)));
                        c.expect(fam.family_size == want, "family size formula");
                        c.expect(oracles::orbit_family_bruteforce(spec, start, fam.base, p, q) == want,
                                 std::string(name) + " " + start + " p=" + std::to_string(p) +
                                     " q=" + std::to_string(q));
                    }
    }
}

struct Criterion {
    int id;
    std::string name;
    std::function<void(Ctx&)> body;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> cs = {
        {1, "tent fiber tables, n = 1..6", c1_tent_fibers},
        {2, "gasket fiber tables with branch chains, n = 1..4", c2_gasket_fibers},
        {3, "dimension identity at every singular fiber", c3_dimension_identity},
        {4, "fiber matrix invariants (projections, orthogonality, unit sum)", c4_fiber_matrix_invariants},
        {5, "K0 ranks: tent n+1, gasket 3n+1, fullshift2 1", c5_k0_ranks},
        {6, "tent inclusion matrices equal the published closed form, n = 1..4", c6_tent_inclusions},
        {7, "gasket inclusion: published 13x10 at n = 3, column rank 3n+1", c7_gasket_inclusion},
        {8, "trace pairing: phi([p^n]), invariance, integer independence", c8_trace_pairing},
        {9, "endomorphism: tent shift on [p^n], fullshift2 divisibility", c9_endomorphism},
        {10, "oracle equivalences: counts, random projections, functoriality", c10_oracles},
        {11, "orbit families have exactly e_R N^q members, p+q <= 6", c11_orbit_counts},
    };
    return cs;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) only = std::atoi(argv[++i]);
        if (a == "--list") {
            for (const auto& cr : criteria()) std::cout << cr.id << ": " << cr.name << "\n";
            return 0;
        }
    }
    int failures = 0;
    for (const auto& cr : criteria()) {
        if (only && cr.id != only) continue;
        Ctx ctx;
        try {
            cr.body(ctx);
        } catch (const std::exception& e) {
            ctx.ok = false;
            ctx.log << "      exception: " << e.what() << "\n";
        }
        std::cout << "[c" << cr.id << "] " << (ctx.ok ? "PASS" : "FAIL") << " " << cr.name << "\n";
        if (!ctx.ok) {
            std::string detail = ctx.log.str();
            // keep failure output readable
            int lines = 0;
            std::istringstream is(detail);
            std::string line;
            while (std::getline(is, line) && lines < 40) {
                std::cout << line << "\n";
                ++lines;
            }
            ++failures;
        }
    }
    return failures;
}

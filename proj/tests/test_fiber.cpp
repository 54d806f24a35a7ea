#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "selfsim/elimination.hpp"
#include "selfsim/fiber.hpp"

using namespace selfsim;
using exact::Int;
using exact::Rat;
using exact::RatMatrix;
using exact::rat;
using ifs::PointRef;

namespace {

constexpr long long kGuard = 1 << 14;

std::vector<long long> sizes_of(const fiber::FiberDecomposition& dec) {
    std::vector<long long> s;
    for (const auto& b : dec.blocks) s.push_back(b.algebra_size);
    return s;
}

RatMatrix sum_with_q(const ifs::MapSpec& spec, const fiber::FiberDecomposition& dec,
                     const fiber::FiberMatrices& fm) {
    RatMatrix total = fm.q;
    for (const auto& z : fm.central) total = total + z;
    (void)spec;
    (void)dec;
    return total;
}

} // namespace

TEST_CASE("pi_embed places blocks on the diagonal") {
    RatMatrix i2 = RatMatrix::identity(2);
    RatMatrix m = fiber::pi_embed(2, 1, {{0}}, i2);
    CHECK(m.rows() == 4);
    CHECK(m.at(0, 0) == 1);
    CHECK(m.at(1, 1) == 1);
    CHECK(m.at(2, 2) == 0);
    CHECK(m.at(3, 3) == 0);

    CHECK_THROWS_AS((void)fiber::pi_embed(2, 1, {{0}, {0}}, i2), Error);
    CHECK_THROWS_AS((void)fiber::pi_embed(2, 2, {{0}}, i2), Error);

    // placing T at every digit equals kron(identity, T)
    std::mt19937 rng(2);
    RatMatrix t(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) t.at(i, j) = rat(int(rng() % 9) - 4, 1 + int(rng() % 3));
    RatMatrix all = fiber::pi_embed(2, 1, {{0}, {1}}, t);
    CHECK(all == exact::kronecker(RatMatrix::identity(2), t));
}

TEST_CASE("sigma_embed places four copies") {
    RatMatrix one(1, 1);
    one.at(0, 0) = 1;
    RatMatrix m = fiber::sigma_embed(2, 0, {0}, {1}, one);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(m.at(i, j) == 1);
    CHECK_THROWS_AS((void)fiber::sigma_embed(2, 0, {0}, {0}, one), Error);
}

TEST_CASE("tent singular block equals the worked 2x2 block form") {
    // pi_{n-1,{0,1}}(A) - (1/2) sigma_{n-1,0,1}(A) = [[A/2, -A/2], [-A/2, A/2]]
    const int n = 3, half = 1 << (n - 1);
    std::mt19937 rng(5);
    RatMatrix a(half, half);
    for (int i = 0; i < half; ++i)
        for (int j = 0; j < half; ++j) a.at(i, j) = rat(int(rng() % 7) - 3, 1 + int(rng() % 2));
    RatMatrix built =
        fiber::pi_embed(2, n - 1, {{0}, {1}}, a) - fiber::sigma_embed(2, n - 1, {0}, {1}, a.scaled(rat(1, 2)));
    for (int i = 0; i < half; ++i)
        for (int j = 0; j < half; ++j) {
            Rat hv = a.at(i, j) / 2;
            CHECK(built.at(i, j) == hv);
            CHECK(built.at(i, half + j) == -hv);
            CHECK(built.at(half + i, j) == -hv);
            CHECK(built.at(half + i, half + j) == hv);
        }
}

TEST_CASE("tent fiber decompositions") {
    const auto& t = ifs::builtin("tent");
    auto at1 = fiber::fiber_decomposition(t, PointRef::special("1"), 3);
    CHECK(sizes_of(at1) == std::vector<long long>{4, 4});
    CHECK(at1.blocks[1].base == "half");
    CHECK(at1.blocks[1].p == 1);
    CHECK(at1.blocks[1].prefix.empty());

    auto at0 = fiber::fiber_decomposition(t, PointRef::special("0"), 3);
    CHECK(sizes_of(at0) == std::vector<long long>{5, 2, 1});
    CHECK(at0.blocks[1].p == 2);
    CHECK(at0.blocks[1].prefix == std::vector<int>{1});
    CHECK(at0.blocks[2].p == 3);
    CHECK(at0.blocks[2].prefix == std::vector<int>{0, 1});

    auto gen = fiber::fiber_decomposition(t, PointRef::generic(), 4);
    CHECK(sizes_of(gen) == std::vector<long long>{16});
}

TEST_CASE("gasket fiber decompositions carry the branch chains") {
    const auto& g = ifs::builtin("gasket");
    for (int n = 1; n <= 3; ++n) {
        auto at_p = fiber::fiber_decomposition(g, PointRef::special("P"), n);
        CHECK(at_p.blocks[0].algebra_size == (exact::pow_ll(3, n) + 1) / 2);
        for (int p = 1; p <= n; ++p) {
            CHECK(at_p.blocks[size_t(p)].base == "T");
            CHECK(at_p.blocks[size_t(p)].algebra_size == exact::pow_ll(3, n - p));
        }
        auto at_q = fiber::fiber_decomposition(g, PointRef::special("Q"), n);
        auto at_r = fiber::fiber_decomposition(g, PointRef::special("R"), n);
        for (int p = 1; p <= n; ++p) {
            CHECK(at_q.blocks[size_t(p)].base == (p % 2 ? "S" : "U"));
            CHECK(at_r.blocks[size_t(p)].base == (p % 2 ? "U" : "S"));
        }
    }
}

TEST_CASE("fiber matrices: projections, orthogonality, unit decomposition") {
    for (const auto* name : {"tent", "gasket", "fullshift2"}) {
        const auto& spec = ifs::builtin(name);
        int n_max = spec.branch_count == 2 ? 4 : 3;
        for (int n = 1; n <= n_max; ++n) {
            for (const auto& x : ifs::singular_points(spec, n)) {
                auto dec = fiber::fiber_decomposition(spec, PointRef::special(x), n);
                auto fm = fiber::build_fiber_matrices(spec, dec, kGuard);
                CHECK(mul(fm.q, fm.q) == fm.q);
                CHECK(fm.q.transpose() == fm.q);
                CHECK(exact::rank(fm.q) == int(dec.blocks[0].algebra_size));
                for (size_t i = 0; i < fm.central.size(); ++i) {
                    const auto& z = fm.central[i];
                    CHECK(mul(z, z) == z);
                    CHECK(z.transpose() == z);
                    CHECK(mul(fm.q, z).is_zero());
                    CHECK(mul(z, fm.q).is_zero());
                    for (size_t j = i + 1; j < fm.central.size(); ++j)
                        CHECK(mul(z, fm.central[j]).is_zero());
                    CHECK(exact::rank(z) ==
                          int(dec.blocks[i + 1].weight * dec.blocks[i + 1].algebra_size));
                }
                CHECK(sum_with_q(spec, dec, fm) == RatMatrix::identity(int(dec.dim)));
            }
        }
    }
}

TEST_CASE("central projections match the pi/sigma construction") {
    const auto& t = ifs::builtin("tent");
    const int n = 3;
    auto dec = fiber::fiber_decomposition(t, PointRef::special("0"), n);
    auto fm = fiber::build_fiber_matrices(t, dec, kGuard);
    for (size_t bi = 1; bi < dec.blocks.size(); ++bi) {
        const auto& b = dec.blocks[bi];
        RatMatrix id(int(b.algebra_size), int(b.algebra_size));
        for (int i = 0; i < b.algebra_size; ++i) id.at(i, i) = 1;
        std::vector<int> wi = b.prefix, wj = b.prefix;
        wi.push_back(0);
        wj.push_back(1);
        RatMatrix built = fiber::pi_embed(2, n - b.p, {wi, wj}, id) -
                          fiber::sigma_embed(2, n - b.p, wi, wj, id.scaled(rat(1, 2)));
        CHECK(built == fm.central[bi - 1]);
    }
}

TEST_CASE("endpoint classes count the compact dimension") {
    for (const auto* name : {"tent", "gasket"}) {
        const auto& spec = ifs::builtin(name);
        for (int n = 0; n <= 4; ++n)
            for (const auto& x : spec.points) {
                auto wc = fiber::endpoint_classes(spec, PointRef::special(x), n);
                CHECK(Int(long(wc.members.size())) ==
                      ifs::backward_count(spec, PointRef::special(x), n));
            }
    }
}

TEST_CASE("minimal projections decompose to unit vectors") {
    const auto& t = ifs::builtin("tent");
    for (int n = 1; n <= 3; ++n)
        for (const auto& x : ifs::singular_points(t, n)) {
            auto dec = fiber::fiber_decomposition(t, PointRef::special(x), n);
            for (int bi = 0; bi < int(dec.blocks.size()); ++bi) {
                RatMatrix m = fiber::minimal_projection(t, dec, bi);
                CHECK(exact::rank(m) == dec.blocks[size_t(bi)].weight);
                auto mult = fiber::decompose_projection(t, dec, m, kGuard);
                for (int j = 0; j < int(mult.size()); ++j) CHECK(mult[size_t(j)] == (j == bi ? 1 : 0));
            }
        }
    // worked 2x2 singular block at level 1
    auto dec1 = fiber::fiber_decomposition(t, PointRef::special("1"), 1);
    RatMatrix m = fiber::minimal_projection(t, dec1, 1);
    CHECK(m.at(0, 0) == rat(1, 2));
    CHECK(m.at(0, 1) == rat(-1, 2));
    CHECK(m.at(1, 0) == rat(-1, 2));
    CHECK(m.at(1, 1) == rat(1, 2));

    const auto& g = ifs::builtin("gasket");
    auto decg = fiber::fiber_decomposition(g, PointRef::special("P"), 1);
    RatMatrix mg = fiber::minimal_projection(g, decg, 1);
    CHECK(exact::rank(mg) == 1);
    auto fmg = fiber::build_fiber_matrices(g, decg, kGuard);
    CHECK(mul(fmg.q, mg).is_zero());
    // (delta - 1/2) pattern on entry digits {1,2}
    CHECK(mg.at(1, 1) == rat(1, 2));
    CHECK(mg.at(1, 2) == rat(-1, 2));
    CHECK(mg.at(2, 2) == rat(1, 2));
}

TEST_CASE("identity and rank-one decompositions") {
    const auto& t = ifs::builtin("tent");
    const int n = 3;
    auto dec = fiber::fiber_decomposition(t, PointRef::special("1"), n);
    auto id = RatMatrix::identity(int(dec.dim));
    auto mult = fiber::decompose_projection(t, dec, id, kGuard);
    CHECK(mult == std::vector<Int>{Int(4), Int(4)});

    auto fm = fiber::build_fiber_matrices(t, dec, kGuard);
    auto qmult = fiber::decompose_projection(t, dec, fm.q, kGuard);
    CHECK(qmult == std::vector<Int>{Int(4), Int(0)});

    // all entries 1/2^n: rank one, compact multiplicity 1
    RatMatrix j(int(dec.dim), int(dec.dim));
    for (int i = 0; i < dec.dim; ++i)
        for (int k = 0; k < dec.dim; ++k) j.at(i, k) = rat(1, long(dec.dim));
    auto jmult = fiber::decompose_projection(t, dec, j, kGuard);
    CHECK(jmult == std::vector<Int>{Int(1), Int(0)});
}

TEST_CASE("decompose rejects non-members") {
    const auto& t = ifs::builtin("tent");
    auto dec = fiber::fiber_decomposition(t, PointRef::special("1"), 1);
    RatMatrix notproj(2, 2);
    notproj.at(0, 0) = 2;
    CHECK_THROWS_AS((void)fiber::decompose_projection(t, dec, notproj, kGuard), Error);
    RatMatrix e11(2, 2);
    e11.at(0, 0) = 1; // projection, but not constant on the identified pair
    CHECK_THROWS_AS((void)fiber::decompose_projection(t, dec, e11, kGuard), Error);
}

TEST_CASE("block-diagonal assembly of a level-n projection lands in the level-n+1 fiber") {
    const auto& t = ifs::builtin("tent");
    const int n = 2;
    auto dec0 = fiber::fiber_decomposition(t, PointRef::special("0"), n);
    auto dec1 = fiber::fiber_decomposition(t, PointRef::special("1"), n);
    auto p0 = fiber::minimal_projection(t, dec0, 0);
    auto p1 = fiber::minimal_projection(t, dec1, 0);
    // gamma_0(0) = 0, gamma_1(0) = 1: fiber at 0 one level up
    RatMatrix a(int(2 * dec0.dim), int(2 * dec0.dim));
    for (int i = 0; i < dec0.dim; ++i)
        for (int j = 0; j < dec0.dim; ++j) {
            a.at(i, j) = p0.at(i, j);
            a.at(int(dec0.dim) + i, int(dec0.dim) + j) = p1.at(i, j);
        }
    auto up = fiber::fiber_decomposition(t, PointRef::special("0"), n + 1);
    auto mult = fiber::decompose_projection(t, up, a, kGuard);
    Int total(0);
    for (size_t i = 0; i < mult.size(); ++i) total += mult[i] * up.blocks[i].weight;
    CHECK(total == 2);
}

TEST_CASE("size guard") {
    const auto& t = ifs::builtin("tent");
    auto dec = fiber::fiber_decomposition(t, PointRef::special("1"), 5);
    CHECK_THROWS_AS((void)fiber::build_fiber_matrices(t, dec, 8), Error);
}

TEST_CASE("random block sums satisfy the rank identity") {
    std::mt19937 rng(97);
    for (const auto* name : {"tent", "gasket"}) {
        const auto& spec = ifs::builtin(name);
        int n = spec.branch_count == 2 ? 4 : 2;
        for (const auto& x : ifs::singular_points(spec, n)) {
            auto dec = fiber::fiber_decomposition(spec, PointRef::special(x), n);
            for (int trial = 0; trial < 12; ++trial) {
                RatMatrix t(int(dec.dim), int(dec.dim));
                Int expected(0);
                for (int bi = 0; bi < int(dec.blocks.size()); ++bi) {
                    long long cap = dec.blocks[size_t(bi)].algebra_size;
                    long long m = (long long)(rng() % (unsigned long long)(cap + 1));
                    for (long long s = 0; s < m; ++s)
                        fiber::add_minimal_projection(spec, dec, bi, s, 1, t);
                    expected += Int(long(m)) * dec.blocks[size_t(bi)].weight;
                }
                CHECK(Int(exact::rank(t)) == expected);
                auto mult = fiber::decompose_projection(spec, dec, t, kGuard);
                Int total(0);
                for (size_t i = 0; i < mult.size(); ++i) total += mult[i] * dec.blocks[i].weight;
                CHECK(total == expected);
            }
        }
    }
}

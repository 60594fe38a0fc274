#include <doctest.h>

#include "support/oracles.hpp"

using namespace protori;
using testsupport::TestRng;

namespace {

std::vector<Int> tuple(std::initializer_list<long> xs) {
    std::vector<Int> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

} // namespace

TEST_CASE("finite groups are self-dual") {
    FinAb g({2, 4});
    CHECK(dual_group(g) == g);
    CHECK(dual_group(FinAb()) == FinAb());
    FinAb z6({6});
    CHECK(dual_group(z6) == z6);
    CHECK(finab_pairing(z6, tuple({1}), tuple({1})) == AngleQ::of(Rat(1, 6)));
    CHECK(finab_pairing(g, tuple({1, 2}), tuple({1, 1})) == AngleQ::of(Rat(0)));
}

TEST_CASE("invariant factor validation") {
    CHECK_THROWS_AS(FinAb({4, 2}), Error);
    CHECK_THROWS_AS(FinAb({1}), Error);
    CHECK(FinAb({2, 4, 8}).order() == 64);
    CHECK(FinAb().order() == 1);
    CHECK(FinAb().elements().size() == 1);
}

TEST_CASE("hom well-formedness") {
    FinAb z2({2}), z4({4});
    FinHom dbl(z2, z4, {{2}});
    CHECK(dbl.apply(tuple({1})) == tuple({2}));
    // x -> x is not a hom Z/2 -> Z/4
    CHECK_THROWS_AS(FinHom(z2, z4, {{1}}), Error);
    try {
        FinHom(z2, z4, {{1}});
        FAIL("expected ill_formed_hom");
    } catch (const Error& e) {
        CHECK(e.code() == errc::ill_formed_hom);
    }
}

TEST_CASE("dual homs") {
    FinAb z2({2}), z4({4});
    FinHom dbl(z2, z4, {{2}});
    FinHom d = dual_hom(dbl);
    CHECK(d.source() == z4);
    CHECK(d.target() == z2);
    CHECK(d.matrix() == std::vector<std::vector<Int>>{{1}});   // c -> c mod 2

    FinHom id = FinHom::identity(FinAb({2, 6}));
    CHECK(dual_hom(id) == id);
    FinHom zero = FinHom::zero(z2, z4);
    CHECK(dual_hom(zero) == FinHom::zero(z4, z2));

    // adjointness on all elements
    for (const auto& x : z2.elements())
        for (const auto& chi : z4.elements())
            CHECK(finab_pairing(z4, dbl.apply(x), chi) == finab_pairing(z2, x, d.apply(chi)));
}

TEST_CASE("exactness by enumeration") {
    FinAb z2({2}), z4({4});
    FinHom f(z2, z4, {{2}});
    FinHom g(z4, z2, {{1}});
    CHECK(is_injective(f));
    CHECK(is_surjective(g));
    CHECK(is_exact(f, g));
    CHECK(is_short_exact(f, g));

    FinHom zero_in(FinAb(), z2, std::vector<std::vector<Int>>{{}});
    FinHom id2 = FinHom::identity(z2);
    CHECK(is_exact(zero_in, id2));

    // Im(f) = {0,2} vs Ker(id) = {0}: not exact, but well-posed
    CHECK(!is_exact(f, FinHom::identity(z4)));
    // g then g does not compose (Z/2 vs Z/4)
    CHECK_THROWS_AS(is_exact(g, g), Error);
}

TEST_CASE("enumeration cap") {
    FinAb big({131072});
    CHECK_THROWS_AS(big.elements(), Error);
    try {
        big.elements();
        FAIL("expected enumeration_limit");
    } catch (const Error& e) {
        CHECK(e.code() == errc::enumeration_limit);
    }
}

TEST_CASE("random short exact sequences dualize exactly") {
    TestRng rng(101);
    int built = 0;
    for (int trial = 0; trial < 120; ++trial) {
        testsupport::GeneratedSES ses = testsupport::random_ses(rng, 256);
        ++built;
        CHECK(is_short_exact(ses.f, ses.g));
        // arrows reverse
        FinHom gd = dual_hom(ses.g);
        FinHom fd = dual_hom(ses.f);
        CHECK(is_short_exact(gd, fd));
        // double dual recovers the originals
        CHECK(dual_hom(fd) == ses.f);
        CHECK(dual_hom(gd) == ses.g);
        // contravariance: (g o f)^ = f^ o g^ (both are zero maps here, so
        // exercise with g o f and with identities)
        CHECK(dual_hom(compose(ses.g, ses.f)) == compose(fd, gd));
    }
    CHECK(built == 120);
}

TEST_CASE("direct sums") {
    FinAb a({2, 4}), b({3});
    FinAb s = direct_sum(a, b);
    CHECK(s.order() == a.order() * b.order());
    CHECK(s == FinAb({2, 12}));
    CHECK(direct_sum(FinAb(), a) == a);
    CHECK(dual_group(s) == direct_sum(dual_group(a), dual_group(b)));

    TestRng rng(103);
    for (int i = 0; i < 50; ++i) {
        FinAb x = testsupport::random_finab(rng, 64);
        FinAb y = testsupport::random_finab(rng, 64);
        FinAb z = direct_sum(x, y);
        CHECK(z.order() == x.order() * y.order());
        // invariant chain is validated by the constructor; duality commutes
        CHECK(dual_group(z) == direct_sum(dual_group(x), dual_group(y)));
    }
}

TEST_CASE("finite duals are torsion: the zero-dimension shadow") {
    TestRng rng(107);
    for (int i = 0; i < 20; ++i) {
        FinAb g = testsupport::random_finab(rng, 128);
        Int exponent = g.trivial() ? Int(1) : g.factors().back();
        for (const auto& x : g.elements()) {
            std::vector<Int> nx(x.size());
            for (std::size_t j = 0; j < x.size(); ++j) nx[j] = x[j] * exponent;
            CHECK(g.reduce(nx) == g.zero());
        }
    }
    // so the compact group dual to a FinAb has dimension 0 = rank of a
    // trivial strand group
    CHECK(protorus_dim(ProtorusDesc{StrandGroup(0, {})}) == 0);
}

#include <doctest.h>

#include "support/oracles.hpp"

using namespace protori;
using testsupport::TestRng;

namespace {

HeightSequence hs(ExtNat def, std::map<Int, ExtNat> exc) { return HeightSequence(def, std::move(exc)); }

} // namespace

TEST_CASE("canonical terms") {
    // P_n = {2} with h = 3, P_inf = {3}
    ASequence a = ASequence::canonical(hs(ExtNat(0), {{2, ExtNat(3)}, {3, ExtNat::inf()}}));
    CHECK(a.term(0) == 24);
    CHECK(a.term(1) == 3);
    CHECK(a.term(2) == 3);

    // tp(Q): all primes ascending
    ASequence q = ASequence::canonical(hs(ExtNat::inf(), {}));
    CHECK(q.term(0) == 2);
    CHECK(q.term(1) == 6);
    CHECK(q.term(2) == 30);
    CHECK(q.term(3) == 210);

    ASequence e = ASequence::explicit_seq({12}, {5});
    CHECK(e.term(0) == 12);
    CHECK(e.term(1) == 5);
    CHECK(e.term(2) == 5);
}

TEST_CASE("heights of explicit sequences") {
    CHECK(heights_of_aseq(ASequence::explicit_seq({12}, {10})) ==
          hs(ExtNat(0), {{2, ExtNat::inf()}, {3, ExtNat(1)}, {5, ExtNat::inf()}}));
    CHECK(heights_of_aseq(ASequence::explicit_seq({}, {2})) ==
          hs(ExtNat(0), {{2, ExtNat::inf()}}));
    CHECK(heights_of_aseq(ASequence::explicit_seq({6}, {7})) ==
          hs(ExtNat(0), {{2, ExtNat(1)}, {3, ExtNat(1)}, {7, ExtNat::inf()}}));
}

TEST_CASE("canonical_aseq and the torus case") {
    auto r1 = canonical_aseq(hs(ExtNat(0), {{2, ExtNat::inf()}}));
    REQUIRE(std::holds_alternative<ASequence>(r1));
    const ASequence& a1 = std::get<ASequence>(r1);
    for (int k = 0; k < 6; ++k) CHECK(a1.term(k) == 2);

    auto r2 = canonical_aseq(hs(ExtNat(0), {{2, ExtNat(3)}, {3, ExtNat::inf()}}));
    REQUIRE(std::holds_alternative<ASequence>(r2));
    CHECK(heights_of_aseq(std::get<ASequence>(r2)) ==
          hs(ExtNat(0), {{2, ExtNat(3)}, {3, ExtNat::inf()}}));

    CHECK(std::holds_alternative<TorusMarker>(canonical_aseq(hs(ExtNat(0), {{2, ExtNat(5)}}))));
    CHECK(std::holds_alternative<TorusMarker>(canonical_aseq(HeightSequence())));
    // P_n infinite: not a torus even with no INF primes
    CHECK(std::holds_alternative<ASequence>(canonical_aseq(hs(ExtNat(1), {}))));
    CHECK_THROWS_AS(ASequence::canonical(HeightSequence()), Error);
}

TEST_CASE("a-sequence membership") {
    ASequence two = ASequence::explicit_seq({}, {2});
    CHECK(aseq_contains(two, Rat(5, 16)));
    CHECK(!aseq_contains(two, Rat(1, 6)));
    ASequence e = ASequence::explicit_seq({12}, {5});
    CHECK(aseq_contains(e, Rat(7, 60)));   // 60 = a_0 a_1
    CHECK(aseq_contains(e, Rat(0)));
}

TEST_CASE("prefix consistency of membership") {
    TestRng rng(61);
    for (int i = 0; i < 50; ++i) {
        ASequence a = testsupport::random_aseq(rng);
        for (int s = 0; s < 10; ++s) {
            std::size_t k = rng.below(5);
            Int m(rng.range(-200, 200));
            Rat q = Rat(m) / Rat(a.prefix_product(k + 1));
            CHECK(aseq_contains(a, q));
        }
        // a denominator just past what the heights allow
        HeightSequence h = heights_of_aseq(a);
        if (h.default_value() == ExtNat(0)) {
            Int p = 101;
            while (h.at(p) != ExtNat(0)) p = next_prime(p);
            CHECK(!aseq_contains(a, Rat(Int(1), p)));
        } else if (!h.default_value().is_inf()) {
            Int p = 101;
            while (h.exceptions().count(p)) p = next_prime(p);
            Int pw;
            mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), h.default_value().value() + 1);
            CHECK(!aseq_contains(a, Rat(Int(1), pw)));
        } else {
            for (const auto& [p, v] : h.exceptions()) {
                if (v.is_inf()) continue;
                Int pw;
                mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), v.value() + 1);
                CHECK(!aseq_contains(a, Rat(Int(1), pw)));
                break;
            }
        }
    }
}

TEST_CASE("solenoid descriptors and isomorphism") {
    SolenoidDesc s2 = solenoid_of(ASequence::explicit_seq({}, {2}));
    CHECK(s2.type == TypeClass(ExtNat(0), {Int(2)}));
    CHECK(!s2.torus);

    SolenoidDesc torus = solenoid_of(AseqOrTorus{TorusMarker{}});
    CHECK(torus.torus);
    CHECK(torus.type == tp_Z());

    SolenoidDesc s10 = solenoid_of(ASequence::explicit_seq({}, {10}));
    CHECK(s10.type == TypeClass(ExtNat(0), {Int(2), Int(5)}));

    SolenoidDesc s25 = solenoid_of(ASequence::explicit_seq({}, {2, 5}));
    CHECK(solenoid_iso(s10, s25));
    CHECK(!solenoid_iso(s2, solenoid_of(ASequence::explicit_seq({}, {3}))));
    CHECK(!solenoid_iso(s2, torus));
}

TEST_CASE("round trip through canonical sequences, term-verified") {
    TestRng rng(67);
    int done = 0;
    while (done < 60) {
        HeightSequence h = testsupport::random_heights(rng);
        auto r = canonical_aseq(h);
        if (!std::holds_alternative<ASequence>(r)) continue;
        ++done;
        const ASequence& a = std::get<ASequence>(r);
        CHECK(heights_of_aseq(a) == h);
        std::string err = testsupport::verify_heights_from_terms(a, h);
        INFO(err);
        CHECK(err.empty());
        for (int k = 0; k < 12; ++k) CHECK(a.term(k) >= 2);
    }
}

TEST_CASE("solenoid_iso is an equivalence matching bidirectional type_le") {
    TestRng rng(71);
    std::vector<SolenoidDesc> descs;
    for (int i = 0; i < 30; ++i) descs.push_back(solenoid_of(testsupport::random_aseq(rng)));
    for (const auto& a : descs)
        for (const auto& b : descs) {
            bool iso = solenoid_iso(a, b);
            CHECK(iso == (type_le(a.type, b.type) && type_le(b.type, a.type)));
            CHECK(iso == solenoid_iso(b, a));
        }
}

TEST_CASE("explicit sequence validation") {
    CHECK_THROWS_AS(ASequence::explicit_seq({1}, {5}), Error);
    CHECK_THROWS_AS(ASequence::explicit_seq({12}, {}), Error);
    CHECK_THROWS_AS(ASequence::explicit_seq({}, {0}), Error);
}

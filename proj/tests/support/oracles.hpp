#pragma once

// Test-side oracles and generators.  Everything here must stay independent
// of the library code paths it checks: lattice membership goes through
// integer Smith forms, heights are refactored from actual sequence terms,
// and exact sequences are synthesized from scratch.

#include <cstdint>
#include <optional>
#include <vector>

#include "protori/decomp.hpp"
#include "protori/findual.hpp"
#include "protori/solenoid.hpp"

namespace protori::testsupport {

// Deterministic generator (splitmix64) so failures reproduce exactly.
struct TestRng {
    std::uint64_t s;
    explicit TestRng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
    long range(long lo, long hi) { return lo + static_cast<long>(below(hi - lo + 1)); }
    bool chance(unsigned percent) { return below(100) < percent; }
};

// ----------------------------------------------------- integer matrices --

using ZMat = std::vector<std::vector<Int>>;

ZMat zmat_identity(std::size_t n);
ZMat zmat_mul(const ZMat& a, const ZMat& b);
ZMat zmat_inverse_unimodular(const ZMat& u);

// u * a * v = d with u, v unimodular and d diagonal, d_1 | d_2 | ...
struct SmithForm {
    ZMat u, d, v;
    std::size_t rank = 0;
};
SmithForm smith(const ZMat& a);

// z in the Z-column-span of b?
bool zlattice_member(const ZMat& b, const std::vector<Int>& z);

// ------------------------------------------------------ decomp oracles --

// Dense membership oracle: x against the lattice generated by w_i / D_i,
// where D_i caps each strand's denominators at 10^4 per prime.  Exercises
// a completely different algorithm (global Smith over Z) than the
// library's per-prime local elimination.
bool oracle_member(const StrandGroup& a, const QVec& x, unsigned long den_cap = 10000);

// Largest k <= cap with x/p^k in the lattice; nullopt = INF at truncation.
std::optional<unsigned long> oracle_height(const StrandGroup& a, const QVec& x, const Int& p,
                                           unsigned long cap = 30);

// --------------------------------------------------- a-sequence oracle --

// Refactor a window of actual terms of a canonical sequence and verify the
// valuation sums reproduce h exactly: finite heights stabilize inside the
// window, INF primes divide every term from their entry on, and no foreign
// prime appears.  Returns an error description, or empty on success.
std::string verify_heights_from_terms(const ASequence& a, const HeightSequence& h,
                                      std::size_t window = 40);

// ------------------------------------------------------- type oracles --

// Hom(A(hs), A(ht)) != 0, decided by the valuation inequalities
// q * A(hs) <= A(ht) prime-by-prime on the finite profile.
bool hom_exists_oracle(const HeightSequence& hs, const HeightSequence& ht);

HeightSequence random_heights(TestRng& rng);   // default in {0,1,inf}, <= 5 exceptions, p <= 97, h <= 10
ASequence random_aseq(TestRng& rng);           // explicit or canonical

// ------------------------------------------------------ findual oracle --

struct GeneratedSES {
    FinHom f;   // A >-> B
    FinHom g;   // B ->> C
};

FinAb random_finab(TestRng& rng, unsigned long max_order);

// Random short exact sequence A >-> B ->> C built from a random subgroup of
// a random B via integer Smith forms.
GeneratedSES random_ses(TestRng& rng, unsigned long max_order = 256);

// ----------------------------------------------------- decomp fixtures --

// Z[1/2] e1 + Z[1/3] e2 + Z (e1+e2)/glue: rank 2, indecomposable.
StrandGroup catalog_clipped(unsigned long glue_prime);

// Random completely decomposable group on standard basis lines.
StrandGroup random_cd_group(TestRng& rng, std::size_t rank);

struct PlantedInstance {
    StrandGroup group;
    std::vector<TypeClass> planted_types;
    std::size_t clipped_rank = 0;
};

// (random CD of rank <= 3) + (catalog clipped block, glue prime cycling
// 5/7/11), with disjoint coordinate supports.
PlantedInstance random_planted_instance(TestRng& rng);

} // namespace protori::testsupport

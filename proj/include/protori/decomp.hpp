#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>

#include "protori/qlinalg.hpp"
#include "protori/typesys.hpp"

namespace protori {

/*
 * Finite-rank torsion-free groups in strand presentation
 *
 *     A = sum_i A(h_i) * w_i  inside  Q^n,
 *
 * one rank-1 coefficient group A(h_i) per nonzero vector w_i.  Glue
 * elements such as Z*(e1+e2)/5 are ordinary strands whose coefficients are
 * the all-zero heights, so a single membership engine covers base + glue
 * and the complement of a split stays in the same representation class.
 *
 * Membership is decided prime by prime.  The relevant prime set P* --
 * primes dividing strand data or the query, exception primes of any
 * coefficient, and primes dividing every maximal minor of the strand
 * matrix -- makes the quantification over all primes finite: outside P*
 * the query vector is p-integral, some maximal minor is a p-unit, and
 * heights sit at their defaults, so Cramer solving inside the span already
 * produces p-integral coefficients and the local test passes.  At each
 * p in P* the local condition x in sum_i p^{-h_p(i)} Z_(p) w_i is decided
 * by valuation-pivoted elimination over the local ring Z_(p), with strands
 * of infinite p-height contributing their full Q-line (beyond the finite
 * glue exponents, p-power divisibility of m*x forces strand-level
 * divisibility coordinate-wise, so the infinitely-p-divisible part of A is
 * exactly the span of the p-INF strands).
 *
 * Searches (rank-1 idempotents, near-isomorphism matrices) are bounded and
 * deterministic; exhaustion is a bound-relative certificate, never a proof
 * of clippedness.
 */

struct Strand {
    HeightSequence coeff;
    QVec w;

    bool operator==(const Strand& o) const { return coeff == o.coeff && w == o.w; }
};

class StrandGroup {
public:
    StrandGroup() = default;   // rank-0 group in Q^0
    StrandGroup(std::size_t ambient, std::vector<Strand> strands);

    std::size_t ambient() const { return ambient_; }
    const std::vector<Strand>& strands() const { return strands_; }
    std::size_t rank() const { return span_.rank(); }
    const Echelon& span() const { return span_; }

    // P*(A): primes of strand data, coefficient exceptions, and the gcd of
    // all maximal minors of the strand matrix.
    const std::set<Int>& relevant_primes() const { return relevant_primes_; }

    // Echelon of the strands with h_p = INF (the p-divisible directions).
    Echelon inf_span(const Int& p) const;
    // Same at a generic prime (heights at defaults).
    Echelon generic_inf_span() const;

    // Memoized local picture at p: the p-INF span and the inf-reduced,
    // p^{-h}-scaled finite strand columns.  Synchronized, so values stay
    // shareable across threads.
    struct LocalData {
        Echelon inf;
        std::vector<QVec> cols;
    };
    const LocalData& local_data(const Int& p) const;

    static StrandGroup direct_sum(const StrandGroup& a, const StrandGroup& b);

    bool operator==(const StrandGroup& o) const {
        return ambient_ == o.ambient_ && strands_ == o.strands_;
    }
    bool operator!=(const StrandGroup& o) const { return !(*this == o); }

    std::string str() const;

private:
    std::size_t ambient_ = 0;
    std::vector<Strand> strands_;
    Echelon span_;
    std::set<Int> relevant_primes_;
    struct Cache {
        std::mutex mu;
        std::map<Int, LocalData> by_prime;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// x in A?  DimensionMismatch when |x| != ambient.
bool member(const StrandGroup& a, const QVec& x);

// Heights of a nonzero member: h_p(x) = sup{k : x/p^k in A}.  INF exactly
// when x lies in the span of the p-INF strands; finite values by bounded
// doubling search; primes outside the finite profile take the value found
// at a fresh generic prime.
HeightSequence element_heights(const StrandGroup& a, const QVec& x);

// M*A a subset of B, for a rational matrix M (ambient(B) x ambient(A)).
bool maps_into(const QMat& m, const StrandGroup& a, const StrandGroup& b);

/*
 * Splitting witness: e = v*f with f*v = 1 is an idempotent ambient matrix
 * of rank one; when e(A) lies in A the group splits as e(A) + (1-e)(A).
 */
struct Idempotent {
    std::vector<Int> v;   // primitive column
    QVec f;               // rational row, f*v = 1
};

/*
 * Deterministic bounded search for a rank-1 splitting idempotent.
 * Enumeration order: primitive integer v in [-bound,bound]^n inside the
 * span of A, by increasing max-norm then lexicographically, first nonzero
 * coordinate positive; for each v, rows f supported on the span's pivot
 * coordinates with entries a/d, |a| <= bound, d <= bound, enumerated by
 * increasing entry level max(|a|,d) then lexicographically, the first
 * pivot coordinate with v != 0 determined by f*v = 1 and bound-checked.
 * Returns the first witness, or nullopt when the space is exhausted (a
 * bound-relative certificate only).
 */
std::optional<Idempotent> find_rank1_idempotent(const StrandGroup& a, unsigned bound);

// Split off the rank-1 summand e(A); returns its type and the complement
// (1-e)A re-presented strand-wise.  NotIdempotentOnA when e(A) is not
// inside A.
std::pair<TypeClass, StrandGroup> split(const StrandGroup& a, const Idempotent& e);

struct Decomposition {
    std::vector<TypeClass> torus_types;   // sorted multiset of split-off types
    StrandGroup remainder;
    bool complete = false;
    unsigned bound_used = 0;
    std::vector<Idempotent> certificates;

    bool rank0_reached() const { return remainder.rank() == 0; }
};

// Repeated find + split until rank 0 or search exhaustion at the bound.
Decomposition main_decompose(const StrandGroup& a, unsigned bound);

// Hom(A, Z) = 0?  A nonzero integral functional must kill every strand
// whose heights exceed the all-zero type, so Hom(A,Z) != 0 iff those
// strands fail to span A (any functional vanishing on them scales to an
// integral one).
bool is_torus_free(const StrandGroup& a);

struct QSummandReport {
    bool has = false;
    std::size_t dim = 0;   // dimension of the divisible part d(A)
};

// Divisible part d(A) = intersection over primes of the p-INF spans
// (finitely many distinct spans via the prime profile); nonzero iff A has
// a Q-summand, which then splits as Q^dim.
QSummandReport has_Q_summand(const StrandGroup& a);

enum class Verdict { yes, no, inconclusive };
const char* verdict_name(Verdict v);

struct NearIsoWitness {
    QMat forward;    // A -> B
    QMat backward;   // B -> A, equal to n * forward^{-1} on the spans
    Int multiplier;
};

struct NearIsoResult {
    Verdict verdict = Verdict::inconclusive;
    std::set<Int> multipliers;
    std::vector<NearIsoWitness> witnesses;
    std::string obstruction;   // set when verdict == no
    unsigned bound_used = 0;
};

/*
 * Near-isomorphism search.  Matrices are enumerated as r x r blocks in the
 * canonical span bases (first independent strand vectors of each side) and
 * lifted to ambient maps, in two documented deterministic stages: first
 * the strand-correspondence candidates (basis strands of A sent to
 * r-tuples of distinct strand vectors of B, in lexicographic target
 * order), then the full enumeration by increasing entry level and
 * lexicographic order within a level.  For each invertible C with M*A in B
 * the minimal n <= bound with n*M^{-1}*B in A is collected.  Verdict yes
 * as soon as the attained multipliers have gcd 1 (a multiplier n serves
 * every prime not dividing n); verdict no only on a complete obstruction
 * (rank mismatch, or type-multiset mismatch of fully decomposed inputs);
 * otherwise inconclusive at the bound.
 */
NearIsoResult near_iso(const StrandGroup& a, const StrandGroup& b, unsigned bound);

// Isomorphism of completely decomposable groups: multiset equality of types.
bool cd_iso(std::vector<TypeClass> a, std::vector<TypeClass> b);

// Compact connected group described through its discrete dual.
struct ProtorusDesc {
    StrandGroup dual;

    bool operator==(const ProtorusDesc& o) const { return dual == o.dual; }
};

// dim(G) = rk(Q tensor G^): the rank of the dual.
std::size_t protorus_dim(const ProtorusDesc& p);

struct ProtorusDecomposition {
    std::vector<TypeClass> torus_part;   // factor types; tp(Z) entries are circle factors
    ProtorusDesc clipped_part;
    bool complete = false;
    unsigned bound_used = 0;
    bool remainder_torus_free = false;     // cHom(T, K) = 0 check
    bool remainder_has_Q_summand = true;   // cHom(G, Q^) = 0 check (expected false)
};

// Main decomposition G = K x T computed on the dual side.
ProtorusDecomposition decompose_protorus(const ProtorusDesc& p, unsigned bound);

struct UniquenessReport {
    struct Trial {
        std::vector<unsigned> strand_order;
        std::vector<unsigned> coordinate_relabel;
        std::vector<TypeClass> torus_types;
        StrandGroup remainder;
    };
    struct PairCheck {
        std::size_t i = 0, j = 0;
        Verdict verdict = Verdict::inconclusive;
        std::set<Int> multipliers;
    };
    std::vector<Trial> trials;
    std::vector<PairCheck> pair_checks;
    bool torus_multisets_equal = false;
    bool remainders_compatible = false;   // every pair yes (or no pair refuted)
};

// Decompose under `trials` seeded permutations of strand order and
// coordinate labels; the torus multisets must agree and the remainders be
// pairwise nearly isomorphic (bound-relative).
UniquenessReport uniqueness_check(const StrandGroup& a, unsigned trials, unsigned bound,
                                  std::uint64_t seed = 0);

} // namespace protori

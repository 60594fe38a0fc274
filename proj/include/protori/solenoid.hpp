#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "protori/typesys.hpp"

namespace protori {

/*
 * Hewitt-Ross sequence a = (a_0, a_1, ...) with 2 <= a_i, in one of two
 * finite descriptions:
 *
 *   Explicit  - eventually periodic: a preperiod list plus a nonempty
 *               period repeated forever.
 *   Canonical - built from a height sequence h: with P_n = {p : 1 <= h_p <
 *               inf} = {p_1 < p_2 < ...} and P_inf = {p : h_p = inf} =
 *               {q_1 < q_2 < ...},
 *
 *                 a_k = p_{k+1}^{h_{p_{k+1}}} * q_1 q_2 ... q_{min(k+1,|P_inf|)}
 *
 *               where an exhausted factor is the empty product 1.  The
 *               construction requires non-torus heights (P_inf != {} or
 *               P_n infinite), which keeps every term >= 2.
 */
class ASequence {
public:
    static ASequence explicit_seq(std::vector<Int> pre, std::vector<Int> period);
    static ASequence canonical(const HeightSequence& h);

    bool is_canonical() const { return canonical_.has_value(); }
    const HeightSequence& canonical_heights() const { return *canonical_; }
    const std::vector<Int>& pre() const { return pre_; }
    const std::vector<Int>& period() const { return period_; }

    // a_k, total for every k >= 0.
    Int term(std::size_t k) const;

    // a_0 * a_1 * ... * a_{k-1} (the empty product for k = 0).
    Int prefix_product(std::size_t k) const;

    bool operator==(const ASequence& o) const {
        return pre_ == o.pre_ && period_ == o.period_ && canonical_ == o.canonical_;
    }
    bool operator!=(const ASequence& o) const { return !(*this == o); }

    // DSL literal: aseq(pre=[...], period=[...]) / aseq(canonical {...}).
    std::string str() const;

private:
    ASequence() = default;
    std::vector<Int> pre_, period_;            // explicit form
    std::optional<HeightSequence> canonical_;  // canonical form
};

// The heights h_p = 0 case: A = Z, whose "solenoid" is the circle itself.
struct TorusMarker {
    bool operator==(const TorusMarker&) const { return true; }
};

using AseqOrTorus = std::variant<TorusMarker, ASequence>;

// Classifying descriptor of a solenoid (or the circle).
struct SolenoidDesc {
    TypeClass type;
    bool torus = false;   // true iff type = tp(Z)

    bool operator==(const SolenoidDesc& o) const { return type == o.type && torus == o.torus; }
};

// Valuation sums h_p = sum_k vp(a_k, p), as a finite description.
HeightSequence heights_of_aseq(const ASequence& a);

// Eq.-style canonical sequence of h, or TorusMarker when A(h) is free of
// rank 1 (P_inf empty and P_n finite).  For the sequence returned, A_a
// equals A(h) as a subgroup of Q, not merely up to isomorphism.
AseqOrTorus canonical_aseq(const HeightSequence& h);

// q in A_a = { m / (a_0 a_1 ... a_k) }.
bool aseq_contains(const ASequence& a, const Rat& q);

SolenoidDesc solenoid_of(const ASequence& a);
SolenoidDesc solenoid_of(const AseqOrTorus& a);

// Topological isomorphism of solenoids = equality of types.
bool solenoid_iso(const SolenoidDesc& s1, const SolenoidDesc& s2);

} // namespace protori

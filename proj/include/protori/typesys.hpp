#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "protori/arith.hpp"

namespace protori {

/*
 * Eventually constant height sequence p -> h_p: one default value plus
 * finitely many exceptions.  Doubles as the description of the rational
 * group A(h) = <1/p^{h_p} | p prime>.
 *
 * Construction canonicalizes: exceptions equal to the default are dropped,
 * non-prime keys are rejected.  Equality is structural.
 */
class HeightSequence {
public:
    HeightSequence() = default;   // all-zero heights, tp(Z)
    HeightSequence(ExtNat default_value, std::map<Int, ExtNat> exceptions);

    ExtNat default_value() const { return default_; }
    const std::map<Int, ExtNat>& exceptions() const { return exceptions_; }

    // Height at p (default unless excepted).
    ExtNat at(const Int& p) const {
        auto it = exceptions_.find(p);
        return it == exceptions_.end() ? default_ : it->second;
    }

    bool operator==(const HeightSequence& o) const {
        return default_ == o.default_ && exceptions_ == o.exceptions_;
    }
    bool operator!=(const HeightSequence& o) const { return !(*this == o); }
    bool operator<(const HeightSequence& o) const;   // arbitrary total order for containers

    // DSL literal, e.g. "{2:3, 5:inf}" or "{2:4 | default inf}".
    std::string str() const;

private:
    ExtNat default_ = ExtNat(0);
    std::map<Int, ExtNat> exceptions_;
};

/*
 * Canonical type: the equivalence class of a height sequence under changes
 * of finitely many finite values.  Only the default and the set of
 * positions on the other side of the finite/INF split survive.
 */
class TypeClass {
public:
    TypeClass() = default;   // tp(Z)
    TypeClass(ExtNat default_value, std::set<Int> flips)
        : default_(default_value), flips_(std::move(flips)) {}

    ExtNat default_value() const { return default_; }
    // Primes whose height is INF when the default is finite, or finite when
    // the default is INF.
    const std::set<Int>& flips() const { return flips_; }

    bool is_tp_Z() const { return !default_.is_inf() && default_.value() == 0 && flips_.empty(); }
    bool is_tp_Q() const { return default_.is_inf() && flips_.empty(); }

    // Whether h_p = INF for this type at p.
    bool inf_at(const Int& p) const {
        bool flipped = flips_.count(p) != 0;
        return default_.is_inf() ? !flipped : flipped;
    }

    // A representative height sequence (finite flip values chosen as 0).
    HeightSequence representative() const;

    bool operator==(const TypeClass& o) const {
        return default_ == o.default_ && flips_ == o.flips_;
    }
    bool operator!=(const TypeClass& o) const { return !(*this == o); }
    bool operator<(const TypeClass& o) const;

    std::string str() const;

private:
    ExtNat default_ = ExtNat(0);
    std::set<Int> flips_;
};

TypeClass tp_Z();
TypeClass tp_Q();

// Collapse a height sequence to its type; constant on equivalence classes.
TypeClass canonical_type(const HeightSequence& h);

// Partial order on types: s <= t iff representatives h_s <= h_t pointwise
// exist, iff Hom(A(h_s), A(h_t)) != 0.
bool type_le(const TypeClass& s, const TypeClass& t);

// Lattice operations: types of pointwise max/min of representatives.
TypeClass type_join(const TypeClass& s, const TypeClass& t);
TypeClass type_meet(const TypeClass& s, const TypeClass& t);

// Membership q in A(h); q = 0 is a member by subgroup convention.
bool rg_contains(const HeightSequence& h, const Rat& q);

} // namespace protori

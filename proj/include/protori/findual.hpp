#pragma once

#include <vector>

#include "protori/adic.hpp"

namespace protori {

/*
 * Finite abelian group in invariant-factor form d_1 | d_2 | ... | d_t with
 * every d_i >= 2; the empty list is the trivial group.  Elements are digit
 * tuples (x_1, ..., x_t) with 0 <= x_i < d_i.
 *
 * These groups are self-dual: the dual carries the same invariant factors
 * and the canonical pairing <x, chi> = sum x_i chi_i / d_i mod 1.
 */
class FinAb {
public:
    FinAb() = default;   // trivial group
    explicit FinAb(std::vector<Int> invariant_factors);

    const std::vector<Int>& factors() const { return ds_; }
    std::size_t ngens() const { return ds_.size(); }
    bool trivial() const { return ds_.empty(); }
    Int order() const;

    std::vector<Int> zero() const { return std::vector<Int>(ds_.size(), 0); }
    std::vector<Int> reduce(std::vector<Int> x) const;

    // All elements in odometer order; order() must stay at desk scale.
    std::vector<std::vector<Int>> elements() const;

    bool operator==(const FinAb& o) const { return ds_ == o.ds_; }
    bool operator!=(const FinAb& o) const { return !(*this == o); }

    std::string str() const;

private:
    std::vector<Int> ds_;
};

// Canonical evaluation pairing G x G^ -> T.
AngleQ finab_pairing(const FinAb& G, const std::vector<Int>& x, const std::vector<Int>& chi);

/*
 * Homomorphism between finite abelian groups, stored as an integer matrix
 * against the invariant-factor generators: column j holds the image of the
 * j-th source generator.  Well-definedness demands m[i][j] * d_j = 0 mod
 * e_i for source orders d and target orders e; construction rejects
 * anything else (IllFormedHom).
 */
class FinHom {
public:
    FinHom(FinAb source, FinAb target, std::vector<std::vector<Int>> matrix);

    static FinHom identity(const FinAb& G);
    static FinHom zero(const FinAb& source, const FinAb& target);

    const FinAb& source() const { return source_; }
    const FinAb& target() const { return target_; }
    const std::vector<std::vector<Int>>& matrix() const { return m_; }

    std::vector<Int> apply(const std::vector<Int>& x) const;

    bool operator==(const FinHom& o) const {
        return source_ == o.source_ && target_ == o.target_ && m_ == o.m_;
    }

private:
    FinAb source_, target_;
    std::vector<std::vector<Int>> m_;   // target-rows x source-columns
};

// Dual group (identical invariant factors; the pairing gives it meaning).
FinAb dual_group(const FinAb& G);

// Unique f^ with <f(x), chi> = <x, f^(chi)>; contravariant.
FinHom dual_hom(const FinHom& f);

FinHom compose(const FinHom& g, const FinHom& f);   // g after f

bool is_injective(const FinHom& f);
bool is_surjective(const FinHom& f);

// Im(f) = Ker(g), decided by enumeration (the trusted oracle path).
bool is_exact(const FinHom& f, const FinHom& g);

// Short-exactness of A >-> B ->> C.
bool is_short_exact(const FinHom& f, const FinHom& g);

// Direct sum with invariant factors renormalized to a divisor chain.
FinAb direct_sum(const FinAb& A, const FinAb& B);

} // namespace protori

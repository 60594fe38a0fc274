#pragma once

#include "protori/solenoid.hpp"

namespace protori {

// Rational angle in T = R/Z, kept in [0, 1).
class AngleQ {
public:
    AngleQ() = default;
    static AngleQ of(const Rat& v) {
        AngleQ a;
        a.v_ = v - Rat(v.floor());
        return a;
    }
    const Rat& value() const { return v_; }
    AngleQ operator+(const AngleQ& o) const { return of(v_ + o.v_); }
    AngleQ operator-(const AngleQ& o) const { return of(v_ - o.v_); }
    bool operator==(const AngleQ& o) const { return v_ == o.v_; }
    bool operator!=(const AngleQ& o) const { return v_ != o.v_; }
    std::string str() const { return v_.str(); }

private:
    Rat v_;
};

/*
 * Truncated a-adic integer: the first N digits of an element of the
 * mixed-radix group Delta_a, with 0 <= digits[k] < a_k.  Carries never flow
 * backward, so the first N digits of sums are exact.
 */
struct AdicInt {
    ASequence aseq;
    std::vector<Int> digits;   // little-endian, size = precision >= 1

    std::size_t precision() const { return digits.size(); }
};

/*
 * Canonical representative of a point of the solenoid
 * Sigma_a = (Delta_a x R) / Z(1_a, 1): the real coordinate is reduced into
 * [0, 1) by subtracting multiples of the identified generator.
 */
struct SolenoidPoint {
    AdicInt x;
    Rat r;   // 0 <= r < 1
};

// Digits of z modulo a_0 ... a_{N-1}; z may be negative.
AdicInt adic_from_int(const ASequence& a, const Int& z, std::size_t precision);

AdicInt adic_zero(const ASequence& a, std::size_t precision);
AdicInt adic_one(const ASequence& a, std::size_t precision);

// Digitwise addition with carry; operands must share radix terms and
// precision (MixedRadixMismatch otherwise).
AdicInt adic_add(const AdicInt& x, const AdicInt& y);

// Group inverse at the shared precision.
AdicInt adic_neg(const AdicInt& x);

// x_(k) = sum_{j<=k} digits[j] * a_0...a_{j-1}, the image of x in
// Z/(a_0...a_k); additive in x modulo that order.
Int window(const AdicInt& x, std::size_t k);

// Coset representative of (x, r) modulo Z(1_a, 1) with real part in [0,1).
SolenoidPoint point_canonicalize(const AdicInt& x, const Rat& r);

SolenoidPoint point_add(const SolenoidPoint& p, const SolenoidPoint& q);

/*
 * Character pairing A_a x Sigma_a -> T.  Writing q = m/(a_0...a_k) with the
 * minimal such k, the angle is m * (x_(k) - r) / (a_0...a_k) mod 1.  The
 * value does not depend on the choice of k, is additive in both arguments,
 * and kills the identified generator (1_a, 1) - these are the properties
 * that make it the duality pairing.  Requires q in A_a (NotInDual) and
 * precision > k (InsufficientPrecision).
 */
AngleQ pairing(const Rat& q, const SolenoidPoint& p);

} // namespace protori

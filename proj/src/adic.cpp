#include "protori/adic.hpp"

namespace protori {

namespace {

void check_compatible(const AdicInt& x, const AdicInt& y) {
    if (x.precision() != y.precision())
        throw Error(errc::mixed_radix_mismatch, "operands have different precision");
    // Only the radix window a_0..a_{N-1} matters for truncated arithmetic.
    for (std::size_t k = 0; k < x.precision(); ++k)
        if (x.aseq.term(k) != y.aseq.term(k))
            throw Error(errc::mixed_radix_mismatch, "operands have different radix terms");
}

} // namespace

AdicInt adic_from_int(const ASequence& a, const Int& z, std::size_t precision) {
    if (precision < 1) throw Error(errc::insufficient_precision, "precision must be >= 1");
    Int prod = a.prefix_product(precision);
    Int v;
    mpz_mod(v.get_mpz_t(), z.get_mpz_t(), prod.get_mpz_t());   // 0 <= v < prod
    AdicInt x{a, {}};
    x.digits.resize(precision);
    for (std::size_t k = 0; k < precision; ++k) {
        Int ak = a.term(k);
        x.digits[k] = v % ak;
        v /= ak;
    }
    return x;
}

AdicInt adic_zero(const ASequence& a, std::size_t precision) {
    return adic_from_int(a, 0, precision);
}

AdicInt adic_one(const ASequence& a, std::size_t precision) {
    return adic_from_int(a, 1, precision);
}

AdicInt adic_add(const AdicInt& x, const AdicInt& y) {
    check_compatible(x, y);
    AdicInt s{x.aseq, {}};
    s.digits.resize(x.precision());
    Int carry = 0;
    for (std::size_t k = 0; k < x.precision(); ++k) {
        Int t = x.digits[k] + y.digits[k] + carry;
        Int ak = x.aseq.term(k);
        if (t >= ak) {
            t -= ak;
            carry = 1;
        } else {
            carry = 0;
        }
        s.digits[k] = t;
    }
    return s;   // final carry leaves the window
}

AdicInt adic_neg(const AdicInt& x) {
    Int w = window(x, x.precision() - 1);
    return adic_from_int(x.aseq, -w, x.precision());
}

Int window(const AdicInt& x, std::size_t k) {
    if (k >= x.precision())
        throw Error(errc::insufficient_precision,
                    "window index " + std::to_string(k) + " >= precision " +
                        std::to_string(x.precision()));
    Int w = 0, scale = 1;
    for (std::size_t j = 0; j <= k; ++j) {
        w += x.digits[j] * scale;
        scale *= x.aseq.term(j);
    }
    return w;
}

SolenoidPoint point_canonicalize(const AdicInt& x, const Rat& r) {
    Int n = r.floor();
    // (x, r) - n (1_a, 1): stays in the same coset of Z(1_a, 1).
    AdicInt shifted = adic_add(x, adic_from_int(x.aseq, -n, x.precision()));
    return SolenoidPoint{std::move(shifted), r - Rat(n)};
}

SolenoidPoint point_add(const SolenoidPoint& p, const SolenoidPoint& q) {
    return point_canonicalize(adic_add(p.x, q.x), p.r + q.r);
}

AngleQ pairing(const Rat& q, const SolenoidPoint& p) {
    const ASequence& a = p.x.aseq;
    Int den = q.den();
    Int prod = 1;
    for (std::size_t k = 0; k < p.x.precision(); ++k) {
        prod *= a.term(k);
        if (mpz_divisible_p(prod.get_mpz_t(), den.get_mpz_t())) {
            Int m = q.num() * (prod / den);
            // angle = m (x_(k) - r) / (a_0...a_k) mod 1
            Rat angle = (Rat(m) * (Rat(window(p.x, k)) - p.r)) / Rat(prod);
            return AngleQ::of(angle);
        }
    }
    if (!aseq_contains(a, q))
        throw Error(errc::not_in_dual, q.str() + " is not in the dual group A_a");
    throw Error(errc::insufficient_precision,
                "pairing with " + q.str() + " needs more digits than precision " +
                    std::to_string(p.x.precision()));
}

} // namespace protori

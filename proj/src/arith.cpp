#include "protori/arith.hpp"

#include <cctype>

namespace protori {

Rat Rat::parse(const std::string& text) {
    auto bad = [&]() -> Error {
        return Error(errc::parse_error, "malformed rational '" + text + "'");
    };
    if (text.empty()) throw bad();
    std::string num = text, den = "1";
    if (auto slash = text.find('/'); slash != std::string::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
        if (den.empty()) throw bad();
    }
    auto digits_ok = [](const std::string& s, bool allow_sign) {
        if (s.empty()) return false;
        std::size_t i = (allow_sign && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    if (!digits_ok(num, true) || !digits_ok(den, false)) throw bad();
    Int d(den, 10);
    if (d == 0) throw bad();
    return Rat(Int(num, 10), d);
}

ExtNat ExtNat::parse(const std::string& text) {
    if (text == "inf") return ExtNat::inf();
    if (text.empty()) throw Error(errc::parse_error, "empty extended natural");
    for (char c : text)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw Error(errc::parse_error, "malformed extended natural '" + text + "'");
    Int n(text, 10);
    if (!n.fits_ulong_p())
        throw Error(errc::parse_error, "extended natural out of range '" + text + "'");
    return ExtNat(n.get_ui());
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    // GMP runs BPSW plus Miller-Rabin rounds; 2 means definitely prime.
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

Int next_prime(const Int& n) {
    Int p;
    mpz_nextprime(p.get_mpz_t(), n.get_mpz_t());
    return p;
}

namespace {

constexpr unsigned long kTrialBound = 1000000;

// Pollard rho with Brent cycling; n odd composite, no factor <= kTrialBound.
Int pollard_rho(const Int& n) {
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        Int r;
        mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
        return r;
    }
    for (unsigned long c = 1;; ++c) {
        Int x = 2, y = 2, d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            Int diff = x - y;
            if (diff == 0) break;   // cycle without factor; retry with new c
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_into(Int n, PrimeFactorization& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    Int d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace

PrimeFactorization factor(const Int& n) {
    if (n < 1) throw Error(errc::zero_input, "factor() requires n >= 1");
    PrimeFactorization out;
    Int m = n;
    // Trial division covers every spec-scale input; rho is the backstop.
    for (unsigned long d = 2; d <= kTrialBound; d = (d == 2 ? 3 : d + 2)) {
        if (m == 1) return out;
        if (mpz_cmp_ui(m.get_mpz_t(), d * d) < 0) break;
        while (mpz_divisible_ui_p(m.get_mpz_t(), d)) {
            ++out[Int(d)];
            m /= d;
        }
    }
    if (m > 1) factor_into(m, out);
    return out;
}

long vp_int(const Int& n, const Int& p) {
    if (n == 0) throw Error(errc::zero_input, "valuation of zero");
    Int reduced;
    return static_cast<long>(mpz_remove(reduced.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long vp(const Rat& q, const Int& p) {
    if (q.is_zero()) throw Error(errc::zero_input, "valuation of zero");
    long v = 0;
    Int num = q.num();
    if (num != 0) v += vp_int(num, p);
    v -= vp_int(q.den(), p);
    return v;
}

} // namespace protori

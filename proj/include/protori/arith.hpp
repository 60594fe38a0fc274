#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <gmpxx.h>

#include "protori/error.hpp"

namespace protori {

using Int = mpz_class;

/*
 * Exact rational in lowest terms with positive denominator.  The canonical
 * zero is 0/1.  Canonicalization happens on construction, so equality is
 * structural.
 */
class Rat {
public:
    Rat() : q_(0) {}
    Rat(long n) : q_(n) {}
    Rat(const Int& n) : q_(n) {}
    Rat(const Int& num, const Int& den) {
        if (den == 0) throw Error(errc::zero_input, "rational with zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }
    Rat(long num, long den) : Rat(Int(num), Int(den)) {}

    Int num() const { return q_.get_num(); }
    Int den() const { return q_.get_den(); }

    bool is_zero() const { return q_ == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rat operator-() const { return Rat(mpq_class(-q_)); }
    Rat operator+(const Rat& o) const { return Rat(mpq_class(q_ + o.q_)); }
    Rat operator-(const Rat& o) const { return Rat(mpq_class(q_ - o.q_)); }
    Rat operator*(const Rat& o) const { return Rat(mpq_class(q_ * o.q_)); }
    Rat operator/(const Rat& o) const {
        if (o.is_zero()) throw Error(errc::zero_input, "division by zero");
        return Rat(mpq_class(q_ / o.q_));
    }
    Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
    Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
    Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }

    bool operator==(const Rat& o) const { return q_ == o.q_; }
    bool operator!=(const Rat& o) const { return q_ != o.q_; }
    bool operator<(const Rat& o) const { return q_ < o.q_; }
    bool operator<=(const Rat& o) const { return q_ <= o.q_; }
    bool operator>(const Rat& o) const { return q_ > o.q_; }
    bool operator>=(const Rat& o) const { return q_ >= o.q_; }

    Rat abs() const { return q_ < 0 ? Rat(mpq_class(-q_)) : *this; }

    // Largest integer <= value.
    Int floor() const {
        Int f;
        mpz_fdiv_q(f.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
        return f;
    }

    // "a/b" with "/1" omitted.
    std::string str() const {
        if (q_.get_den() == 1) return q_.get_num().get_str();
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    static Rat parse(const std::string& text);

private:
    explicit Rat(mpq_class q) : q_(std::move(q)) {}
    mpq_class q_;
};

/*
 * Natural number extended by INF, totally ordered with 0 < 1 < ... < INF.
 * INF absorbs addition and max; min(INF, n) = n.
 */
class ExtNat {
public:
    ExtNat() : n_(0), inf_(false) {}
    ExtNat(std::uint64_t n) : n_(n), inf_(false) {}
    static ExtNat inf() { ExtNat e; e.inf_ = true; return e; }

    bool is_inf() const { return inf_; }
    bool is_zero() const { return !inf_ && n_ == 0; }
    // Finite value; callers must check is_inf() first.
    std::uint64_t value() const {
        if (inf_) throw Error(errc::internal, "value() on infinite ExtNat");
        return n_;
    }

    friend ExtNat operator+(ExtNat a, ExtNat b) {
        if (a.inf_ || b.inf_) return inf();
        return ExtNat(a.n_ + b.n_);
    }
    friend ExtNat min(ExtNat a, ExtNat b) { return a <= b ? a : b; }
    friend ExtNat max(ExtNat a, ExtNat b) { return a <= b ? b : a; }

    bool operator==(const ExtNat& o) const { return inf_ == o.inf_ && (inf_ || n_ == o.n_); }
    bool operator!=(const ExtNat& o) const { return !(*this == o); }
    bool operator<(const ExtNat& o) const {
        if (inf_) return false;
        if (o.inf_) return true;
        return n_ < o.n_;
    }
    bool operator<=(const ExtNat& o) const { return *this < o || *this == o; }
    bool operator>(const ExtNat& o) const { return o < *this; }
    bool operator>=(const ExtNat& o) const { return o <= *this; }

    std::string str() const { return inf_ ? "inf" : std::to_string(n_); }
    static ExtNat parse(const std::string& text);

private:
    std::uint64_t n_;
    bool inf_;
};

// prime -> exponent (>= 1); the empty map is 1.
using PrimeFactorization = std::map<Int, unsigned>;

bool is_prime(const Int& n);
Int next_prime(const Int& n);

// Exact factorization of n >= 1.
PrimeFactorization factor(const Int& n);

// Exponent of the prime p in q != 0; negative when p divides the denominator.
long vp(const Rat& q, const Int& p);
long vp_int(const Int& n, const Int& p);   // n != 0

} // namespace protori

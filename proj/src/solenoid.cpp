#include "protori/solenoid.hpp"

namespace protori {

namespace {

// Finite-or-cofinite ascending prime set, the enumeration domain of the
// canonical construction.
struct PrimeSel {
    bool cofinite = false;
    std::vector<Int> list;    // ascending, when finite
    std::set<Int> excluded;   // when cofinite

    bool is_finite() const { return !cofinite; }
    std::size_t finite_size() const { return list.size(); }

    // 1-indexed j-th element; for finite selectors j must be <= size.
    Int at(std::size_t j) const {
        if (!cofinite) return list[j - 1];
        Int p = 1;
        for (std::size_t seen = 0; seen < j;) {
            p = next_prime(p);
            if (!excluded.count(p)) ++seen;
        }
        return p;
    }
};

// P_n: primes with 1 <= h_p < inf.
PrimeSel select_Pn(const HeightSequence& h) {
    PrimeSel s;
    const ExtNat d = h.default_value();
    if (!d.is_inf() && d.value() >= 1) {
        s.cofinite = true;
        for (const auto& [p, v] : h.exceptions())
            if (v.is_inf() || v.value() == 0) s.excluded.insert(p);
    } else {
        for (const auto& [p, v] : h.exceptions())
            if (!v.is_inf() && v.value() >= 1) s.list.push_back(p);
    }
    return s;
}

// P_inf: primes with h_p = inf.
PrimeSel select_Pinf(const HeightSequence& h) {
    PrimeSel s;
    if (h.default_value().is_inf()) {
        s.cofinite = true;
        for (const auto& [p, v] : h.exceptions())
            if (!v.is_inf()) s.excluded.insert(p);
    } else {
        for (const auto& [p, v] : h.exceptions())
            if (v.is_inf()) s.list.push_back(p);
    }
    return s;
}

bool is_torus_heights(const HeightSequence& h) {
    // P_inf = {} and P_n finite <=> default 0 and no INF exception.
    if (h.default_value().is_inf()) return false;
    if (h.default_value().value() != 0) return false;   // P_n cofinite
    for (const auto& [p, v] : h.exceptions())
        if (v.is_inf()) return false;
    return true;
}

Int pow_int(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

} // namespace

ASequence ASequence::explicit_seq(std::vector<Int> pre, std::vector<Int> period) {
    if (period.empty())
        throw Error(errc::semantic_error, "a-sequence period must be nonempty");
    for (const Int& v : pre)
        if (v < 2) throw Error(errc::semantic_error, "a-sequence entry " + v.get_str() + " < 2");
    for (const Int& v : period)
        if (v < 2) throw Error(errc::semantic_error, "a-sequence entry " + v.get_str() + " < 2");
    ASequence a;
    a.pre_ = std::move(pre);
    a.period_ = std::move(period);
    return a;
}

ASequence ASequence::canonical(const HeightSequence& h) {
    if (is_torus_heights(h))
        throw Error(errc::semantic_error,
                    "canonical a-sequence of torus heights does not exist (A = Z, dual is the circle)");
    ASequence a;
    a.canonical_ = h;
    return a;
}

Int ASequence::term(std::size_t k) const {
    if (!canonical_) {
        if (k < pre_.size()) return pre_[k];
        return period_[(k - pre_.size()) % period_.size()];
    }
    const HeightSequence& h = *canonical_;
    PrimeSel pn = select_Pn(h);
    PrimeSel pinf = select_Pinf(h);
    Int t = 1;
    if (pn.cofinite || k + 1 <= pn.finite_size()) {
        Int p = pn.at(k + 1);
        t = pow_int(p, h.at(p).value());
    }
    std::size_t m = k + 1;
    if (pinf.is_finite()) m = std::min(m, pinf.finite_size());
    // q_1 ... q_m; enumerate incrementally rather than via repeated at().
    if (pinf.is_finite()) {
        for (std::size_t j = 0; j < m; ++j) t *= pinf.list[j];
    } else {
        Int p = 1;
        for (std::size_t seen = 0; seen < m;) {
            p = next_prime(p);
            if (pinf.excluded.count(p)) continue;
            ++seen;
            t *= p;
        }
    }
    return t;
}

Int ASequence::prefix_product(std::size_t k) const {
    Int prod = 1;
    for (std::size_t j = 0; j < k; ++j) prod *= term(j);
    return prod;
}

std::string ASequence::str() const {
    if (canonical_) return "aseq(canonical " + canonical_->str() + ")";
    auto list = [](const std::vector<Int>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ", ";
            s += v[i].get_str();
        }
        return s + "]";
    };
    return "aseq(pre=" + list(pre_) + ", period=" + list(period_) + ")";
}

HeightSequence heights_of_aseq(const ASequence& a) {
    if (a.is_canonical()) return a.canonical_heights();
    // h_p = vp(prod pre) plus INF as soon as p divides the period product.
    std::map<Int, ExtNat> exc;
    std::map<Int, unsigned long> finite_part;
    for (const Int& v : a.pre())
        for (const auto& [p, e] : factor(v)) finite_part[p] += e;
    std::set<Int> periodic;
    for (const Int& v : a.period())
        for (const auto& [p, e] : factor(v)) periodic.insert(p);
    for (const Int& p : periodic) exc[p] = ExtNat::inf();
    for (const auto& [p, e] : finite_part)
        if (!periodic.count(p)) exc[p] = ExtNat(e);
    return HeightSequence(ExtNat(0), std::move(exc));
}

AseqOrTorus canonical_aseq(const HeightSequence& h) {
    if (is_torus_heights(h)) return TorusMarker{};
    return ASequence::canonical(h);
}

bool aseq_contains(const ASequence& a, const Rat& q) {
    return rg_contains(heights_of_aseq(a), q);
}

SolenoidDesc solenoid_of(const ASequence& a) {
    return SolenoidDesc{canonical_type(heights_of_aseq(a)), false};
}

SolenoidDesc solenoid_of(const AseqOrTorus& a) {
    if (std::holds_alternative<TorusMarker>(a)) return SolenoidDesc{tp_Z(), true};
    return solenoid_of(std::get<ASequence>(a));
}

bool solenoid_iso(const SolenoidDesc& s1, const SolenoidDesc& s2) {
    return s1.type == s2.type;
}

} // namespace protori

#include "protori/typesys.hpp"

namespace protori {

HeightSequence::HeightSequence(ExtNat default_value, std::map<Int, ExtNat> exceptions)
    : default_(default_value) {
    for (auto& [p, h] : exceptions) {
        if (!is_prime(p))
            throw Error(errc::semantic_error, "height sequence key " + p.get_str() + " is not prime");
        if (h != default_) exceptions_.emplace(p, h);
    }
}

bool HeightSequence::operator<(const HeightSequence& o) const {
    auto key = [](const HeightSequence& h) {
        std::string s = h.str();
        return s;
    };
    return key(*this) < key(o);
}

std::string HeightSequence::str() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [p, h] : exceptions_) {
        if (!first) out += ", ";
        first = false;
        out += p.get_str() + ":" + h.str();
    }
    if (!(default_ == ExtNat(0))) out += (first ? "| default " : " | default ") + default_.str();
    out += "}";
    return out;
}

HeightSequence TypeClass::representative() const {
    std::map<Int, ExtNat> exc;
    for (const Int& p : flips_)
        exc.emplace(p, default_.is_inf() ? ExtNat(0) : ExtNat::inf());
    return HeightSequence(default_, std::move(exc));
}

bool TypeClass::operator<(const TypeClass& o) const {
    if (default_ != o.default_) return default_ < o.default_;
    return std::lexicographical_compare(flips_.begin(), flips_.end(),
                                        o.flips_.begin(), o.flips_.end());
}

std::string TypeClass::str() const {
    std::string out = "tp(" + default_.str() + "; {";
    bool first = true;
    for (const Int& p : flips_) {
        if (!first) out += ",";
        first = false;
        out += p.get_str();
    }
    return out + "})";
}

TypeClass tp_Z() { return TypeClass(); }
TypeClass tp_Q() { return TypeClass(ExtNat::inf(), {}); }

TypeClass canonical_type(const HeightSequence& h) {
    std::set<Int> flips;
    bool default_inf = h.default_value().is_inf();
    for (const auto& [p, v] : h.exceptions())
        if (v.is_inf() != default_inf) flips.insert(p);
    // Finite exceptional values over a finite default (and finite values over
    // an INF default beyond their positions) are discarded.
    return TypeClass(default_inf ? ExtNat::inf() : h.default_value(), std::move(flips));
}

bool type_le(const TypeClass& s, const TypeClass& t) {
    if (s.default_value().is_inf()) {
        // The INF-set of s is cofinite; it embeds only into a cofinite INF-set.
        if (!t.default_value().is_inf()) return false;
        // complement(flips t) >= complement(flips s)
        for (const Int& p : t.flips())
            if (!s.flips().count(p)) return false;
        return true;
    }
    if (t.default_value().is_inf()) {
        // flips(s) are s's INF positions; they must avoid t's finite positions.
        for (const Int& p : s.flips())
            if (t.flips().count(p)) return false;
        return true;
    }
    // Both defaults finite: the defaults rule all but finitely many primes.
    if (!(s.default_value() <= t.default_value())) return false;
    for (const Int& p : s.flips())
        if (!t.flips().count(p)) return false;
    return true;
}

namespace {

TypeClass pointwise(const TypeClass& s, const TypeClass& t, bool join) {
    HeightSequence hs = s.representative();
    HeightSequence ht = t.representative();
    std::set<Int> profile;
    for (const auto& [p, v] : hs.exceptions()) profile.insert(p);
    for (const auto& [p, v] : ht.exceptions()) profile.insert(p);
    ExtNat def = join ? max(hs.default_value(), ht.default_value())
                      : min(hs.default_value(), ht.default_value());
    std::map<Int, ExtNat> exc;
    for (const Int& p : profile) {
        ExtNat v = join ? max(hs.at(p), ht.at(p)) : min(hs.at(p), ht.at(p));
        exc.emplace(p, v);
    }
    return canonical_type(HeightSequence(def, std::move(exc)));
}

} // namespace

TypeClass type_join(const TypeClass& s, const TypeClass& t) { return pointwise(s, t, true); }
TypeClass type_meet(const TypeClass& s, const TypeClass& t) { return pointwise(s, t, false); }

bool rg_contains(const HeightSequence& h, const Rat& q) {
    if (q.is_zero()) return true;
    for (const auto& [p, e] : factor(q.den())) {
        ExtNat hp = h.at(p);
        if (hp.is_inf()) continue;
        if (hp.value() < e) return false;
    }
    return true;
}

} // namespace protori

#include "protori/findual.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace protori {

namespace {

// Enumeration guard: orders stay at desk scale.
constexpr unsigned long kMaxEnumeration = 1u << 16;

void check_enumerable(const FinAb& G) {
    if (G.order() > kMaxEnumeration)
        throw Error(errc::enumeration_limit,
                    "group of order " + G.order().get_str() + " exceeds the enumeration cap");
}

Int mod_pos(const Int& a, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

} // namespace

FinAb::FinAb(std::vector<Int> invariant_factors) : ds_(std::move(invariant_factors)) {
    for (std::size_t i = 0; i < ds_.size(); ++i) {
        if (ds_[i] < 2)
            throw Error(errc::semantic_error, "invariant factor " + ds_[i].get_str() + " < 2");
        if (i > 0 && !mpz_divisible_p(ds_[i].get_mpz_t(), ds_[i - 1].get_mpz_t()))
            throw Error(errc::semantic_error,
                        "invariant factors must form a divisor chain: " + ds_[i - 1].get_str() +
                            " does not divide " + ds_[i].get_str());
    }
}

Int FinAb::order() const {
    Int n = 1;
    for (const Int& d : ds_) n *= d;
    return n;
}

std::vector<Int> FinAb::reduce(std::vector<Int> x) const {
    if (x.size() != ds_.size())
        throw Error(errc::dimension_mismatch, "element arity does not match the group");
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod_pos(x[i], ds_[i]);
    return x;
}

std::vector<std::vector<Int>> FinAb::elements() const {
    check_enumerable(*this);
    std::vector<std::vector<Int>> out;
    std::vector<Int> cur(ds_.size(), 0);
    while (true) {
        out.push_back(cur);
        std::size_t i = 0;
        while (i < ds_.size()) {
            cur[i] += 1;
            if (cur[i] < ds_[i]) break;
            cur[i] = 0;
            ++i;
        }
        if (i == ds_.size()) break;
    }
    return out;
}

std::string FinAb::str() const {
    if (ds_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < ds_.size(); ++i) {
        if (i) s += " + ";
        s += "Z/" + ds_[i].get_str();
    }
    return s;
}

AngleQ finab_pairing(const FinAb& G, const std::vector<Int>& x, const std::vector<Int>& chi) {
    if (x.size() != G.ngens() || chi.size() != G.ngens())
        throw Error(errc::dimension_mismatch, "pairing arity mismatch");
    Rat sum;
    for (std::size_t i = 0; i < x.size(); ++i)
        sum += Rat(x[i] * chi[i], G.factors()[i]);
    return AngleQ::of(sum);
}

FinHom::FinHom(FinAb source, FinAb target, std::vector<std::vector<Int>> matrix)
    : source_(std::move(source)), target_(std::move(target)), m_(std::move(matrix)) {
    if (m_.size() != target_.ngens())
        throw Error(errc::ill_formed_hom, "matrix row count does not match the target");
    for (auto& row : m_)
        if (row.size() != source_.ngens())
            throw Error(errc::ill_formed_hom, "matrix column count does not match the source");
    // m[i][j] * d_j = 0 mod e_i, else generator relations are not respected.
    for (std::size_t i = 0; i < target_.ngens(); ++i)
        for (std::size_t j = 0; j < source_.ngens(); ++j) {
            Int t = m_[i][j] * source_.factors()[j];
            if (!mpz_divisible_p(t.get_mpz_t(), target_.factors()[i].get_mpz_t()))
                throw Error(errc::ill_formed_hom,
                            "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                ") violates the order congruence");
            m_[i][j] = mod_pos(m_[i][j], target_.factors()[i]);
        }
}

FinHom FinHom::identity(const FinAb& G) {
    std::vector<std::vector<Int>> m(G.ngens(), std::vector<Int>(G.ngens(), 0));
    for (std::size_t i = 0; i < G.ngens(); ++i) m[i][i] = 1;
    return FinHom(G, G, std::move(m));
}

FinHom FinHom::zero(const FinAb& source, const FinAb& target) {
    std::vector<std::vector<Int>> m(target.ngens(), std::vector<Int>(source.ngens(), 0));
    return FinHom(source, target, std::move(m));
}

std::vector<Int> FinHom::apply(const std::vector<Int>& x) const {
    if (x.size() != source_.ngens())
        throw Error(errc::dimension_mismatch, "element arity does not match the hom source");
    std::vector<Int> y(target_.ngens(), 0);
    for (std::size_t i = 0; i < target_.ngens(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += m_[i][j] * x[j];
        y[i] = mod_pos(y[i], target_.factors()[i]);
    }
    return y;
}

FinAb dual_group(const FinAb& G) { return G; }

FinHom dual_hom(const FinHom& f) {
    // <f(x), chi> = sum_i m[i][j] chi_i x_j / e_i must equal
    // <x, psi> = sum_j psi_j x_j / d_j, so psi_j = sum_i d_j m[i][j] chi_i / e_i.
    const auto& d = f.source().factors();
    const auto& e = f.target().factors();
    std::vector<std::vector<Int>> m(f.source().ngens(), std::vector<Int>(f.target().ngens(), 0));
    for (std::size_t j = 0; j < f.source().ngens(); ++j)
        for (std::size_t i = 0; i < f.target().ngens(); ++i)
            m[j][i] = (d[j] * f.matrix()[i][j]) / e[i];   // exact by well-formedness
    return FinHom(dual_group(f.target()), dual_group(f.source()), std::move(m));
}

FinHom compose(const FinHom& g, const FinHom& f) {
    if (!(f.target() == g.source()))
        throw Error(errc::composition_mismatch, "hom composition domains do not match");
    std::vector<std::vector<Int>> m(g.target().ngens(), std::vector<Int>(f.source().ngens(), 0));
    for (std::size_t i = 0; i < g.target().ngens(); ++i)
        for (std::size_t j = 0; j < f.source().ngens(); ++j) {
            Int s = 0;
            for (std::size_t k = 0; k < f.target().ngens(); ++k)
                s += g.matrix()[i][k] * f.matrix()[k][j];
            m[i][j] = s;
        }
    return FinHom(f.source(), g.target(), std::move(m));
}

bool is_injective(const FinHom& f) {
    check_enumerable(f.source());
    std::set<std::vector<Int>> image;
    for (const auto& x : f.source().elements()) image.insert(f.apply(x));
    return Int(static_cast<unsigned long>(image.size())) == f.source().order();
}

bool is_surjective(const FinHom& f) {
    check_enumerable(f.source());
    check_enumerable(f.target());
    std::set<std::vector<Int>> image;
    for (const auto& x : f.source().elements()) image.insert(f.apply(x));
    return Int(static_cast<unsigned long>(image.size())) == f.target().order();
}

bool is_exact(const FinHom& f, const FinHom& g) {
    if (!(f.target() == g.source()))
        throw Error(errc::composition_mismatch, "sequence maps do not compose");
    check_enumerable(f.source());
    check_enumerable(f.target());
    std::set<std::vector<Int>> image;
    for (const auto& x : f.source().elements()) image.insert(f.apply(x));
    std::set<std::vector<Int>> kernel;
    const std::vector<Int> zero = g.target().zero();
    for (const auto& y : g.source().elements())
        if (g.apply(y) == zero) kernel.insert(y);
    return image == kernel;
}

bool is_short_exact(const FinHom& f, const FinHom& g) {
    return is_injective(f) && is_surjective(g) && is_exact(f, g);
}

FinAb direct_sum(const FinAb& A, const FinAb& B) {
    // Merge prime-power components, then rebuild the divisor chain by taking
    // the largest power of each prime into the last factor, and so on.
    std::map<Int, std::vector<unsigned>> powers;
    for (const FinAb* G : {&A, &B})
        for (const Int& d : G->factors())
            for (const auto& [p, e] : factor(d)) powers[p].push_back(e);
    std::size_t count = 0;
    for (auto& [p, es] : powers) {
        std::sort(es.begin(), es.end(), std::greater<>());
        count = std::max(count, es.size());
    }
    std::vector<Int> ds(count, 1);
    for (auto& [p, es] : powers)
        for (std::size_t i = 0; i < es.size(); ++i) {
            Int pe;
            mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), es[i]);
            ds[i] *= pe;   // ds[0] collects the largest powers
        }
    std::reverse(ds.begin(), ds.end());
    return FinAb(ds);
}

} // namespace protori

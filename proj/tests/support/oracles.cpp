#include "support/oracles.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace protori::testsupport {

// ----------------------------------------------------- integer matrices --

ZMat zmat_identity(std::size_t n) {
    ZMat m(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

ZMat zmat_mul(const ZMat& a, const ZMat& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    ZMat r(n, std::vector<Int>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

ZMat zmat_inverse_unimodular(const ZMat& u) {
    std::size_t n = u.size();
    QMat q(n, QVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) q[i][j] = Rat(u[i][j]);
    auto inv = qmat_inverse(q);
    if (!inv) throw Error(errc::internal, "unimodular matrix not invertible");
    ZMat r(n, std::vector<Int>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!(*inv)[i][j].is_integer())
                throw Error(errc::internal, "inverse of unimodular matrix not integral");
            r[i][j] = (*inv)[i][j].num();
        }
    return r;
}

SmithForm smith(const ZMat& a) {
    SmithForm sf;
    sf.d = a;
    std::size_t m = a.size(), n = m ? a[0].size() : 0;
    sf.u = zmat_identity(m);
    sf.v = zmat_identity(n);
    ZMat& d = sf.d;

    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(d[i], d[j]);
        std::swap(sf.u[i], sf.u[j]);
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (auto& row : d) std::swap(row[i], row[j]);
        for (auto& row : sf.v) std::swap(row[i], row[j]);
    };
    auto addmul_row = [&](std::size_t dst, std::size_t src, const Int& q) {
        for (std::size_t j = 0; j < n; ++j) d[dst][j] -= q * d[src][j];
        for (std::size_t j = 0; j < m; ++j) sf.u[dst][j] -= q * sf.u[src][j];
    };
    auto addmul_col = [&](std::size_t dst, std::size_t src, const Int& q) {
        for (std::size_t i = 0; i < m; ++i) d[i][dst] -= q * d[i][src];
        for (std::size_t i = 0; i < n; ++i) sf.v[i][dst] -= q * sf.v[i][src];
    };

    std::size_t t = 0;
    while (t < m && t < n) {
        // smallest nonzero entry of the trailing block to (t, t)
        bool found = false;
        std::size_t bi = t, bj = t;
        Int best = 0;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j) {
                if (d[i][j] == 0) continue;
                Int mag = d[i][j] < 0 ? Int(-d[i][j]) : d[i][j];
                if (!found || mag < best) {
                    found = true;
                    best = mag;
                    bi = i;
                    bj = j;
                }
            }
        if (!found) break;
        if (bi != t) swap_rows(t, bi);
        if (bj != t) swap_cols(t, bj);

        bool clean = true;
        for (std::size_t i = t + 1; i < m; ++i) {
            if (d[i][t] == 0) continue;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), d[i][t].get_mpz_t(), d[t][t].get_mpz_t());
            addmul_row(i, t, q);
            if (d[i][t] != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < n; ++j) {
            if (d[t][j] == 0) continue;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), d[t][j].get_mpz_t(), d[t][t].get_mpz_t());
            addmul_col(j, t, q);
            if (d[t][j] != 0) clean = false;
        }
        if (!clean) continue;   // smaller remainders appeared; repeat the pivot hunt

        // divisibility of the trailing block
        bool redo = false;
        for (std::size_t i = t + 1; i < m && !redo; ++i)
            for (std::size_t j = t + 1; j < n && !redo; ++j)
                if (!mpz_divisible_p(d[i][j].get_mpz_t(), d[t][t].get_mpz_t())) {
                    addmul_row(t, i, Int(-1));   // row_t += row_i
                    redo = true;
                }
        if (redo) continue;

        if (d[t][t] < 0) {
            for (std::size_t j = 0; j < n; ++j) d[t][j] = -d[t][j];
            for (std::size_t j = 0; j < m; ++j) sf.u[t][j] = -sf.u[t][j];
        }
        ++t;
    }
    sf.rank = t;
    return sf;
}

bool zlattice_member(const ZMat& b, const std::vector<Int>& z) {
    SmithForm sf = smith(b);
    // y = U z must satisfy d_i | y_i on the diagonal and vanish beyond
    std::size_t m = z.size();
    std::vector<Int> y(m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) y[i] += sf.u[i][j] * z[j];
    for (std::size_t i = 0; i < m; ++i) {
        if (i < sf.rank) {
            if (!mpz_divisible_p(y[i].get_mpz_t(), sf.d[i][i].get_mpz_t())) return false;
        } else if (y[i] != 0) {
            return false;
        }
    }
    return true;
}

// ------------------------------------------------------ decomp oracles --

namespace {

Int pow_int(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

// Largest denominator the truncated coefficient set allows for strand i.
Int strand_denominator_cap(const HeightSequence& h, unsigned long den_cap) {
    Int d = 1;
    for (const auto& [p, v] : h.exceptions()) {
        unsigned long emax = 0;
        Int power = 1;
        while (power * p <= Int(den_cap)) {
            power *= p;
            ++emax;
        }
        unsigned long e = v.is_inf() ? emax : std::min<unsigned long>(v.value(), emax);
        d *= pow_int(p, e);
    }
    return d;
}

} // namespace

bool oracle_member(const StrandGroup& a, const QVec& x, unsigned long den_cap) {
    std::size_t n = a.ambient();
    std::vector<QVec> gens;
    for (const Strand& s : a.strands()) {
        if (s.coeff.default_value() != ExtNat(0))
            throw Error(errc::internal, "oracle_member requires default-0 strand coefficients");
        Rat scale(Int(1), strand_denominator_cap(s.coeff, den_cap));
        gens.push_back(qvec_scale(scale, s.w));
    }
    // common integer scale
    Int lcm = 1;
    for (const QVec& g : gens)
        for (const Rat& e : g) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), e.den().get_mpz_t());
    for (const Rat& e : x) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), e.den().get_mpz_t());
    ZMat b(n, std::vector<Int>(gens.size()));
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) {
            Rat v = gens[j][i] * Rat(lcm);
            b[i][j] = v.num();
        }
    std::vector<Int> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rat v = x[i] * Rat(lcm);
        z[i] = v.num();
    }
    return zlattice_member(b, z);
}

std::optional<unsigned long> oracle_height(const StrandGroup& a, const QVec& x, const Int& p,
                                           unsigned long cap) {
    unsigned long k = 0;
    while (k < cap) {
        QVec scaled = qvec_scale(Rat(Int(1), pow_int(p, k + 1)), x);
        if (!oracle_member(a, scaled)) return k;
        ++k;
    }
    return std::nullopt;   // INF at truncation
}

// --------------------------------------------------- a-sequence oracle --

namespace {

bool in_Pn(const HeightSequence& h, const Int& p) {
    ExtNat v = h.at(p);
    return !v.is_inf() && v.value() >= 1;
}

bool in_Pinf(const HeightSequence& h, const Int& p) {
    return h.at(p).is_inf();
}

// 1-indexed position of p in the ascending enumeration of {q : pred(q)},
// or 0 when p is not in the set.
template <typename Pred>
std::size_t prime_position(const Int& p, Pred pred) {
    if (!pred(p)) return 0;
    std::size_t pos = 0;
    Int q = 1;
    while (true) {
        q = next_prime(q);
        if (pred(q)) ++pos;
        if (q == p) return pos;
        if (q > p) return 0;
    }
}

} // namespace

std::string verify_heights_from_terms(const ASequence& a, const HeightSequence& h,
                                      std::size_t window) {
    std::vector<Int> terms(window);
    for (std::size_t k = 0; k < window; ++k) terms[k] = a.term(k);

    std::set<Int> primes;
    for (const auto& [p, v] : h.exceptions()) primes.insert(p);
    Int q = 1;
    for (int i = 0; i < 15; ++i) {
        q = next_prime(q);
        primes.insert(q);
    }
    for (const Int& t : terms)
        for (const auto& [p, e] : factor(t)) primes.insert(p);

    for (const Int& p : primes) {
        std::vector<long> occ(window, 0);
        std::size_t first = window;
        unsigned long sum = 0;
        for (std::size_t k = 0; k < window; ++k) {
            occ[k] = vp_int(terms[k], p);
            if (occ[k] > 0 && first == window) first = k;
            sum += static_cast<unsigned long>(occ[k]);
        }
        ExtNat expect = h.at(p);
        if (expect.is_inf()) {
            // q_j enters at term j-1 and divides every later term
            std::size_t pos = prime_position(p, [&](const Int& r) { return in_Pinf(h, r); });
            if (pos == 0) return "prime " + p.get_str() + " misclassified as INF";
            if (pos - 1 >= window - 2) continue;   // enters too close to the window edge
            if (first != pos - 1)
                return "prime " + p.get_str() + " expected to enter at term " +
                       std::to_string(pos - 1) + " but enters at " + std::to_string(first);
            for (std::size_t k = first; k < window; ++k)
                if (occ[k] == 0)
                    return "prime " + p.get_str() + " expected INF but misses term " +
                           std::to_string(k);
        } else if (expect.value() == 0) {
            if (sum != 0)
                return "prime " + p.get_str() + " divides a term but has height 0";
        } else {
            // p_i contributes h_{p_i} exactly once, at term i-1
            std::size_t pos = prime_position(p, [&](const Int& r) { return in_Pn(h, r); });
            if (pos == 0) return "prime " + p.get_str() + " misclassified as finite";
            if (pos - 1 >= window - 2) continue;
            if (sum != expect.value())
                return "prime " + p.get_str() + " sums to " + std::to_string(sum) +
                       ", heights say " + expect.str();
            for (std::size_t k = pos; k < window; ++k)
                if (occ[k] != 0)
                    return "prime " + p.get_str() + " reappears after its slot";
        }
    }
    return "";
}

// ------------------------------------------------------- type oracles --

bool hom_exists_oracle(const HeightSequence& hs, const HeightSequence& ht) {
    // nonzero q with q * A(hs) inside A(ht): vp(q) >= hs(p) - ht(p) for all
    // p, with only finitely many primes allowed to force vp(q) != 0
    const ExtNat ds = hs.default_value(), dt = ht.default_value();
    if (ds.is_inf() && !dt.is_inf()) return false;
    if (!ds.is_inf() && !dt.is_inf() && ds.value() > dt.value()) return false;
    std::set<Int> profile;
    for (const auto& [p, v] : hs.exceptions()) profile.insert(p);
    for (const auto& [p, v] : ht.exceptions()) profile.insert(p);
    for (const Int& p : profile)
        if (hs.at(p).is_inf() && !ht.at(p).is_inf()) return false;
    return true;   // finite deficits are fixed by finitely many powers in q
}

HeightSequence random_heights(TestRng& rng) {
    static const unsigned long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31,
                                           37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
                                           79, 83, 89, 97};
    ExtNat def;
    switch (rng.below(3)) {
    case 0: def = ExtNat(0); break;
    case 1: def = ExtNat(1); break;
    default: def = ExtNat::inf(); break;
    }
    std::map<Int, ExtNat> exc;
    std::size_t count = rng.below(6);
    for (std::size_t i = 0; i < count; ++i) {
        Int p(primes[rng.below(25)]);
        ExtNat v = rng.chance(40) ? ExtNat::inf() : ExtNat(rng.below(11));
        exc[p] = v;
    }
    return HeightSequence(def, std::move(exc));
}

ASequence random_aseq(TestRng& rng) {
    if (rng.chance(50)) {
        std::vector<Int> pre, period;
        std::size_t np = rng.below(3);
        for (std::size_t i = 0; i < np; ++i) pre.push_back(Int(rng.range(2, 50)));
        std::size_t pp = 1 + rng.below(3);
        for (std::size_t i = 0; i < pp; ++i) period.push_back(Int(rng.range(2, 50)));
        return ASequence::explicit_seq(std::move(pre), std::move(period));
    }
    while (true) {
        HeightSequence h = random_heights(rng);
        auto r = canonical_aseq(h);
        if (auto* a = std::get_if<ASequence>(&r)) return *a;
    }
}

// ------------------------------------------------------ findual oracle --

FinAb random_finab(TestRng& rng, unsigned long max_order) {
    std::vector<Int> ds;
    Int order = 1;
    Int last = 1;
    std::size_t t = 1 + rng.below(3);
    static const long firsts[] = {2, 2, 2, 3, 3, 4, 5, 6, 8, 9, 12};
    for (std::size_t i = 0; i < t; ++i) {
        Int d = (i == 0) ? Int(firsts[rng.below(11)]) : last * Int(rng.range(1, 3));
        if (d < 2) continue;
        if (order * d > Int(max_order)) break;
        ds.push_back(d);
        order *= d;
        last = d;
    }
    return FinAb(ds);
}

GeneratedSES random_ses(TestRng& rng, unsigned long max_order) {
    FinAb b = random_finab(rng, max_order);
    std::size_t m = b.ngens();
    std::size_t k = 1 + rng.below(2);
    // random subgroup generators
    ZMat s(m, std::vector<Int>(k));
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < m; ++i) s[i][j] = Int(rng.below(16)) % b.factors()[i];

    // kernel lattice of z -> Sz mod E: pairs (z, t) with Sz = Et
    ZMat combined(m, std::vector<Int>(k + m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) combined[i][j] = s[i][j];
        combined[i][k + i] = -b.factors()[i];
    }
    SmithForm sf = smith(combined);
    // kernel basis: columns of V beyond the rank
    std::vector<std::vector<Int>> kernel_z;   // z-parts, length k
    ZMat vm = sf.v;
    for (std::size_t j = sf.rank; j < k + m; ++j) {
        std::vector<Int> z(k);
        for (std::size_t i = 0; i < k; ++i) z[i] = vm[i][j];
        kernel_z.push_back(std::move(z));
    }
    // lattice L in Z^k spanned by kernel_z; A = Z^k / L
    ZMat lat(k, std::vector<Int>(kernel_z.size(), 0));
    for (std::size_t j = 0; j < kernel_z.size(); ++j)
        for (std::size_t i = 0; i < k; ++i) lat[i][j] = kernel_z[j][i];
    SmithForm lf = smith(lat);
    if (lf.rank != k) throw Error(errc::internal, "subgroup kernel lattice not full rank");

    // A = sum Z/d_i via z -> (U z)_i mod d_i; generators map through U^{-1}
    ZMat uinv = zmat_inverse_unimodular(lf.u);
    std::vector<Int> adims;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < k; ++i)
        if (lf.d[i][i] >= 2) {
            adims.push_back(lf.d[i][i]);
            keep.push_back(i);
        }
    FinAb a(adims);
    // f(e_j of A) = phi(U^{-1} e_{keep[j]}) in B
    ZMat fmat(m, std::vector<Int>(keep.size(), 0));
    for (std::size_t j = 0; j < keep.size(); ++j)
        for (std::size_t i = 0; i < m; ++i) {
            Int acc = 0;
            for (std::size_t t2 = 0; t2 < k; ++t2) acc += s[i][t2] * uinv[t2][keep[j]];
            fmat[i][j] = acc;
        }
    FinHom f(a, b, fmat);

    // C = Z^m / (E Z^m + S Z^k) via Smith of [E | S]
    ZMat es(m, std::vector<Int>(m + k, 0));
    for (std::size_t i = 0; i < m; ++i) {
        es[i][i] = b.factors()[i];
        for (std::size_t j = 0; j < k; ++j) es[i][m + j] = s[i][j];
    }
    SmithForm cf = smith(es);
    std::vector<Int> cdims;
    std::vector<std::size_t> ckeep;
    for (std::size_t i = 0; i < cf.rank; ++i)
        if (cf.d[i][i] >= 2) {
            cdims.push_back(cf.d[i][i]);
            ckeep.push_back(i);
        }
    FinAb c(cdims);
    // g = rows of U' for the surviving factors
    ZMat gmat(ckeep.size(), std::vector<Int>(m, 0));
    for (std::size_t r2 = 0; r2 < ckeep.size(); ++r2)
        for (std::size_t i = 0; i < m; ++i) gmat[r2][i] = cf.u[ckeep[r2]][i];
    FinHom g(b, c, gmat);

    return GeneratedSES{std::move(f), std::move(g)};
}

// ----------------------------------------------------- decomp fixtures --

StrandGroup catalog_clipped(unsigned long glue_prime) {
    HeightSequence h2(ExtNat(0), {{Int(2), ExtNat::inf()}});
    HeightSequence h3(ExtNat(0), {{Int(3), ExtNat::inf()}});
    HeightSequence hz;
    Rat g(1, (long)glue_prime);
    return StrandGroup(2, {{h2, {Rat(1), Rat(0)}},
                           {h3, {Rat(0), Rat(1)}},
                           {hz, {g, g}}});
}

StrandGroup random_cd_group(TestRng& rng, std::size_t rank) {
    std::vector<Strand> strands;
    for (std::size_t i = 0; i < rank; ++i) {
        HeightSequence h;
        switch (rng.below(7)) {
        case 0: h = HeightSequence(); break;                                          // tp(Z)
        case 1: h = HeightSequence(ExtNat(0), {{Int(2), ExtNat::inf()}}); break;      // Z[1/2]
        case 2: h = HeightSequence(ExtNat(0), {{Int(3), ExtNat::inf()}}); break;      // Z[1/3]
        case 3: h = HeightSequence(ExtNat(0), {{Int(5), ExtNat::inf()}}); break;      // Z[1/5]
        case 4:
            h = HeightSequence(ExtNat(0), {{Int(2), ExtNat::inf()}, {Int(3), ExtNat::inf()}});
            break;                                                                    // Z[1/6]
        case 5: h = HeightSequence(ExtNat::inf(), {}); break;                         // Q
        default: h = HeightSequence(ExtNat(0), {{Int(2), ExtNat(3)}}); break;         // tp(Z) again
        }
        QVec w(rank);
        static const long scales_num[] = {1, 1, 2, 3, 1};
        static const long scales_den[] = {1, 2, 1, 2, 3};
        std::size_t si = rng.below(5);
        w[i] = Rat(scales_num[si], scales_den[si]);
        strands.push_back({std::move(h), std::move(w)});
    }
    return StrandGroup(rank, std::move(strands));
}

PlantedInstance random_planted_instance(TestRng& rng) {
    static const unsigned long glues[] = {5, 7, 11};
    std::size_t cd_rank = 1 + rng.below(3);
    StrandGroup cd = random_cd_group(rng, cd_rank);
    StrandGroup clipped = catalog_clipped(glues[rng.below(3)]);
    PlantedInstance inst;
    inst.group = StrandGroup::direct_sum(cd, clipped);
    for (const Strand& s : cd.strands()) inst.planted_types.push_back(canonical_type(s.coeff));
    std::sort(inst.planted_types.begin(), inst.planted_types.end());
    inst.clipped_rank = 2;
    return inst;
}

} // namespace protori::testsupport

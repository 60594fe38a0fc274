#include "protori/decomp.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace protori {

namespace {

Int pow_int(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

// memoized prime support of small integers (search loops refactor the same
// handful of numerators and denominators constantly)
const std::vector<Int>& prime_support(const Int& n) {
    static thread_local std::map<Int, std::vector<Int>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<Int> primes;
    for (const auto& [p, e] : factor(n)) primes.push_back(p);
    return cache.emplace(n, std::move(primes)).first->second;
}

void primes_of_rat(const Rat& q, std::set<Int>& out) {
    if (q.is_zero()) return;
    Int n = q.num() < 0 ? Int(-q.num()) : q.num();
    if (n > 1)
        for (const Int& p : prime_support(n)) out.insert(p);
    if (q.den() > 1)
        for (const Int& p : prime_support(q.den())) out.insert(p);
}

std::set<Int> primes_of_vec(const QVec& v) {
    std::set<Int> out;
    for (const Rat& x : v) primes_of_rat(x, out);
    return out;
}

Int fresh_prime_beyond(const std::set<Int>& primes) {
    Int top = 1;
    for (const Int& p : primes) top = std::max(top, p);
    return next_prime(top);
}

// Ascending r-subsets of {0..n-1}.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    std::size_t r = idx.size();
    for (std::size_t i = r; i-- > 0;) {
        if (idx[i] + (r - i) < n) {
            ++idx[i];
            for (std::size_t j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

/*
 * Membership over the local ring Z_(p): does target lie in the Z_(p)-span
 * of the columns?  Valuation-pivoted elimination: pivots are entries of
 * minimal p-valuation, so every elimination ratio is p-integral and the
 * forced back-substitution coefficient exists iff its valuation is >= 0.
 */
bool dvr_solve(std::vector<QVec> cols, QVec t, const Int& p) {
    std::size_t n = t.size(), m = cols.size();
    std::vector<bool> row_used(n, false), col_used(m, false);
    while (true) {
        bool found = false;
        long best_v = 0;
        std::size_t bi = 0, bj = 0;
        for (std::size_t j = 0; j < m; ++j) {
            if (col_used[j]) continue;
            for (std::size_t i = 0; i < n; ++i) {
                if (row_used[i] || cols[j][i].is_zero()) continue;
                long v = vp(cols[j][i], p);
                if (!found || v < best_v) {
                    found = true;
                    best_v = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (!found) break;
        const Rat pivot = cols[bj][bi];
        for (std::size_t j = 0; j < m; ++j) {
            if (col_used[j] || j == bj || cols[j][bi].is_zero()) continue;
            Rat ratio = cols[j][bi] / pivot;
            cols[j] = qvec_sub(cols[j], qvec_scale(ratio, cols[bj]));
        }
        if (!t[bi].is_zero()) {
            Rat c = t[bi] / pivot;
            if (vp(c, p) < 0) return false;   // forced coefficient not p-integral
            t = qvec_sub(t, qvec_scale(c, cols[bj]));
        }
        row_used[bi] = true;
        col_used[bj] = true;
    }
    return qvec_is_zero(t);
}

// x in sum_i p^{-h_p(i)} Z_(p) w_i + (Q-span of p-INF strands)?
bool local_member(const StrandGroup& a, const QVec& x, const Int& p) {
    const StrandGroup::LocalData& data = a.local_data(p);
    QVec t = data.inf.residual(x);
    if (qvec_is_zero(t)) return true;
    return dvr_solve(data.cols, std::move(t), p);
}

// max k with x/p^k in A locally at p, for a member x outside the p-INF span.
unsigned long local_height(const StrandGroup& a, const QVec& x, const Int& p) {
    // heights are bounded by strand data at each prime; generous guard only
    unsigned long cap = 64;
    for (const Strand& s : a.strands()) {
        ExtNat h = s.coeff.at(p);
        if (!h.is_inf()) cap += h.value();
        for (const Rat& e : s.w)
            if (!e.is_zero()) cap += static_cast<unsigned long>(std::llabs(vp(e, p)));
    }
    for (const Rat& e : x)
        if (!e.is_zero()) cap += static_cast<unsigned long>(std::llabs(vp(e, p)));

    auto ok = [&](unsigned long k) {
        return local_member(a, qvec_scale(Rat(Int(1), pow_int(p, k)), x), p);
    };
    unsigned long hi = 1;
    while (hi <= cap && ok(hi)) hi *= 2;
    if (hi > cap)
        throw Error(errc::internal, "height search exceeded its bound at p = " + p.get_str());
    unsigned long lo = hi / 2;   // ok(lo) holds (lo = 0 from the member precondition)
    while (lo + 1 < hi) {
        unsigned long mid = lo + (hi - lo) / 2;
        if (ok(mid)) lo = mid;
        else hi = mid;
    }
    return lo;
}

ExtNat height_at(const StrandGroup& a, const QVec& x, const Int& p) {
    if (a.inf_span(p).contains(x)) return ExtNat::inf();
    return ExtNat(local_height(a, x, p));
}

// A(h) * u inside B: the base membership plus, per profile prime, the top
// power u/p^{h_p} (integer multiples close the rest) or, at INF heights,
// containment in B's p-divisible span.
bool rational_multiples_into(const HeightSequence& h, const QVec& u, const StrandGroup& b) {
    if (qvec_is_zero(u)) return true;
    if (!member(b, u)) return false;
    std::set<Int> profile = b.relevant_primes();
    for (const auto& [p, v] : h.exceptions()) profile.insert(p);
    for (const Int& p : primes_of_vec(u)) profile.insert(p);
    Int fresh = fresh_prime_beyond(profile);
    profile.insert(fresh);
    for (const Int& p : profile) {
        ExtNat hp = h.at(p);
        if (hp.is_inf()) {
            if (!b.local_data(p).inf.contains(u)) return false;
        } else if (hp.value() > 0) {
            QVec scaled = qvec_scale(Rat(Int(1), pow_int(p, hp.value())), u);
            if (!local_member(b, scaled, p)) return false;   // other primes unaffected
        }
    }
    return true;
}

// Strand order for candidate checking: most restrictive coefficients first,
// so doomed candidates die on their first membership test.  Pure ordering
// heuristic; accepted witnesses do not depend on it.
std::vector<std::size_t> restrictive_order(const StrandGroup& a) {
    std::vector<std::size_t> idx(a.strands().size());
    std::iota(idx.begin(), idx.end(), 0);
    auto score = [&](std::size_t i) {
        const HeightSequence& h = a.strands()[i].coeff;
        unsigned long s = h.default_value().is_inf() ? 1000000 : 1000 * h.default_value().value();
        for (const auto& [p, v] : h.exceptions()) s += v.is_inf() ? 100 : 1;
        return s;
    };
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t i, std::size_t j) { return score(i) < score(j); });
    return idx;
}

} // namespace

StrandGroup::StrandGroup(std::size_t ambient, std::vector<Strand> strands)
    : ambient_(ambient), strands_(std::move(strands)) {
    std::vector<QVec> vecs;
    for (const Strand& s : strands_) {
        if (s.w.size() != ambient_)
            throw Error(errc::semantic_error, "strand vector length does not match the ambient");
        if (qvec_is_zero(s.w))
            throw Error(errc::semantic_error, "strand vector must be nonzero");
        vecs.push_back(s.w);
    }
    span_ = Echelon(vecs, ambient_);

    for (const Strand& s : strands_) {
        for (const Rat& e : s.w) primes_of_rat(e, relevant_primes_);
        for (const auto& [p, v] : s.coeff.exceptions()) relevant_primes_.insert(p);
    }
    // primes dividing every maximal minor of the (integerized) strand matrix
    std::size_t r = span_.rank();
    if (r > 0) {
        Int lcm_den = 1;
        for (const Strand& s : strands_)
            for (const Rat& e : s.w) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), e.den().get_mpz_t());
        std::vector<std::vector<Int>> m(ambient_, std::vector<Int>(strands_.size()));
        for (std::size_t j = 0; j < strands_.size(); ++j)
            for (std::size_t i = 0; i < ambient_; ++i) {
                Rat scaled = strands_[j].w[i] * Rat(lcm_den);
                m[i][j] = scaled.num();   // integral now
            }
        Int g = 0;
        std::vector<std::size_t> rows(r), cols(r);
        std::iota(rows.begin(), rows.end(), 0);
        do {
            std::iota(cols.begin(), cols.end(), 0);
            do {
                QMat sub(r, QVec(r));
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < r; ++j) sub[i][j] = Rat(m[rows[i]][cols[j]]);
                Int d = qmat_det(sub).num();
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
            } while (next_combination(cols, strands_.size()));
        } while (next_combination(rows, ambient_));
        if (g < 0) g = -g;
        if (g > 1)
            for (const auto& [p, e] : factor(g)) relevant_primes_.insert(p);
    }
}

Echelon StrandGroup::inf_span(const Int& p) const {
    std::vector<QVec> vecs;
    for (const Strand& s : strands_)
        if (s.coeff.at(p).is_inf()) vecs.push_back(s.w);
    return Echelon(vecs, ambient_);
}

Echelon StrandGroup::generic_inf_span() const {
    std::vector<QVec> vecs;
    for (const Strand& s : strands_)
        if (s.coeff.default_value().is_inf()) vecs.push_back(s.w);
    return Echelon(vecs, ambient_);
}

const StrandGroup::LocalData& StrandGroup::local_data(const Int& p) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->by_prime.find(p);
    if (it != cache_->by_prime.end()) return it->second;
    LocalData data;
    data.inf = inf_span(p);
    for (const Strand& s : strands_) {
        ExtNat h = s.coeff.at(p);
        if (h.is_inf()) continue;
        QVec u = data.inf.residual(s.w);
        if (qvec_is_zero(u)) continue;
        if (h.value() > 0) u = qvec_scale(Rat(Int(1), pow_int(p, h.value())), u);
        data.cols.push_back(std::move(u));
    }
    return cache_->by_prime.emplace(p, std::move(data)).first->second;
}

StrandGroup StrandGroup::direct_sum(const StrandGroup& a, const StrandGroup& b) {
    std::size_t n = a.ambient_ + b.ambient_;
    std::vector<Strand> strands;
    for (const Strand& s : a.strands_) {
        QVec w(n);
        for (std::size_t i = 0; i < a.ambient_; ++i) w[i] = s.w[i];
        strands.push_back({s.coeff, std::move(w)});
    }
    for (const Strand& s : b.strands_) {
        QVec w(n);
        for (std::size_t i = 0; i < b.ambient_; ++i) w[a.ambient_ + i] = s.w[i];
        strands.push_back({s.coeff, std::move(w)});
    }
    return StrandGroup(n, std::move(strands));
}

std::string StrandGroup::str() const {
    std::string out = "strands [";
    for (std::size_t i = 0; i < strands_.size(); ++i) {
        if (i) out += ", ";
        out += "(" + strands_[i].coeff.str() + ", [";
        for (std::size_t j = 0; j < strands_[i].w.size(); ++j) {
            if (j) out += ", ";
            out += strands_[i].w[j].str();
        }
        out += "])";
    }
    return out + "]";
}

bool member(const StrandGroup& a, const QVec& x) {
    if (x.size() != a.ambient())
        throw Error(errc::dimension_mismatch, "vector length does not match the ambient");
    if (qvec_is_zero(x)) return true;
    if (!a.span().contains(x)) return false;
    std::set<Int> primes = a.relevant_primes();
    for (const Int& p : primes_of_vec(x)) primes.insert(p);
    for (const Int& p : primes)
        if (!local_member(a, x, p)) return false;
    return true;
}

HeightSequence element_heights(const StrandGroup& a, const QVec& x) {
    if (x.size() != a.ambient())
        throw Error(errc::dimension_mismatch, "vector length does not match the ambient");
    if (qvec_is_zero(x)) throw Error(errc::zero_vector, "height sequence of the zero vector");
    if (!member(a, x)) throw Error(errc::not_a_member, "element_heights of a non-member");
    std::set<Int> profile = a.relevant_primes();
    for (const Int& p : primes_of_vec(x)) profile.insert(p);
    // outside the profile the local picture is the generic one
    Int fresh = fresh_prime_beyond(profile);
    ExtNat generic = height_at(a, x, fresh);
    std::map<Int, ExtNat> exc;
    for (const Int& p : profile) {
        ExtNat h = height_at(a, x, p);
        if (h != generic) exc.emplace(p, h);
    }
    return HeightSequence(generic, std::move(exc));
}

bool maps_into(const QMat& m, const StrandGroup& a, const StrandGroup& b) {
    if (m.size() != b.ambient())
        throw Error(errc::dimension_mismatch, "matrix rows do not match the target ambient");
    for (const QVec& row : m)
        if (row.size() != a.ambient())
            throw Error(errc::dimension_mismatch, "matrix columns do not match the source ambient");
    for (std::size_t i : restrictive_order(a)) {
        const Strand& s = a.strands()[i];
        if (!rational_multiples_into(s.coeff, qmat_apply(m, s.w), b)) return false;
    }
    return true;
}

namespace {

// All a/d in lowest terms with |a| <= bound, 1 <= d <= bound, sorted by
// (max(|a|,d), d, a); zero first.
std::vector<Rat> bounded_rationals(unsigned bound) {
    std::vector<Rat> out;
    out.push_back(Rat(0));
    std::vector<std::tuple<unsigned, unsigned, long>> keys;
    std::vector<Rat> vals;
    for (unsigned d = 1; d <= bound; ++d)
        for (long n = -(long)bound; n <= (long)bound; ++n) {
            if (n == 0) continue;
            if (std::gcd(std::labs(n), (long)d) != 1) continue;
            keys.emplace_back(std::max<unsigned>(std::labs(n), d), d, n);
            vals.push_back(Rat(n, (long)d));
        }
    std::vector<std::size_t> idx(vals.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return keys[i] < keys[j]; });
    for (std::size_t i : idx) out.push_back(vals[i]);
    return out;
}

unsigned rat_level(const Rat& q) {
    if (q.is_zero()) return 0;
    Int a = q.num() < 0 ? Int(-q.num()) : q.num();
    Int top = std::max(a, q.den());
    return static_cast<unsigned>(top.get_ui());
}

bool within_bound(const Rat& q, unsigned bound) {
    Int a = q.num() < 0 ? Int(-q.num()) : q.num();
    return a <= Int(bound) && q.den() <= Int(bound);
}

// Integer points of the span with max-norm exactly `level`, enumerated by
// their pivot coordinates (which determine a span member), primitive and
// sign-normalized; emitted in lexicographic pivot-coordinate order.
std::vector<std::vector<Int>> span_points_at_level(const StrandGroup& a, unsigned level) {
    std::vector<std::vector<Int>> out;
    std::size_t r = a.rank(), n = a.ambient();
    if (r == 0) return out;
    const auto& rows = a.span().rows();
    long lo = -(long)level, hi = (long)level;
    std::vector<long> c(r, lo);
    while (true) {
        // v = sum c_k row_k; pivot coordinates of v are exactly c
        QVec v(n);
        for (std::size_t k = 0; k < r; ++k)
            if (c[k] != 0) v = qvec_add(v, qvec_scale(Rat(c[k]), rows[k]));
        bool good = !qvec_is_zero(v);
        std::vector<Int> vi(n);
        long maxnorm = 0;
        if (good)
            for (std::size_t i = 0; i < n && good; ++i) {
                if (!v[i].is_integer()) good = false;
                else {
                    vi[i] = v[i].num();
                    Int av = vi[i] < 0 ? Int(-vi[i]) : vi[i];
                    if (av > Int(hi)) good = false;
                    else maxnorm = std::max(maxnorm, (long)av.get_si());
                }
            }
        if (good && maxnorm == (long)level) {
            Int g = 0;
            for (const Int& x : vi) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
            if (g == 1) {
                // sign normalization: first nonzero positive
                for (const Int& x : vi) {
                    if (x == 0) continue;
                    if (x > 0) out.push_back(vi);
                    break;
                }
            }
        }
        std::size_t k = 0;
        while (k < r) {
            if (c[k] < hi) {
                ++c[k];
                break;
            }
            c[k] = lo;
            ++k;
        }
        if (k == r) break;
    }
    return out;
}

} // namespace

std::optional<Idempotent> find_rank1_idempotent(const StrandGroup& a, unsigned bound) {
    std::size_t n = a.ambient(), r = a.rank();
    if (r == 0) return std::nullopt;
    const std::vector<Rat> ratpool = bounded_rationals(bound);
    const std::vector<std::size_t> order = restrictive_order(a);
    const std::vector<std::size_t>& pivots = a.span().pivots();

    for (unsigned level = 1; level <= bound; ++level) {
        for (const std::vector<Int>& v : span_points_at_level(a, level)) {
            // determined coordinate: first pivot with nonzero v entry
            std::size_t jstar = n;
            std::vector<std::size_t> free_coords;
            for (std::size_t pc : pivots) {
                if (jstar == n && v[pc] != 0) jstar = pc;
                else free_coords.push_back(pc);
            }
            if (jstar == n) continue;   // cannot happen for nonzero span points
            QVec vq(n);
            for (std::size_t i = 0; i < n; ++i) vq[i] = Rat(v[i]);

            std::map<std::pair<std::size_t, std::string>, bool> memo;
            auto strand_ok = [&](std::size_t i, const Rat& c) {
                auto key = std::make_pair(i, c.str());
                auto it = memo.find(key);
                if (it != memo.end()) return it->second;
                bool ok = rational_multiples_into(a.strands()[i].coeff, qvec_scale(c, vq), a);
                memo.emplace(key, ok);
                return ok;
            };

            // free entries by increasing max level, lexicographic within
            std::size_t nfree = free_coords.size();
            for (unsigned flevel = 0; flevel <= bound; ++flevel) {
                std::size_t pool_end = 0;
                while (pool_end < ratpool.size() && rat_level(ratpool[pool_end]) <= flevel) ++pool_end;
                std::vector<std::size_t> tup(nfree, 0);
                while (true) {
                    unsigned maxl = 0;
                    for (std::size_t k = 0; k < nfree; ++k)
                        maxl = std::max(maxl, rat_level(ratpool[tup[k]]));
                    bool fresh_level = (maxl == flevel) || (nfree == 0 && flevel == 0);
                    if (fresh_level) {
                        QVec f(n);
                        Rat acc(1);
                        for (std::size_t k = 0; k < nfree; ++k) {
                            f[free_coords[k]] = ratpool[tup[k]];
                            acc -= ratpool[tup[k]] * vq[free_coords[k]];
                        }
                        Rat fj = acc / vq[jstar];
                        if (within_bound(fj, bound)) {
                            f[jstar] = fj;
                            bool all_ok = true;
                            bool any_nonzero = false;
                            for (std::size_t i : order) {
                                Rat c = qvec_dot(f, a.strands()[i].w);
                                if (c.is_zero()) continue;
                                any_nonzero = true;
                                if (!strand_ok(i, c)) {
                                    all_ok = false;
                                    break;
                                }
                            }
                            if (all_ok && any_nonzero) return Idempotent{v, f};
                        }
                    }
                    if (nfree == 0) break;
                    std::size_t k = 0;
                    while (k < nfree) {
                        if (tup[k] + 1 < pool_end) {
                            ++tup[k];
                            break;
                        }
                        tup[k] = 0;
                        ++k;
                    }
                    if (k == nfree) break;
                }
                if (nfree == 0) break;   // single candidate per v
            }
        }
    }
    return std::nullopt;
}

std::pair<TypeClass, StrandGroup> split(const StrandGroup& a, const Idempotent& e) {
    std::size_t n = a.ambient();
    if (e.v.size() != n || e.f.size() != n)
        throw Error(errc::dimension_mismatch, "idempotent shape does not match the ambient");
    QVec vq(n);
    for (std::size_t i = 0; i < n; ++i) vq[i] = Rat(e.v[i]);
    if (qvec_dot(e.f, vq) != Rat(1))
        throw Error(errc::not_idempotent, "f*v != 1");

    std::vector<Rat> cs(a.strands().size());
    bool any = false;
    for (std::size_t i = 0; i < a.strands().size(); ++i) {
        cs[i] = qvec_dot(e.f, a.strands()[i].w);
        if (cs[i].is_zero()) continue;
        any = true;
        if (!rational_multiples_into(a.strands()[i].coeff, qvec_scale(cs[i], vq), a))
            throw Error(errc::not_idempotent, "e(A) is not contained in A");
    }
    if (!any) throw Error(errc::not_idempotent, "e vanishes on A");

    // type of e(A) = (sum_i c_i A(h_i)) v: finite offsets from the c_i are
    // invisible in the canonical type, so only defaults and INF positions count
    ExtNat def(0);
    std::set<Int> profile;
    for (std::size_t i = 0; i < a.strands().size(); ++i) {
        if (cs[i].is_zero()) continue;
        def = max(def, a.strands()[i].coeff.default_value());
        for (const auto& [p, v] : a.strands()[i].coeff.exceptions()) profile.insert(p);
    }
    std::set<Int> flips;
    for (const Int& p : profile) {
        bool inf_here = false;
        for (std::size_t i = 0; i < a.strands().size(); ++i)
            if (!cs[i].is_zero() && a.strands()[i].coeff.at(p).is_inf()) inf_here = true;
        if (inf_here != def.is_inf()) flips.insert(p);
    }
    TypeClass summand(def, std::move(flips));

    std::vector<Strand> rest;
    for (std::size_t i = 0; i < a.strands().size(); ++i) {
        QVec w = qvec_sub(a.strands()[i].w, qvec_scale(cs[i], vq));
        if (qvec_is_zero(w)) continue;
        rest.push_back({a.strands()[i].coeff, std::move(w)});
    }
    StrandGroup complement(n, std::move(rest));
    if (complement.rank() + 1 != a.rank())
        throw Error(errc::internal, "split did not reduce the rank by one");
    return {summand, complement};
}

Decomposition main_decompose(const StrandGroup& a, unsigned bound) {
    Decomposition d;
    d.remainder = a;
    d.bound_used = bound;
    while (d.remainder.rank() > 0) {
        auto e = find_rank1_idempotent(d.remainder, bound);
        if (!e) break;   // bound-relative exhaustion
        auto [type, complement] = split(d.remainder, *e);
        d.torus_types.push_back(type);
        d.certificates.push_back(*e);
        d.remainder = std::move(complement);
    }
    std::sort(d.torus_types.begin(), d.torus_types.end());
    d.complete = true;   // rank 0 reached or the search space exhausted at the bound
    return d;
}

bool is_torus_free(const StrandGroup& a) {
    // f(w_i) must vanish on every strand with heights above tp(Z); an
    // integral nonzero functional exists iff those strands miss the span.
    std::vector<QVec> killed;
    for (const Strand& s : a.strands())
        if (canonical_type(s.coeff) != tp_Z()) killed.push_back(s.w);
    return Echelon(killed, a.ambient()).rank() == a.rank();
}

QSummandReport has_Q_summand(const StrandGroup& a) {
    // d(A) = intersection over the prime profile of the p-INF spans
    std::set<Int> profile;
    for (const Strand& s : a.strands())
        for (const auto& [p, v] : s.coeff.exceptions()) profile.insert(p);
    Echelon acc = a.generic_inf_span();
    for (const Int& p : profile) {
        if (acc.rank() == 0) break;
        acc = span_intersection(acc, a.inf_span(p));
    }
    return QSummandReport{acc.rank() > 0, acc.rank()};
}

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

bool cd_iso(std::vector<TypeClass> a, std::vector<TypeClass> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

namespace {

// First r independent strand vectors, as span basis columns.
std::vector<QVec> canonical_basis(const StrandGroup& g) {
    std::vector<QVec> basis;
    for (const Strand& s : g.strands()) {
        std::vector<QVec> trial = basis;
        trial.push_back(s.w);
        if (Echelon(trial, g.ambient()).rank() > basis.size()) basis.push_back(s.w);
        if (basis.size() == g.rank()) break;
    }
    return basis;
}

QMat columns_to_matrix(const std::vector<QVec>& cols, std::size_t dim) {
    QMat m(dim, QVec(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < dim; ++i) m[i][j] = cols[j][i];
    return m;
}

} // namespace

NearIsoResult near_iso(const StrandGroup& a, const StrandGroup& b, unsigned bound) {
    NearIsoResult res;
    res.bound_used = bound;
    if (a.rank() != b.rank()) {
        res.verdict = Verdict::no;
        res.obstruction = "rank mismatch";
        return res;
    }
    std::size_t r = a.rank();
    if (r == 0) {
        res.verdict = Verdict::yes;
        res.multipliers.insert(1);
        return res;
    }
    std::vector<QVec> basis_a = canonical_basis(a);
    std::vector<QVec> basis_b = canonical_basis(b);
    QMat amat = columns_to_matrix(basis_a, a.ambient());
    QMat bmat = columns_to_matrix(basis_b, b.ambient());
    QMat pia = left_inverse_on_pivots(basis_a, a.ambient());
    QMat pib = left_inverse_on_pivots(basis_b, b.ambient());

    Int running_gcd = 0;
    // returns true once gcd(multipliers) = 1
    auto try_candidate = [&](const QMat& c) {
        if (qmat_det(c).is_zero()) return false;
        QMat m = qmat_mul(bmat, qmat_mul(c, pia));
        if (!maps_into(m, a, b)) return false;
        QMat cinv = *qmat_inverse(c);
        for (unsigned n = 1; n <= bound; ++n) {
            QMat psi = qmat_mul(amat, qmat_mul(qmat_scale(Rat((long)n), cinv), pib));
            if (maps_into(psi, b, a)) {
                res.multipliers.insert(Int(n));
                res.witnesses.push_back({m, psi, Int(n)});
                mpz_gcd(running_gcd.get_mpz_t(), running_gcd.get_mpz_t(), Int(n).get_mpz_t());
                break;
            }
        }
        return running_gcd == 1;
    };

    // stage 1: strand-correspondence candidates, in lexicographic target
    // order: the map sending the k-th basis strand of A to the j_k-th strand
    // vector of B, for every r-tuple of distinct strand indices
    {
        std::size_t mb = b.strands().size();
        std::vector<std::size_t> pick(r, 0);
        while (true) {
            bool distinct = true;
            for (std::size_t i = 0; i < r && distinct; ++i)
                for (std::size_t j = i + 1; j < r; ++j)
                    if (pick[i] == pick[j]) {
                        distinct = false;
                        break;
                    }
            if (distinct) {
                QMat c(r, QVec(r));
                for (std::size_t k = 0; k < r; ++k) {
                    QVec coords = qmat_apply(pib, b.strands()[pick[k]].w);
                    for (std::size_t i = 0; i < r; ++i) c[i][k] = coords[i];
                }
                if (try_candidate(c)) {
                    res.verdict = Verdict::yes;
                    return res;
                }
            }
            std::size_t k = 0;
            while (k < r) {
                if (pick[k] + 1 < mb) {
                    ++pick[k];
                    break;
                }
                pick[k] = 0;
                ++k;
            }
            if (k == r) break;
        }
    }

    // stage 2: full level-lex enumeration of r x r rational matrices
    const std::vector<Rat> ratpool = bounded_rationals(bound);
    std::vector<std::size_t> tup(r * r, 0);
    for (unsigned clevel = 0; clevel <= bound; ++clevel) {
        std::size_t pool_end = 0;
        while (pool_end < ratpool.size() && rat_level(ratpool[pool_end]) <= clevel) ++pool_end;
        std::fill(tup.begin(), tup.end(), 0);
        while (true) {
            unsigned maxl = 0;
            for (std::size_t k = 0; k < tup.size(); ++k)
                maxl = std::max(maxl, rat_level(ratpool[tup[k]]));
            if (maxl == clevel) {
                QMat c(r, QVec(r));
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < r; ++j) c[i][j] = ratpool[tup[i * r + j]];
                if (try_candidate(c)) {
                    res.verdict = Verdict::yes;
                    return res;
                }
            }
            std::size_t k = 0;
            while (k < tup.size()) {
                if (tup[k] + 1 < pool_end) {
                    ++tup[k];
                    break;
                }
                tup[k] = 0;
                ++k;
            }
            if (k == tup.size()) break;
        }
    }

    // exhausted without gcd 1: definitive "no" only on a complete obstruction
    Decomposition da = main_decompose(a, bound);
    Decomposition db = main_decompose(b, bound);
    if (da.rank0_reached() && db.rank0_reached() && !cd_iso(da.torus_types, db.torus_types)) {
        res.verdict = Verdict::no;
        res.obstruction = "type multiset mismatch of completely decomposable groups";
        return res;
    }
    res.verdict = Verdict::inconclusive;
    return res;
}

std::size_t protorus_dim(const ProtorusDesc& p) { return p.dual.rank(); }

ProtorusDecomposition decompose_protorus(const ProtorusDesc& p, unsigned bound) {
    Decomposition d = main_decompose(p.dual, bound);
    ProtorusDecomposition out;
    out.torus_part = d.torus_types;   // factor-wise dual: tp(Z) |-> circle, else solenoid
    out.clipped_part = ProtorusDesc{d.remainder};
    out.complete = d.complete;
    out.bound_used = d.bound_used;
    out.remainder_torus_free = is_torus_free(d.remainder);
    out.remainder_has_Q_summand = has_Q_summand(d.remainder).has;
    return out;
}

namespace {

// splitmix64: pinned permutation stream independent of the C++ stdlib.
struct SeededRng {
    std::uint64_t s;
    explicit SeededRng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

std::vector<unsigned> random_permutation(std::size_t n, SeededRng& rng) {
    std::vector<unsigned> p(n);
    std::iota(p.begin(), p.end(), 0u);
    for (std::size_t i = n; i-- > 1;)
        std::swap(p[i], p[rng.next() % (i + 1)]);
    return p;
}

} // namespace

UniquenessReport uniqueness_check(const StrandGroup& a, unsigned trials, unsigned bound,
                                  std::uint64_t seed) {
    if (trials < 2) throw Error(errc::semantic_error, "uniqueness check needs at least 2 trials");
    UniquenessReport rep;
    for (unsigned t = 0; t < trials; ++t) {
        SeededRng rng(seed * 0x9E3779B97F4A7C15ull + t + 1);
        UniquenessReport::Trial trial;
        trial.strand_order = random_permutation(a.strands().size(), rng);
        trial.coordinate_relabel = random_permutation(a.ambient(), rng);
        std::vector<Strand> strands;
        for (unsigned idx : trial.strand_order) {
            const Strand& s = a.strands()[idx];
            QVec w(a.ambient());
            for (std::size_t i = 0; i < a.ambient(); ++i) w[trial.coordinate_relabel[i]] = s.w[i];
            strands.push_back({s.coeff, std::move(w)});
        }
        StrandGroup g(a.ambient(), std::move(strands));
        Decomposition d = main_decompose(g, bound);
        trial.torus_types = d.torus_types;
        trial.remainder = d.remainder;
        rep.trials.push_back(std::move(trial));
    }
    rep.torus_multisets_equal = true;
    for (std::size_t i = 1; i < rep.trials.size(); ++i)
        if (!cd_iso(rep.trials[0].torus_types, rep.trials[i].torus_types))
            rep.torus_multisets_equal = false;
    rep.remainders_compatible = true;
    for (std::size_t i = 0; i < rep.trials.size(); ++i)
        for (std::size_t j = i + 1; j < rep.trials.size(); ++j) {
            NearIsoResult r = near_iso(rep.trials[i].remainder, rep.trials[j].remainder, bound);
            rep.pair_checks.push_back({i, j, r.verdict, r.multipliers});
            if (r.verdict != Verdict::yes) rep.remainders_compatible = false;
        }
    return rep;
}

} // namespace protori

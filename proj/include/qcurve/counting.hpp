#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "qcurve/family.hpp"

namespace qcurve {

struct OrderCertificate {
    enum class Method { exhaustive, bsgs, claimed };
    Int order;
    Int n;  // subgroup order, prime in cryptographic use
    Int h;  // cofactor, order = h*n
    Int r;
    Int t;  // trace of this curve over F_p^2
    Method method = Method::claimed;
};

inline const char* method_name(OrderCertificate::Method m) {
    switch (m) {
        case OrderCertificate::Method::exhaustive: return "exhaustive";
        case OrderCertificate::Method::bsgs: return "bsgs";
        default: return "claimed";
    }
}

inline OrderCertificate::Method method_from_name(const std::string& s) {
    if (s == "exhaustive") return OrderCertificate::Method::exhaustive;
    if (s == "bsgs") return OrderCertificate::Method::bsgs;
    if (s == "claimed") return OrderCertificate::Method::claimed;
    throw usage_error("unknown certificate method '" + s + "'");
}

/// Exact order of E(F_p^2) by iterating x and testing the cubic for
/// squareness through the norm. Guarded to tiny p.
inline Int exhaustive_count(const WeierstrassCurve& E) {
    const FieldCtx* c = E.ctx().get();
    if (c->p > 128) throw usage_error("exhaustive_count is limited to p <= 128");
    unsigned long p = c->p.get_ui();
    Int order = 1;
    for (unsigned long a0 = 0; a0 < p; ++a0) {
        for (unsigned long a1 = 0; a1 < p; ++a1) {
            Fp2 f = E.rhs(Fp2(a0, a1, c));
            if (f.is_zero()) order += 1;
            else if (fp2_is_square(f)) order += 2;
        }
    }
    return order;
}

/// All affine points plus infinity. Tiny p only.
inline std::vector<Point> enumerate_points(const WeierstrassCurve& E) {
    const FieldCtx* c = E.ctx().get();
    if (c->p > 128) throw usage_error("enumerate_points is limited to p <= 128");
    unsigned long p = c->p.get_ui();
    std::vector<Point> pts;
    pts.push_back(Point::infinity());
    for (unsigned long a0 = 0; a0 < p; ++a0) {
        for (unsigned long a1 = 0; a1 < p; ++a1) {
            Fp2 x(a0, a1, c);
            Fp2 f = E.rhs(x);
            if (f.is_zero()) {
                pts.emplace_back(x, Fp2::zero(c));
            } else if (fp2_is_square(f)) {
                Fp2 y = *fp2_sqrt(f);
                pts.emplace_back(x, y);
                pts.emplace_back(x, -y);
            }
        }
    }
    return pts;
}

/// #E(F_p) of a subfield curve y^2 = x^3 + a4 x + a6, a4, a6 in F_p.
inline Int subfield_count(const Int& p, const Int& a4, const Int& a6) {
    if (p > 65536) throw usage_error("subfield_count is limited to p <= 2^16");
    Int order = 1;
    for (Int x = 0; x < p; ++x) {
        Int f = mod(x * x * x + a4 * x + a6, p);
        order += 1 + legendre(f, p);
    }
    return order;
}

/// Trial-division factorization for small orders.
inline std::vector<std::pair<Int, int>> factor_small(Int n) {
    if (n > Int("1000000000000")) throw usage_error("factor_small is for small orders only");
    std::vector<std::pair<Int, int>> fac;
    for (Int q = 2; q * q <= n; ++q) {
        int e = 0;
        while (mod(n, q) == 0) { n /= q; ++e; }
        if (e) fac.emplace_back(q, e);
    }
    if (n > 1) fac.emplace_back(n, 1);
    return fac;
}

/// Largest prime with multiplicity one (unique psi-stable cyclic subgroup),
/// falling back to the largest prime factor.
inline std::pair<Int, Int> choose_subgroup(const Int& order) {
    auto fac = factor_small(order);
    for (auto it = fac.rbegin(); it != fac.rend(); ++it)
        if (it->second == 1) return {it->first, order / it->first};
    Int q = fac.back().first;
    return {q, order / q};
}

/// Exhaustively counted certificate for a tiny-p family curve.
inline OrderCertificate certify_exhaustive(const FamilyCurve& F, Rng& rng) {
    Int order = exhaustive_count(F.curve);
    auto [n, h] = choose_subgroup(order);
    EndoParams ep = F.derive_params(order, n, rng);
    return {order, n, h, ep.r, ep.trace, OrderCertificate::Method::exhaustive};
}

namespace detail {
inline std::uint64_t point_key(const Point& P) {
    if (P.is_infinity()) return ~std::uint64_t(0);
    std::uint64_t k = mpz_get_ui(P.x().a0().get_mpz_t());
    k ^= mpz_get_ui(P.x().a1().get_mpz_t()) * 0x9e3779b97f4a7c15ULL;
    k ^= mpz_get_ui(P.y().a0().get_mpz_t()) * 0xc2b2ae3d27d4eb4fULL;
    k ^= mpz_get_ui(P.y().a1().get_mpz_t()) * 0x165667b19e3779f9ULL;
    return k;
}
} // namespace detail

/// Find all k with |k| <= bound and R = [k]Q; exact verification of every hit.
inline std::vector<Int> scalar_search(const WeierstrassCurve& E, const Point& Q,
                                      const Point& R, const Int& bound) {
    std::vector<Int> hits;
    if (bound <= 4096) { // linear scan, exhaustive over the range
        Point W = E.mul(Q, -bound);
        for (Int k = -bound; k <= bound; ++k) {
            if (W == R) hits.push_back(k);
            W = E.add(W, Q);
        }
        return hits;
    }
    // baby-step giant-step on k' = k + bound in [0, 2*bound]
    Int range = 2 * bound + 1;
    Int m = isqrt(range) + 1;
    unsigned long mu = m.get_ui();
    std::unordered_map<std::uint64_t, std::vector<unsigned long>> table;
    table.reserve(mu * 2);
    Point W = Point::infinity();
    for (unsigned long j = 0; j < mu; ++j) {
        table[detail::point_key(W)].push_back(j);
        W = E.add(W, Q);
    }
    Point Rp = E.add(R, E.mul(Q, bound));
    Point G = E.mul(Q, m);
    Point walk = Rp;
    std::set<Int> seen;
    for (Int i = 0; i * m <= range; ++i) {
        auto it = table.find(detail::point_key(walk));
        if (it != table.end()) {
            for (unsigned long j : it->second) {
                Int kp = i * m + j;
                Int k = kp - bound;
                if (k < -bound || k > bound || seen.count(k)) continue;
                if (E.mul(Q, k) == R) { seen.insert(k); }
            }
        }
        walk = E.sub(walk, G);
    }
    hits.assign(seen.begin(), seen.end());
    return hits;
}

/// All r candidates from one point that are Hasse-consistent: BSGS for
/// k = eps*d*r with |k| <= ceil(2 sqrt(dp)) such that
/// psi^2(P) + [dp]P = [k]psi(P), keeping those k divisible by d whose
/// implied trace t = eps(d r^2 - 2p) lies in [-2p, 2p].
inline std::vector<Int> bsgs_candidate_rs(const FamilyCurve& F, const Point& P) {
    const WeierstrassCurve& E = F.curve;
    const Int& p = F.p();
    Int dp = Int(F.degree) * p;
    Int bound = isqrt(4 * dp);
    if (bound * bound < 4 * dp) ++bound; // ceil(2 sqrt(dp))
    Point Q = F.psi(P);
    Point R = E.add(F.psi(Q), E.mul(P, dp));
    std::vector<Int> rs;
    for (const Int& k : scalar_search(E, Q, R, bound)) {
        Int num = F.eps_eff() * k;
        if (mod(num, F.degree) != 0) continue;
        Int r = num / F.degree;
        Int t = F.eps_eff() * (Int(F.degree) * r * r - 2 * p);
        if (t > 2 * p || t < -2 * p) continue;
        rs.push_back(r);
    }
    return rs;
}

/// Unique r from one point if the candidate set is a singleton; nullopt when
/// several fit (small-order point: retry); throws when no k fits at all.
inline std::optional<Int> bsgs_recover_r(const FamilyCurve& F, const Point& P) {
    auto rs = bsgs_candidate_rs(F, P);
    if (rs.empty())
        throw inconsistency_error("no k in the Hasse range satisfies the characteristic relation");
    if (rs.size() > 1) return std::nullopt;
    return rs.front();
}

struct ambiguous_r_error : inconsistency_error {
    ambiguous_r_error() : inconsistency_error(
        "r is not determined by rational-point data (group exponent within the "
        "BSGS range; several r annihilate every point)") {}
};

/// Multi-point r recovery: intersect candidate sets across independent random
/// points, requiring at least two points. Curves whose group exponent falls
/// inside the search range (t = +-2p members, E = (Z/m)^2) leave several
/// observationally equivalent r; that is reported as ambiguous_r_error.
inline Int recover_r(const FamilyCurve& F, Rng& rng, int max_attempts = 16) {
    std::set<Int> inter;
    int used = 0, stable = 0;
    for (int i = 0; i < max_attempts; ++i) {
        auto rs = bsgs_candidate_rs(F, F.curve.random_point(rng));
        if (rs.empty())
            throw inconsistency_error("no k in the Hasse range satisfies the characteristic relation");
        std::set<Int> cur(rs.begin(), rs.end());
        if (used == 0) {
            inter = cur;
        } else {
            std::set<Int> next;
            for (const Int& r : inter)
                if (cur.count(r)) next.insert(r);
            stable = next.size() == inter.size() ? stable + 1 : 0;
            inter = next;
        }
        ++used;
        if (inter.empty())
            throw inconsistency_error("independent points recovered incompatible r values");
        if (inter.size() == 1 && used >= 2) return *inter.begin();
        if (stable >= 4) break; // no further points will shrink the set
    }
    throw ambiguous_r_error();
}

/// Probabilistic certificate verification:
///  - arithmetic invariants (order = h*n = p^2+1-t, d r^2 = 2p + eps t),
///  - n passes 64-round Miller-Rabin,
///  - [order]P = infinity for `trials` random points,
///  - psi(Q) = [lambda]Q on Q = [h]P with lambda = (1 + eps p)/r mod n,
///  - lambda^2 = eps d (mod n).
inline bool verify_certificate(const FamilyCurve& F, const OrderCertificate& cert,
                               int trials, Rng& rng) {
    const Int& p = F.p();
    int eps = F.eps_eff();
    if (cert.h * cert.n != cert.order) return false;
    if (cert.order != p * p + 1 - cert.t) return false;
    if (Int(F.degree) * cert.r * cert.r != 2 * p + eps * cert.t) return false;
    if (!miller_rabin(cert.n, 64)) return false;
    Int lambda = mod((1 + eps * p) * invmod(mod(cert.r, cert.n), cert.n), cert.n);
    if (mod(lambda * lambda, cert.n) != mod(Int(eps * F.degree), cert.n)) return false;
    for (int i = 0; i < trials; ++i) {
        Point P = F.curve.random_point(rng);
        Point Q = F.curve.mul(P, cert.h);
        if (!F.curve.mul(Q, cert.n).is_infinity()) return false; // [order]P != inf
        if (Q.is_infinity()) continue;
        if (F.psi(Q) != F.curve.mul(Q, lambda)) return false;
    }
    return true;
}

/// Generic j-invariant 1728 * 4 a4^3 / (4 a4^3 + 27 a6^2).
inline Fp2 j_invariant(const WeierstrassCurve& E) {
    Fp2 num = Int(4) * E.a4() * E.a4() * E.a4();
    return Int(1728) * num / (num + Int(27) * E.a6() * E.a6());
}

/// Closed-form j for the families:
///  d=2: 2^6 (5 - 3 s sqrt(D))^3 / ((1 - s^2 D)(1 + s sqrt(D)))
///  d=3: -6912 (2C+1)^3 / (C (C-4)^3)
inline Fp2 closed_form_j(const FamilyCurve& F) {
    const FieldCtx* c = F.curve.ctx().get();
    if (F.degree == 2) {
        Fp2 five_m(5, -Int(3) * F.s, c);
        Fp2 lead = F.family_const() * Fp2::from_int(9, c).inv(); // 1 + s sqrt(D)
        Fp2 den = Fp2::from_int(1 - F.s * F.s * c->delta, c) * lead;
        return Int(64) * five_m.pow(3) / den;
    }
    if (F.degree == 3) {
        const Fp2& C = F.family_const();
        Fp2 num = (Int(2) * C + Fp2::one(c)).pow(3) * Int(-6912);
        return num / (C * (C - Fp2::from_int(4, c)).pow(3));
    }
    throw usage_error("closed_form_j: degree 2 or 3 only");
}

struct JCensus {
    std::size_t distinct = 0;
    std::size_t total = 0;
    bool closed_form_matches = true;
};

/// Count distinct j-invariants over all s in F_p and cross-check the
/// closed form against the generic j.
inline JCensus j_census(const FieldCtxPtr& ctx, int d) {
    if (ctx->p > 65536) throw usage_error("j_census is limited to p <= 2^16");
    JCensus out;
    std::set<std::pair<Int, Int>> seen;
    for (Int s = 0; s < ctx->p; ++s) {
        FamilyCurve F = d == 2 ? FamilyCurve::build_e2(ctx, s, false)
                               : FamilyCurve::build_e3(ctx, s, false);
        Fp2 j = j_invariant(F.curve);
        if (j != closed_form_j(F)) out.closed_form_matches = false;
        seen.emplace(j.a0(), j.a1());
        ++out.total;
    }
    out.distinct = seen.size();
    return out;
}

} // namespace qcurve

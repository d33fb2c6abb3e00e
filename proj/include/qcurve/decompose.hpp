#pragma once

#include <utility>

#include "qcurve/family.hpp"

namespace qcurve {

struct Decomposition {
    Int a;
    Int b;
};

using Vec2 = std::pair<Int, Int>;

/// Short basis of the lattice { (a,b) : a + b*lambda = 0 (mod n) }:
/// e1 = (1 + eps p, -r), e2 = (-eps d r, 1 + eps p), det = #E(F_p^2).
struct DecompBasis {
    Vec2 e1;
    Vec2 e2;
    Int n;
    Int lambda;
    Int full_order;
    int eps; // effective sign for the curve in question
    int d;
    Int r;
    Int p;
};

/// Babai rounding against an arbitrary pair of independent lattice vectors:
/// (a,b) = (m,0) - round(alpha) e1 - round(beta) e2 where (m,0) = alpha e1 + beta e2.
inline Decomposition babai_round(const Int& m, const Vec2& e1, const Vec2& e2) {
    Int det = e1.first * e2.second - e1.second * e2.first;
    if (det == 0) throw invalid_basis_error();
    // alpha = m*e2.y/det, beta = -m*e1.y/det (Cramer), rounded half-up exactly
    Int an = m * e2.second, bn = -(m * e1.second);
    if (det < 0) { an = -an; bn = -bn; det = -det; }
    Int ka = round_half_up(an, det);
    Int kb = round_half_up(bn, det);
    return {m - ka * e1.first - kb * e2.first, -(ka * e1.second) - kb * e2.second};
}

/// Build and validate the explicit basis from a curve's EndoParams.
inline DecompBasis build_basis(const FamilyCurve& F) {
    if (!F.params) throw usage_error("build_basis: EndoParams not populated");
    const EndoParams& ep = *F.params;
    const Int& p = F.p();
    int eps = F.eps_eff();
    Int c1 = 1 + eps * p;
    DecompBasis B{{c1, -ep.r}, {-Int(eps * F.degree) * ep.r, c1},
                  ep.n, ep.lambda, ep.order, eps, F.degree, ep.r, p};
    // lattice membership and determinant, checked at construction
    if (mod(B.e1.first + B.e1.second * B.lambda, B.n) != 0 ||
        mod(B.e2.first + B.e2.second * B.lambda, B.n) != 0)
        throw inconsistency_error("basis vector is not in the decomposition lattice");
    Int det = B.e1.first * B.e2.second - B.e1.second * B.e2.first;
    if (det < 0) det = -det;
    if (det != B.full_order)
        throw inconsistency_error("basis determinant does not equal the group order");
    return B;
}

/// Closed-form decomposition m = a + b*lambda (mod n) with
/// max(|a|,|b|) <= p + 1; exact integer arithmetic throughout.
inline Decomposition decompose(const Int& m, const DecompBasis& B) {
    Int c1 = round_half_up(m * (1 + B.eps * B.p), B.full_order);
    Int c2 = round_half_up(m * B.r, B.full_order);
    Int a = m - c1 * (1 + B.eps * B.p) + c2 * Int(B.eps * B.d) * B.r;
    Int b = c1 * B.r - c2 * (1 + B.eps * B.p);
    return {a, b};
}

} // namespace qcurve

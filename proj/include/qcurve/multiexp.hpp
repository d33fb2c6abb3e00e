#pragma once

#include <vector>

#include "qcurve/decompose.hpp"

namespace qcurve {

/// Straus interleaving: [a]P + [b]Q with one shared doubling chain.
/// Negative scalars negate the base point. The loop runs exactly
/// ceil(log2(max(|a|,|b|)+1)) doublings (reported through `counts`).
/// `width` is the per-scalar window in bits; the default keeps the
/// precomputation at {P, Q, P+Q}.
inline Point straus(const WeierstrassCurve& E, const Point& P0, const Point& Q0,
                    const Int& a0, const Int& b0, OpCounts* counts = nullptr,
                    unsigned width = 1) {
    if (!E.contains(P0) || !E.contains(Q0))
        throw usage_error("straus: points are not on the curve");
    if (width < 1 || width > 8) throw usage_error("straus: window width out of range");
    Point P = a0 < 0 ? E.negate(P0) : P0;
    Point Q = b0 < 0 ? E.negate(Q0) : Q0;
    Int a = a0 < 0 ? Int(-a0) : a0;
    Int b = b0 < 0 ? Int(-b0) : b0;

    const size_t table_dim = size_t(1) << width;
    std::vector<Point> table(table_dim * table_dim, Point::infinity());
    for (size_t i = 0; i < table_dim; ++i) {
        for (size_t j = 0; j < table_dim; ++j) {
            if (i == 0 && j == 0) continue;
            if (j > 0) table[i * table_dim + j] = E.add(table[i * table_dim + j - 1], Q);
            else table[i * table_dim] = E.add(table[(i - 1) * table_dim], P);
        }
    }

    size_t nbits = std::max(bit_length(a), bit_length(b));
    size_t nwin = (nbits + width - 1) / width;
    Point acc = Point::infinity();
    for (size_t w = nwin; w-- > 0;) {
        for (unsigned k = 0; k < width; ++k) {
            acc = E.dbl(acc);
            if (counts) ++counts->doubles;
        }
        size_t ia = 0, ib = 0;
        for (unsigned k = 0; k < width; ++k) {
            ia |= size_t(test_bit(a, w * width + k)) << k;
            ib |= size_t(test_bit(b, w * width + k)) << k;
        }
        if (ia | ib) {
            acc = E.add(acc, table[ia * table_dim + ib]);
            if (counts) ++counts->adds;
        }
    }
    return acc;
}

/// [m]P through the endomorphism: decompose m mod n, evaluate psi once,
/// run the two-dimensional multiexponentiation.
/// `verify_membership` probabilistically enforces the order-n subgroup
/// precondition by checking [n]P = infinity.
inline Point mul_with_endo(const FamilyCurve& F, const Point& P, const Int& m,
                           OpCounts* counts = nullptr, bool verify_membership = true) {
    if (!F.params) throw usage_error("mul_with_endo: EndoParams not populated");
    const WeierstrassCurve& E = F.curve;
    if (verify_membership && !E.mul(P, F.params->n).is_infinity())
        throw usage_error("point is not in the order-n subgroup");
    DecompBasis B = build_basis(F);
    Decomposition ab = decompose(mod(m, B.n), B);
    Point psiP = F.psi(P, counts);
    return straus(E, P, psiP, ab.a, ab.b, counts);
}

} // namespace qcurve

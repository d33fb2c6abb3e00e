#pragma once

#include <optional>
#include <utility>

#include "qcurve/family.hpp"

namespace qcurve {

/// B y^2 = x(x^2 + A x + 1) over F_p^2.
struct MontgomeryCurve {
    Fp2 A;
    Fp2 B;

    MontgomeryCurve(const Fp2& A_, const Fp2& B_) : A(A_), B(B_) {
        if ((B * (A * A - Fp2::from_int(4, A.ctx()))).is_zero())
            throw usage_error("degenerate Montgomery parameters");
    }

    bool contains(const Point& P) const {
        if (P.is_infinity()) return true;
        const Fp2 &x = P.x(), &y = P.y();
        return B * y * y == x * (x * x + A * x + Fp2::one(A.ctx()));
    }

    Point negate(const Point& P) const {
        return P.is_infinity() ? P : Point(P.x(), -P.y());
    }

    Point add(const Point& P, const Point& Q) const {
        if (P.is_infinity()) return Q;
        if (Q.is_infinity()) return P;
        const Fp2 &x1 = P.x(), &y1 = P.y(), &x2 = Q.x(), &y2 = Q.y();
        const FieldCtx* c = A.ctx();
        Fp2 lam = Fp2::zero(c);
        if (x1 == x2) {
            if ((y1 + y2).is_zero()) return Point::infinity();
            lam = (Int(3) * x1 * x1 + Int(2) * A * x1 + Fp2::one(c)) / (Int(2) * B * y1);
        } else {
            lam = (y2 - y1) / (x2 - x1);
        }
        Fp2 x3 = B * lam * lam - A - x1 - x2;
        return Point(x3, lam * (x1 - x3) - y1);
    }
};

/// Projective x-line class (X : Z), (0:0) excluded.
struct XZPoint {
    Fp2 X;
    Fp2 Z;

    XZPoint(const Fp2& X_, const Fp2& Z_) : X(X_), Z(Z_) {
        if (X.is_zero() && Z.is_zero()) throw usage_error("(0:0) is not a projective class");
    }

    static XZPoint infinity(const FieldCtx* c) { return XZPoint(Fp2::one(c), Fp2::zero(c)); }
    static XZPoint of(const Point& P) {
        if (P.is_infinity()) throw usage_error("use XZPoint::infinity for the neutral class");
        return XZPoint(P.x(), Fp2::one(P.x().ctx()));
    }

    bool is_infinity() const { return Z.is_zero(); }

    friend bool operator==(const XZPoint& a, const XZPoint& b) {
        return a.X * b.Z == b.X * a.Z;
    }
};

/// x-only Montgomery ladder; B never enters. Negative m uses x(-P) = x(P).
inline XZPoint xz_ladder(const MontgomeryCurve& M, const XZPoint& x, const Int& m0) {
    const FieldCtx* c = M.A.ctx();
    Int m = m0 < 0 ? Int(-m0) : m0;
    if (m == 0 || x.is_infinity()) return XZPoint::infinity(c);
    if (x.X.is_zero()) // (0,0) has order 2
        return mod(m, 2) == 1 ? x : XZPoint::infinity(c);
    Fp2 a24 = (M.A + Fp2::from_int(2, c)) / Fp2::from_int(4, c);
    auto xdbl = [&](const XZPoint& P) {
        Fp2 t1 = (P.X + P.Z).square();
        Fp2 t2 = (P.X - P.Z).square();
        Fp2 t3 = t1 - t2;
        return XZPoint(t1 * t2, t3 * (t2 + a24 * t3));
    };
    auto xadd = [&](const XZPoint& P, const XZPoint& Q, const XZPoint& diff) {
        Fp2 t1 = (P.X + P.Z) * (Q.X - Q.Z);
        Fp2 t2 = (P.X - P.Z) * (Q.X + Q.Z);
        return XZPoint(diff.Z * (t1 + t2).square(), diff.X * (t1 - t2).square());
    };
    XZPoint r0 = XZPoint::infinity(c);
    XZPoint r1 = x;
    for (size_t i = bit_length(m); i-- > 0;) {
        if (test_bit(m, i)) {
            r0 = xadd(r0, r1, x);
            r1 = xdbl(r1);
        } else {
            r1 = xadd(r0, r1, x);
            r0 = xdbl(r0);
        }
    }
    return r0;
}

/// a x1^2 + x2^2 = 1 + d x1^2 x2^2.
struct TwistedEdwardsCurve {
    Fp2 a;
    Fp2 d;

    TwistedEdwardsCurve(const Fp2& a_, const Fp2& d_) : a(a_), d(d_) {
        if (a.is_zero() || d.is_zero() || a == d)
            throw usage_error("degenerate twisted Edwards parameters");
    }

    bool contains(const Point& P) const {
        if (P.is_infinity()) return false;
        const Fp2 &x1 = P.x(), &x2 = P.y();
        return a * x1 * x1 + x2 * x2 == Fp2::one(a.ctx()) + d * x1 * x1 * x2 * x2;
    }

    Point neutral() const { return Point(Fp2::zero(a.ctx()), Fp2::one(a.ctx())); }

    /// Unified addition; denominators can vanish away from completeness,
    /// reported as absent.
    std::optional<Point> add(const Point& P, const Point& Q) const {
        const Fp2 &x1 = P.x(), &y1 = P.y(), &x2 = Q.x(), &y2 = Q.y();
        Fp2 prod = d * x1 * x2 * y1 * y2;
        Fp2 one = Fp2::one(a.ctx());
        Fp2 den1 = one + prod, den2 = one - prod;
        if (den1.is_zero() || den2.is_zero()) return std::nullopt;
        return Point((x1 * y2 + y1 * x2) / den1, (y1 * y2 - a * x1 * x2) / den2);
    }
};

/// Montgomery model of an untwisted degree-2 family curve, when
/// 2C_{2,Delta}(s) is a square: B = sqrt(2C), A = 12/B,
/// (x, y) -> ((x-4)/B, y/B^2). Also carries the x-only endomorphism.
class MontgomeryModel {
public:
    MontgomeryModel(const FamilyCurve& F, const Fp2& B)
        : B_(B), curve_(Fp2::from_int(12, B.ctx()) / B, B),
          Ap_(frobenius(curve_.A)),
          B1mp_(B / frobenius(B)),
          four_(Fp2::from_int(4, B.ctx())) {
        (void)F;
    }

    const MontgomeryCurve& curve() const { return curve_; }
    const Fp2& B() const { return B_; }

    Point to(const Point& P) const {
        if (P.is_infinity()) return P;
        return Point((P.x() - four_) / B_, P.y() / (B_ * B_));
    }

    Point from(const Point& P) const {
        if (P.is_infinity()) return P;
        return Point(B_ * P.x() + four_, B_ * B_ * P.y());
    }

    /// psi on the x-line:
    /// (X:Z) -> (X^2p + A^p X^p Z^p + Z^2p : -2 B^(1-p) X^p Z^p).
    XZPoint psi_xz(const XZPoint& P) const {
        Fp2 Xp = frobenius(P.X), Zp = frobenius(P.Z);
        Fp2 XZ = Xp * Zp;
        return XZPoint(Xp * Xp + Ap_ * XZ + Zp * Zp, Int(-2) * B1mp_ * XZ);
    }

private:
    Fp2 B_;
    MontgomeryCurve curve_;
    Fp2 Ap_;   // A^p
    Fp2 B1mp_; // B^(1-p) = B * (B^p)^-1
    Fp2 four_;
};

inline std::optional<MontgomeryModel> to_montgomery(const FamilyCurve& F) {
    if (F.degree != 2 || F.twisted)
        throw usage_error("to_montgomery: untwisted degree-2 family curves only");
    auto B = fp2_sqrt(Int(2) * F.family_const());
    if (!B) return std::nullopt; // the model belongs to the quadratic twist
    return MontgomeryModel(F, *B);
}

/// Twisted Edwards model of a Montgomery model; maps are birational with
/// exceptional points (v = 0, u = -1 / x1 = 0, x2 = 1) reported as absent.
/// The neutral correspondences infinity <-> (0, 1) are part of the map.
class EdwardsModel {
public:
    explicit EdwardsModel(const MontgomeryCurve& M)
        : curve_((M.A + Fp2::from_int(2, M.A.ctx())) / M.B,
                 (M.A - Fp2::from_int(2, M.A.ctx())) / M.B) {}

    const TwistedEdwardsCurve& curve() const { return curve_; }

    std::optional<Point> to(const Point& P) const {
        const FieldCtx* c = curve_.a.ctx();
        if (P.is_infinity()) return Point(Fp2::zero(c), Fp2::one(c));
        const Fp2 &u = P.x(), &v = P.y();
        Fp2 one = Fp2::one(c);
        if (v.is_zero() || (u + one).is_zero()) return std::nullopt;
        return Point(u / v, (u - one) / (u + one));
    }

    std::optional<Point> from(const Point& P) const {
        const FieldCtx* c = curve_.a.ctx();
        Fp2 one = Fp2::one(c);
        if (P.x().is_zero() && P.y() == one) return Point::infinity();
        const Fp2 &x1 = P.x(), &x2 = P.y();
        if (x1.is_zero() || (one - x2).is_zero()) return std::nullopt;
        Fp2 t = (one + x2) / (one - x2);
        return Point(t, t / x1);
    }

private:
    TwistedEdwardsCurve curve_;
};

/// Doche-Icart-Kohel models: doubling-oriented v^2 = u(u^2 + D u + 16D) for
/// the degree-2 family, tripling-oriented v^2 = u^3 + 3a(u+1)^2 for degree 3.
class DikModel {
public:
    enum class Variant { doubling, tripling };

    static std::optional<DikModel> of(const FamilyCurve& F) {
        if (F.twisted || (F.degree != 2 && F.degree != 3))
            throw usage_error("to_dik: untwisted degree-2/3 family curves only");
        const FieldCtx* c = F.curve.ctx().get();
        const Fp2& C = F.family_const();
        if (F.degree == 2) {
            // mu = 4 sqrt(6/C); defined over F_p^2 iff 1 + s*sqrt(Delta) is a square
            auto rho = fp2_sqrt(Fp2::from_int(6, c) / C);
            if (!rho) return std::nullopt;
            Fp2 mu = Int(4) * *rho;
            return DikModel(Variant::doubling, Int(12) * mu * mu, mu);
        }
        // a3 = 9/(4 - C) = 9/C^p; scale c with c^2 = a3/3
        Fp2 a3 = Fp2::from_int(9, c) / (Fp2::from_int(4, c) - C);
        auto cc = fp2_sqrt(a3 / Fp2::from_int(3, c));
        if (!cc) return std::nullopt;
        return DikModel(Variant::tripling, a3, *cc);
    }

    Variant variant() const { return variant_; }
    /// D for the doubling model, a3 for the tripling model.
    const Fp2& coeff() const { return coeff_; }

    bool contains(const Point& P) const {
        if (P.is_infinity()) return true;
        const Fp2 &u = P.x(), &v = P.y();
        const FieldCtx* c = u.ctx();
        if (variant_ == Variant::doubling)
            return v * v == u * (u * u + coeff_ * u + Int(16) * coeff_);
        Fp2 w = u + Fp2::one(c);
        return v * v == u * u * u + Int(3) * coeff_ * w * w;
    }

    Point to(const Point& P) const {
        if (P.is_infinity()) return P;
        const FieldCtx* c = scale_.ctx();
        if (variant_ == Variant::doubling) {
            Fp2 m2 = scale_ * scale_;
            return Point(m2 * (P.x() - Fp2::from_int(4, c)), m2 * scale_ * P.y());
        }
        Fp2 u = coeff_ * (P.x() / Fp2::from_int(3, c) - Fp2::one(c));
        return Point(u, scale_ * scale_ * scale_ * P.y());
    }

    Point from(const Point& P) const {
        if (P.is_infinity()) return P;
        const FieldCtx* c = scale_.ctx();
        if (variant_ == Variant::doubling) {
            Fp2 m2 = scale_ * scale_;
            return Point(P.x() / m2 + Fp2::from_int(4, c), P.y() / (m2 * scale_));
        }
        Fp2 x = Int(3) * (P.x() / coeff_ + Fp2::one(c));
        return Point(x, P.y() / (scale_ * scale_ * scale_));
    }

private:
    DikModel(Variant v, const Fp2& coeff, const Fp2& scale)
        : variant_(v), coeff_(coeff), scale_(scale) {}

    Variant variant_;
    Fp2 coeff_;
    Fp2 scale_; // mu (doubling) or c (tripling)
};

inline std::optional<DikModel> to_dik(const FamilyCurve& F) { return DikModel::of(F); }

/// Short Weierstrass form of a Montgomery curve (for isomorphism tests).
inline std::pair<Fp2, Fp2> montgomery_to_short(const MontgomeryCurve& M) {
    const FieldCtx* c = M.A.ctx();
    Fp2 three = Fp2::from_int(3, c);
    Fp2 a = (three - M.A * M.A) / (three * M.B * M.B);
    Fp2 b = (Int(2) * M.A * M.A * M.A - Int(9) * M.A) / (Fp2::from_int(27, c) * M.B * M.B * M.B);
    return {a, b};
}

/// F_p^2-isomorphism test for short Weierstrass curves (exact for nonzero
/// coefficients; falls back to scanning u for j in {0, 1728} at tiny p).
inline bool curves_isomorphic(const WeierstrassCurve& E1, const WeierstrassCurve& E2) {
    const Fp2 &a1 = E1.a4(), &b1 = E1.a6(), &a2 = E2.a4(), &b2 = E2.a6();
    if (a1.is_zero() != a2.is_zero() || b1.is_zero() != b2.is_zero()) return false;
    if (!a1.is_zero() && !b1.is_zero()) {
        Fp2 ra = a2 / a1, rb = b2 / b1;
        Fp2 u2 = rb / ra;
        if (!(u2 * u2 == ra && u2 * u2 * u2 == rb)) return false;
        return fp2_is_square(u2);
    }
    const FieldCtx* c = E1.ctx().get();
    if (c->p > 1024) throw usage_error("isomorphism scan for j in {0,1728} needs a tiny field");
    for (Int i = 0; i < c->p; ++i) {
        for (Int j = 0; j < c->p; ++j) {
            Fp2 u(i, j, c);
            if (u.is_zero()) continue;
            Fp2 u4 = u.pow(4);
            if (a2 == a1 * u4 && b2 == b1 * u4 * u * u) return true;
        }
    }
    return false;
}

} // namespace qcurve

#pragma once

#include <optional>
#include <utility>

#include "qcurve/curve.hpp"

namespace qcurve {

/// Sign for the degree-2 family: +1 iff p = 5,7 (mod 8). Equals -legendre(-2,p).
inline int eps2(const Int& p) {
    Int m = mod(p, 8);
    return (m == 5 || m == 7) ? 1 : -1;
}

/// Sign for the degree-3 family: +1 iff p = 2 (mod 3). Equals -legendre(-3,p).
inline int eps3(const Int& p) {
    return mod(p, 3) == 2 ? 1 : -1;
}

/// r, trace, order and eigenvalue data for a family curve, tied to the
/// curve's own trace: d*r^2 = 2p + eps_eff*t with t = p^2 + 1 - order.
/// For a twisted curve eps_eff = -eps_p and everything else reads the same.
struct EndoParams {
    Int r;          // sign canonicalized by the eigenvalue test
    Int trace;      // trace of this curve over F_p^2
    Int order;      // #E(F_p^2)
    Int lambda;     // psi eigenvalue on the order-n subgroup
    Int n;          // subgroup order (prime in cryptographic use)
    Int h;          // cofactor, order = h*n
    std::optional<Int> t0; // d=1 only: r = +-t0 with t0^2 - 2p = trace
};

/// A member of one of the endomorphism families (d = 2, 3) or the GLS
/// degenerate case d = 1, possibly quadratically twisted by mu.
class FamilyCurve {
public:
    int degree;              // d in {1, 2, 3}
    Int s;                   // family parameter (unused for d = 1)
    WeierstrassCurve curve;  // the curve psi acts on (already twisted if `twisted`)
    int eps_p;               // family sign from the case tables
    bool twisted;
    Fp2 mu;                  // twisting nonsquare (1 when untwisted)
    Fp2 sqrt_md;             // canonical sqrt(-d), d in {2,3}; sqrt(-1) for d=1
    Int gls_a4 = 0, gls_a6 = 0; // subfield coefficients, d = 1 only
    std::optional<EndoParams> params;

    int eps_eff() const { return twisted ? -eps_p : eps_p; }
    const Int& p() const { return curve.ctx()->p; }

    /// C_{d,Delta}(s): 9(1+s*sqrt(Delta)) for d=2, 2(1+s*sqrt(Delta)) for d=3.
    const Fp2& family_const() const { return C_; }
    /// x-coordinate of the psi kernel (4 for d=2, 3 for d=3).
    const Fp2& kernel_x() const { return kernel_x_; }

    static FamilyCurve build_e2(const FieldCtxPtr& ctx, const Int& s, bool twisted) {
        Fp2 C = family_const_e2(ctx, s);
        Fp2 a4 = Int(2) * (C - Fp2::from_int(24, ctx.get()));
        Fp2 a6 = -(Int(8) * (C - Fp2::from_int(16, ctx.get())));
        return FamilyCurve(2, s, WeierstrassCurve(ctx, a4, a6), eps2(ctx->p), twisted, C,
                           Fp2::from_int(4, ctx.get()));
    }

    static FamilyCurve build_e3(const FieldCtxPtr& ctx, const Int& s, bool twisted) {
        Fp2 C = family_const_e3(ctx, s);
        Fp2 one = Fp2::one(ctx.get());
        Fp2 a4 = -(Int(3) * (Int(2) * C + one));
        Fp2 a6 = C * C + Int(10) * C - Fp2::from_int(2, ctx.get());
        return FamilyCurve(3, s, WeierstrassCurve(ctx, a4, a6), eps3(ctx->p), twisted, C,
                           Fp2::from_int(3, ctx.get()));
    }

    /// GLS: subfield curve (a4, a6 in F_p) base-extended to F_p^2; on the
    /// quadratic twist psi' squares to -pi.
    static FamilyCurve build_gls(const FieldCtxPtr& ctx, const Int& a4, const Int& a6,
                                 bool twisted = true) {
        Fp2 A4 = Fp2::from_int(a4, ctx.get());
        Fp2 A6 = Fp2::from_int(a6, ctx.get());
        FamilyCurve F(1, 0, WeierstrassCurve(ctx, A4, A6), 1, twisted,
                      Fp2::zero(ctx.get()), Fp2::zero(ctx.get()));
        F.gls_a4 = mod(a4, ctx->p);
        F.gls_a6 = mod(a6, ctx->p);
        return F;
    }

    static Fp2 family_const_e2(const FieldCtxPtr& ctx, const Int& s) {
        return Fp2(9, Int(9) * s, ctx.get());
    }
    static Fp2 family_const_e3(const FieldCtxPtr& ctx, const Int& s) {
        return Fp2(2, Int(2) * s, ctx.get());
    }

    /// Rational 3-torsion generator of ker(psi) for d=3: (3, C^p).
    /// (y^2 at x=3 is (C-4)^2 and C-4 = -C^p.)
    Point kernel_point() const {
        if (degree != 3 || twisted) throw usage_error("kernel_point: untwisted d=3 only");
        return curve.make_point(kernel_x_, frobenius(C_));
    }

    /// The family endomorphism. Kernel points (x^p = 4 resp. 3) map to
    /// infinity; for twisted curves the conjugate-coordinate form keeps every
    /// intermediate value in F_p^2 via nu = mu^((p-1)/2).
    Point psi(const Point& P, OpCounts* counts = nullptr) const {
        if (counts) ++counts->psi_evals;
        if (P.is_infinity()) return P;
        if (!curve.contains(P)) throw usage_error("psi: point is not on the curve");
        const FieldCtx* c = curve.ctx().get();
        Fp2 x = twisted ? P.x() / mu : P.x();
        Fp2 xp = frobenius(x);
        Fp2 X = Fp2::zero(c);
        Fp2 g = Fp2::one(c);
        if (degree == 1) {
            X = xp;
        } else {
            if (xp == kernel_x_) return Point::infinity();
            Fp2 di = (xp - kernel_x_).inv();
            Fp2 di2 = di * di;
            if (degree == 2) {
                // x' = -x^p/2 - C^p/(x^p-4); y' = (y^p/sqrt(-2))(-1/2 + C^p/(x^p-4)^2)
                X = -(xp * half_) - Cp_ * di;
                g = inv_sqrt_md_ * (-half_ + Cp_ * di2);
            } else {
                // x' = -x^p/3 - 4C/(x^p-3) - 4C^2/(3(x^p-3)^2)
                // y' = (y^p/sqrt(-3))(-1/3 + 4C/(x^p-3)^2 + 8C^2/(3(x^p-3)^3))
                X = -(xp * third_) - C4_ * di - C43_ * di2;
                g = inv_sqrt_md_ * (-third_ + C4_ * di2 + C83_ * di2 * di);
            }
        }
        Fp2 Y = frobenius(P.y()) * g;
        if (twisted) {
            X = X * mu;
            Y = Y * nu_inv_cubed_;
        }
        return Point(X, Y);
    }

    /// psi^2(P) = [eps_eff * d] P on rational points (pi acts as identity).
    bool verify_psi_square(const Point& P) const {
        Point lhs = psi(psi(P));
        Point rhs = curve.mul(P, Int(eps_eff() * degree));
        return lhs == rhs;
    }

    /// Derive EndoParams from a verified group order and subgroup order n.
    /// Throws invalid_order_error when (2p + eps*t)/d is not a perfect square,
    /// inconsistency_error when neither sign of r matches the eigenvalue test.
    EndoParams derive_params(const Int& order, const Int& n, Rng& rng) const {
        const Int& pv = p();
        Int t = pv * pv + 1 - order;
        Int num = 2 * pv + eps_eff() * t;
        if (num < 0 || mod(num, degree) != 0)
            throw invalid_order_error("2p + eps*t is not divisible by d");
        auto r0 = exact_sqrt(num / degree);
        if (!r0) throw invalid_order_error("(2p + eps*t)/d is not a perfect square");
        if (mod(order, n) != 0) throw invalid_order_error("n does not divide the order");
        Int h = order / n;

        EndoParams ep;
        ep.trace = t;
        ep.order = order;
        ep.n = n;
        ep.h = h;
        if (*r0 == 0) throw invalid_order_error("r = 0: endomorphism is not defined by (pi + eps p)/r");

        Point Q = Point::infinity();
        for (int tries = 0; tries < 64 && Q.is_infinity(); ++tries)
            Q = curve.mul(curve.random_point(rng), h);
        if (Q.is_infinity()) throw inconsistency_error("could not find a point of order dividing n");
        if (!curve.mul(Q, n).is_infinity())
            throw invalid_order_error("[order]P != infinity: order is wrong");

        Point psiQ = psi(Q);
        for (Int r : {*r0, Int(-*r0)}) {
            Int lam = mod((1 + eps_eff() * pv) * invmod(mod(r, n), n), n);
            if (psiQ == curve.mul(Q, lam)) {
                ep.r = r;
                ep.lambda = lam;
                if (degree == 1) ep.t0 = r;
                return ep;
            }
        }
        throw inconsistency_error("eigenvalue test fails for both signs of r");
    }

    /// derive_params + attach.
    void attach_params(const Int& order, const Int& n, Rng& rng) {
        params = derive_params(order, n, rng);
    }

private:
    FamilyCurve(int d, const Int& s_, WeierstrassCurve base, int eps, bool tw, const Fp2& C,
                const Fp2 kernel_x)
        : degree(d), s(s_),
          curve(tw ? base.twisted(find_nonsquare(base.ctx().get())) : base),
          eps_p(eps), twisted(tw),
          mu(tw ? find_nonsquare(base.ctx().get()) : Fp2::one(base.ctx().get())),
          sqrt_md(*fp2_sqrt(Fp2::from_int(-(d == 1 ? 1 : d), base.ctx().get()))),
          C_(C), kernel_x_(kernel_x),
          Cp_(frobenius(C)),
          inv_sqrt_md_(d == 1 ? Fp2::one(base.ctx().get()) : sqrt_md.inv()),
          half_(Fp2::from_int(2, base.ctx().get()).inv()),
          third_(Fp2::from_int(3, base.ctx().get()).inv()),
          C4_(Int(4) * C),
          C43_(Int(4) * C * C * third_),
          C83_(Int(8) * C * C * third_),
          nu_inv_cubed_(Fp2::one(base.ctx().get())) {
        const FieldCtx* c = curve.ctx().get();
        if (tw) {
            // lambda^(p-1) = mu^((p-1)/2), rational; psi' needs nu^-3 and mu
            Fp2 nu = mu.pow((c->p - 1) / 2);
            nu_inv_cubed_ = nu.inv().pow(3);
        }
        if (d != 1 && d != 2 && d != 3) throw usage_error("degree must be 1, 2 or 3");
    }

    Fp2 C_;            // C_{d,Delta}(s); zero for d=1
    Fp2 kernel_x_;     // 4 or 3; zero for d=1
    Fp2 Cp_;           // frobenius(C)
    Fp2 inv_sqrt_md_;  // 1/sqrt(-d)
    Fp2 half_, third_;
    Fp2 C4_, C43_, C83_; // 4C, (4/3)C^2, (8/3)C^2
    Fp2 nu_inv_cubed_;
};

} // namespace qcurve

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "qcurve/field.hpp"

namespace qcurve {

struct OpCounts {
    std::uint64_t doubles = 0;
    std::uint64_t adds = 0;
    std::uint64_t psi_evals = 0;
};

/// Affine point or the point at infinity. Coordinate-only value type;
/// curve membership is the owning curve's business.
class Point {
public:
    static Point infinity() { return Point(); }
    Point(const Fp2& x, const Fp2& y) : xy_(std::make_pair(x, y)) {}

    bool is_infinity() const { return !xy_.has_value(); }
    const Fp2& x() const { return xy_->first; }
    const Fp2& y() const { return xy_->second; }

    friend bool operator==(const Point& P, const Point& Q) {
        if (P.is_infinity() || Q.is_infinity())
            return P.is_infinity() == Q.is_infinity();
        return P.x() == Q.x() && P.y() == Q.y();
    }
    friend bool operator!=(const Point& P, const Point& Q) { return !(P == Q); }

    std::string str() const {
        if (is_infinity()) return "inf";
        return x().str() + "," + y().str();
    }

private:
    Point() = default;
    std::optional<std::pair<Fp2, Fp2>> xy_;
};

/// y^2 = x^3 + a4 x + a6 over F_p^2. Nonzero discriminant enforced at construction.
class WeierstrassCurve {
public:
    WeierstrassCurve(FieldCtxPtr ctx, const Fp2& a4, const Fp2& a6)
        : ctx_(std::move(ctx)), a4_(a4), a6_(a6) {
        Fp2 disc = Int(4) * a4_ * a4_ * a4_ + Int(27) * a6_ * a6_;
        if (disc.is_zero()) throw usage_error("singular curve");
    }

    const FieldCtxPtr& ctx() const { return ctx_; }
    const Fp2& a4() const { return a4_; }
    const Fp2& a6() const { return a6_; }

    friend bool operator==(const WeierstrassCurve& E1, const WeierstrassCurve& E2) {
        return E1.ctx_->same(*E2.ctx_) && E1.a4_ == E2.a4_ && E1.a6_ == E2.a6_;
    }

    Fp2 rhs(const Fp2& x) const { return x * x * x + a4_ * x + a6_; }

    bool contains(const Point& P) const {
        if (P.is_infinity()) return true;
        return P.y() * P.y() == rhs(P.x());
    }

    /// Validating constructor for external input; off-curve points are rejected.
    Point make_point(const Fp2& x, const Fp2& y) const {
        Point P(x, y);
        if (!contains(P)) throw usage_error("point is not on the curve");
        return P;
    }

    Point negate(const Point& P) const {
        if (P.is_infinity()) return P;
        return Point(P.x(), -P.y());
    }

    Point add(const Point& P, const Point& Q) const {
        if (P.is_infinity()) return Q;
        if (Q.is_infinity()) return P;
        const Fp2 &x1 = P.x(), &y1 = P.y(), &x2 = Q.x(), &y2 = Q.y();
        Fp2 lam = Fp2::zero(ctx_.get());
        if (x1 == x2) {
            if ((y1 + y2).is_zero()) return Point::infinity();
            lam = (Int(3) * x1 * x1 + a4_) / (Int(2) * y1);
        } else {
            lam = (y2 - y1) / (x2 - x1);
        }
        Fp2 x3 = lam * lam - x1 - x2;
        return Point(x3, lam * (x1 - x3) - y1);
    }

    Point dbl(const Point& P) const { return add(P, P); }

    Point sub(const Point& P, const Point& Q) const { return add(P, negate(Q)); }

    /// Binary double-and-add; [-m]P = -[m]P, [0]P = infinity.
    /// Counted doublings = bit length of |m| (the MSB-first loop length).
    Point mul(const Point& P, const Int& m, OpCounts* counts = nullptr) const {
        if (m < 0) return mul(negate(P), -m, counts);
        Point acc = Point::infinity();
        for (size_t i = bit_length(m); i-- > 0;) {
            acc = dbl(acc);
            if (counts) ++counts->doubles;
            if (test_bit(m, i)) {
                acc = add(acc, P);
                if (counts) ++counts->adds;
            }
        }
        return acc;
    }

    /// Coefficient-conjugated curve; x -> x^p maps this curve onto it.
    WeierstrassCurve conjugate() const {
        return WeierstrassCurve(ctx_, frobenius(a4_), frobenius(a6_));
    }

    /// a4 -> mu^2 a4, a6 -> mu^3 a6. Quadratic twist when mu is a nonsquare.
    WeierstrassCurve twisted(const Fp2& mu) const {
        if (mu.is_zero()) throw usage_error("twisting by zero");
        return WeierstrassCurve(ctx_, mu * mu * a4_, mu * mu * mu * a6_);
    }

    Point parse_point(const std::string& s) const {
        if (s == "inf") return Point::infinity();
        auto comma = s.find(',');
        if (comma == std::string::npos) throw usage_error("bad point literal: '" + s + "'");
        return make_point(Fp2::parse(s.substr(0, comma), ctx_.get()),
                          Fp2::parse(s.substr(comma + 1), ctx_.get()));
    }

    /// Random point: x sampled until the cubic is a square, y branch random.
    Point random_point(Rng& rng) const {
        for (;;) {
            Fp2 x(rng.below(ctx_->p), rng.below(ctx_->p), ctx_.get());
            Fp2 f = rhs(x);
            if (!fp2_is_square(f)) continue;
            Fp2 y = *fp2_sqrt(f);
            return Point(x, rng.flip() ? -y : y);
        }
    }

private:
    FieldCtxPtr ctx_;
    Fp2 a4_, a6_;
};

/// The p-power sub-Frobenius pi0: (x, y) -> (x^p, y^p), landing on the
/// conjugate curve. Applying it twice gives the p^2-power Frobenius, which
/// fixes every F_p^2-rational point.
inline Point pi0(const Point& P) {
    if (P.is_infinity()) return P;
    return Point(frobenius(P.x()), frobenius(P.y()));
}

/// (x, y) -> (mu x, lambda^3 y) with lambda = sqrt(mu), onto twisted(mu).
/// Only the F_p^2-rational case (mu square) is exposed.
inline Point twist_isomorphism(const Point& P, const Fp2& lambda_sq) {
    if (lambda_sq.is_zero()) throw usage_error("twisting by zero");
    auto lambda = fp2_sqrt(lambda_sq);
    if (!lambda) throw unsupported_error("twist isomorphism is not F_p^2-rational (mu is a nonsquare)");
    if (P.is_infinity()) return P;
    return Point(lambda_sq * P.x(), lambda_sq * *lambda * P.y());
}

} // namespace qcurve

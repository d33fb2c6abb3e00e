#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "qcurve/errors.hpp"
#include "qcurve/integer.hpp"

namespace qcurve {

/// Legendre symbol (n/p) in {-1, 0, 1}.
inline int legendre(const Int& n, const Int& p) {
    return mpz_legendre(n.get_mpz_t(), p.get_mpz_t());
}

class FieldCtx;
using FieldCtxPtr = std::shared_ptr<const FieldCtx>;

/// F_p^2 = F_p(sqrt(delta)) with p an odd prime > 3 and delta a nonsquare mod p.
/// Immutable; elements reference it non-owningly, curves keep it alive.
class FieldCtx {
public:
    Int p;
    Int delta;        // reduced to [0, p)
    Int p_sq;         // p^2
    Int euler;        // (p^2 - 1) / 2
    Int ts_odd;       // odd m with p^2 - 1 = 2^ts_e * m
    unsigned long ts_e;

    static FieldCtxPtr create(const Int& p, const Int& delta_in) {
        if (p <= 3) throw usage_error("p must be a prime > 3");
        if (!miller_rabin(p, 64)) throw usage_error("p failed 64-round Miller-Rabin");
        Int delta = mod(delta_in, p);
        if (legendre(delta, p) != -1)
            throw usage_error("delta must be a nonsquare mod p");
        return FieldCtxPtr(new FieldCtx(p, delta));
    }

    bool same(const FieldCtx& o) const {
        return this == &o || (p == o.p && delta == o.delta);
    }

private:
    FieldCtx(const Int& p_, const Int& delta_) : p(p_), delta(delta_) {
        p_sq = p * p;
        euler = (p_sq - 1) / 2;
        ts_e = mpz_scan1(Int(p_sq - 1).get_mpz_t(), 0);
        ts_odd = (p_sq - 1) >> ts_e;
    }
};

/// Element of the prime field F_p.
class Fp {
public:
    Fp(const Int& v, const FieldCtx* ctx) : v_(mod(v, ctx->p)), ctx_(ctx) {}

    const Int& value() const { return v_; }
    const FieldCtx* ctx() const { return ctx_; }
    bool is_zero() const { return v_ == 0; }

    friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_; }
    friend Fp operator+(const Fp& a, const Fp& b) { return Fp(a.v_ + b.v_, a.ctx_); }
    friend Fp operator-(const Fp& a, const Fp& b) { return Fp(a.v_ - b.v_, a.ctx_); }
    friend Fp operator*(const Fp& a, const Fp& b) { return Fp(a.v_ * b.v_, a.ctx_); }
    Fp inv() const {
        if (is_zero()) throw zero_division_error();
        return Fp(invmod(v_, ctx_->p), ctx_);
    }

private:
    Int v_;
    const FieldCtx* ctx_;
};

/// Element a0 + a1*u of F_p^2, u = sqrt(delta). Componentwise reduced.
class Fp2 {
public:
    Fp2(const Int& a0, const Int& a1, const FieldCtx* ctx)
        : a0_(mod(a0, ctx->p)), a1_(mod(a1, ctx->p)), ctx_(ctx) {}

    static Fp2 from_int(const Int& n, const FieldCtx* ctx) { return Fp2(n, 0, ctx); }
    static Fp2 zero(const FieldCtx* ctx) { return Fp2(0, 0, ctx); }
    static Fp2 one(const FieldCtx* ctx) { return Fp2(1, 0, ctx); }
    static Fp2 gen(const FieldCtx* ctx) { return Fp2(0, 1, ctx); } // sqrt(delta)

    const Int& a0() const { return a0_; }
    const Int& a1() const { return a1_; }
    const FieldCtx* ctx() const { return ctx_; }

    bool is_zero() const { return a0_ == 0 && a1_ == 0; }
    bool in_base_field() const { return a1_ == 0; }

    friend bool operator==(const Fp2& x, const Fp2& y) {
        return x.a0_ == y.a0_ && x.a1_ == y.a1_;
    }
    friend bool operator!=(const Fp2& x, const Fp2& y) { return !(x == y); }

    friend Fp2 operator+(const Fp2& x, const Fp2& y) {
        check(x, y);
        return Fp2(x.a0_ + y.a0_, x.a1_ + y.a1_, x.ctx_);
    }
    friend Fp2 operator-(const Fp2& x, const Fp2& y) {
        check(x, y);
        return Fp2(x.a0_ - y.a0_, x.a1_ - y.a1_, x.ctx_);
    }
    Fp2 operator-() const { return Fp2(-a0_, -a1_, ctx_); }

    friend Fp2 operator*(const Fp2& x, const Fp2& y) {
        check(x, y);
        // (a0 + a1 u)(b0 + b1 u) = a0b0 + a1b1 delta + (a0b1 + a1b0) u
        return Fp2(x.a0_ * y.a0_ + x.a1_ * y.a1_ % x.ctx_->p * x.ctx_->delta,
                   x.a0_ * y.a1_ + x.a1_ * y.a0_, x.ctx_);
    }
    friend Fp2 operator*(const Fp2& x, const Int& k) { return Fp2(x.a0_ * k, x.a1_ * k, x.ctx_); }
    friend Fp2 operator*(const Int& k, const Fp2& x) { return x * k; }

    /// Norm to F_p: x * x^p = a0^2 - a1^2 delta.
    Int norm() const { return mod(a0_ * a0_ - a1_ * a1_ % ctx_->p * ctx_->delta, ctx_->p); }

    Fp2 inv() const {
        Int n = norm();
        if (n == 0) throw zero_division_error();
        Int ni = invmod(n, ctx_->p);
        return Fp2(a0_ * ni, -a1_ * ni, ctx_);
    }
    friend Fp2 operator/(const Fp2& x, const Fp2& y) { return x * y.inv(); }

    Fp2 square() const { return *this * *this; }

    Fp2 pow(const Int& e) const {
        if (e < 0) return inv().pow(-e);
        Fp2 r = one(ctx_);
        Fp2 base = *this;
        for (size_t i = 0, n = bit_length(e); i < n; ++i) {
            if (test_bit(e, i)) r = r * base;
            base = base.square();
        }
        return r;
    }

    std::string str() const { return to_hex(a0_) + "+" + to_hex(a1_) + "*u"; }

    static Fp2 parse(const std::string& s, const FieldCtx* ctx) {
        auto plus = s.find('+', 1); // skip possible leading '-'
        auto star = s.rfind("*u");
        if (plus == std::string::npos || star == std::string::npos || star < plus)
            throw usage_error("bad Fp2 literal: '" + s + "'");
        return Fp2(from_hex(s.substr(0, plus)), from_hex(s.substr(plus + 1, star - plus - 1)), ctx);
    }

private:
    static void check(const Fp2& x, const Fp2& y) {
        if (!x.ctx_->same(*y.ctx_)) throw usage_error("mixed field contexts");
    }

    Int a0_, a1_;
    const FieldCtx* ctx_;
};

/// p-th powering: (a + b*u)^p = a - b*u.
inline Fp2 frobenius(const Fp2& x) {
    return Fp2(x.a0(), -x.a1(), x.ctx());
}

/// true iff x = 0 or x^((p^2-1)/2) = 1; computed through the norm.
inline bool fp2_is_square(const Fp2& x) {
    if (x.is_zero()) return true;
    return legendre(x.norm(), x.ctx()->p) == 1;
}

/// Deterministic nonsquare: sqrt(delta), then c + sqrt(delta) for c = 1, 2, ...
inline Fp2 find_nonsquare(const FieldCtx* ctx) {
    Fp2 x = Fp2::gen(ctx);
    if (!fp2_is_square(x)) return x;
    for (Int c = 1;; ++c) {
        x = Fp2(c, 1, ctx);
        if (!fp2_is_square(x)) return x;
    }
}

/// Tonelli-Shanks over the field of p^2 elements. Returns the canonical root:
/// of +-r, the one whose (a1, a0) pair is lexicographically smaller.
inline std::optional<Fp2> fp2_sqrt(const Fp2& x) {
    const FieldCtx* ctx = x.ctx();
    if (x.is_zero()) return Fp2::zero(ctx);
    if (!fp2_is_square(x)) return std::nullopt;
    Fp2 one = Fp2::one(ctx);
    Fp2 c = find_nonsquare(ctx).pow(ctx->ts_odd);
    Fp2 t = x.pow(ctx->ts_odd);
    Fp2 r = x.pow((ctx->ts_odd + 1) / 2);
    unsigned long e = ctx->ts_e;
    while (t != one) {
        unsigned long i = 0;
        Fp2 tt = t;
        while (tt != one) { tt = tt.square(); ++i; }
        Fp2 b = c;
        for (unsigned long j = 0; j + i + 1 < e; ++j) b = b.square();
        r = r * b;
        c = b.square();
        t = t * c;
        e = i;
    }
    Fp2 rn = -r;
    auto key = [](const Fp2& v) { return std::pair<const Int&, const Int&>(v.a1(), v.a0()); };
    return key(rn) < key(r) ? rn : r;
}

/// Default delta for a CLI-supplied p: smallest-magnitude nonsquare
/// among -1, 2, -2, 3, -3, 5, ... (perfect squares skipped on the + side).
inline Int default_delta(const Int& p) {
    if (legendre(-1, p) == -1) return -1;
    for (Int c = 2;; ++c) {
        if (!exact_sqrt(c) && legendre(c, p) == -1) return c;
        if (legendre(-c, p) == -1) return -c;
    }
}

} // namespace qcurve

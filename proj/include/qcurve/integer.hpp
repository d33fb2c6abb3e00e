#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

#include "qcurve/errors.hpp"

namespace qcurve {

using Int = mpz_class;

inline std::string to_hex(const Int& n) {
    return n.get_str(16); // lowercase, leading '-' if negative
}

inline Int from_hex(const std::string& s) {
    Int n;
    if (n.set_str(s, 16) != 0)
        throw usage_error("not a hex integer: '" + s + "'");
    return n;
}

inline size_t bit_length(const Int& n) {
    if (n == 0) return 0;
    return mpz_sizeinbase(n.get_mpz_t(), 2);
}

inline bool test_bit(const Int& n, size_t i) {
    return mpz_tstbit(n.get_mpz_t(), i) != 0;
}

/// round(num/den) with ties toward +infinity; den must be positive.
inline Int round_half_up(const Int& num, const Int& den) {
    Int q;
    Int n2 = 2 * num + den;
    Int d2 = 2 * den;
    mpz_fdiv_q(q.get_mpz_t(), n2.get_mpz_t(), d2.get_mpz_t());
    return q;
}

/// floor(sqrt(n)) together with exactness.
inline std::optional<Int> exact_sqrt(const Int& n) {
    if (n < 0) return std::nullopt;
    Int r, rem;
    mpz_sqrtrem(r.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
    if (rem != 0) return std::nullopt;
    return r;
}

inline Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline Int powmod(const Int& base, const Int& exp, const Int& mod) {
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return r;
}

inline Int invmod(const Int& a, const Int& mod) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw zero_division_error();
    return r;
}

inline Int mod(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

/// Seedable deterministic generator (Mersenne twister via GMP).
class Rng {
public:
    explicit Rng(unsigned long seed = 0x5eed) : state_(gmp_randinit_mt) {
        state_.seed(seed);
    }

    /// uniform in [0, bound)
    Int below(const Int& bound) {
        if (bound <= 0) throw usage_error("Rng::below needs a positive bound");
        return state_.get_z_range(bound);
    }

    Int bits(unsigned long n) { return state_.get_z_bits(n); }

    bool flip() { return bits(1) == 1; }

private:
    gmp_randclass state_;
};

/// Miller-Rabin with `rounds` random bases. Deterministic given the seed.
inline bool miller_rabin(const Int& n, int rounds = 64, unsigned long seed = 0x5eed) {
    if (n < 2) return false;
    for (int q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), q)) return n == q;
    }
    Int d = n - 1;
    unsigned long r = mpz_scan1(d.get_mpz_t(), 0);
    d >>= r;
    Rng rng(seed);
    Int nm1 = n - 1;
    for (int i = 0; i < rounds; ++i) {
        Int a = 2 + rng.below(n - 3);
        Int x = powmod(a, d, n);
        if (x == 1 || x == nm1) continue;
        bool witness = true;
        for (unsigned long j = 0; j + 1 < r; ++j) {
            x = x * x % n;
            if (x == nm1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

} // namespace qcurve

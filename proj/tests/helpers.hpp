#pragma once

#include <vector>

#include "qcurve/qcurve.hpp"

namespace qtest {

using namespace qcurve;

inline FieldCtxPtr ctx11() {
    static FieldCtxPtr c = FieldCtx::create(11, 2);
    return c;
}

inline FieldCtxPtr ctx13() {
    static FieldCtxPtr c = FieldCtx::create(13, 2);
    return c;
}

inline const std::vector<unsigned long>& sweep_primes() {
    static std::vector<unsigned long> v{11, 13, 19, 23, 29, 31, 37, 41, 43, 47};
    return v;
}

// Example 1 constants (degree 2, p = 2^80 - 93, delta = 2, s = 4556)
struct Example1 {
    Int p = (Int(1) << 80) - 93;
    Int s = 4556;
    Int N{"730750818665451459101729015265709251634505119843"};
    Int Np{"730750818665451459101730957248125446994932083047"};
    Int r_abs{"487785415441"};
};

inline Fp2 fe(const FieldCtxPtr& c, long a0, long a1) { return Fp2(a0, a1, c.get()); }

} // namespace qtest

#pragma once

#include <stdexcept>
#include <string>

namespace qcurve {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// mismatched contexts, bad parameters, malformed input
struct usage_error : error {
    using error::error;
};

struct zero_division_error : error {
    zero_division_error() : error("division by zero") {}
};

// an order that does not belong to the family / sign in question
struct invalid_order_error : error {
    using error::error;
};

// internal invariant violated (e.g. eigenvalue test fails for both signs of r)
struct inconsistency_error : error {
    using error::error;
};

// operation not defined over F_p^2 (e.g. twist isomorphism for nonsquare mu)
struct unsupported_error : error {
    using error::error;
};

struct invalid_basis_error : error {
    invalid_basis_error() : error("basis vectors are linearly dependent") {}
};

} // namespace qcurve

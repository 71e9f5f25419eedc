#pragma once

#include <cstdint>

namespace multspec {

// Value of a truncated Euler product together with a rigorous bound on what
// the omitted data can change.  tail_bound controls |log(true / partial)|,
// so |true - value| <= |value| * expm1(tail_bound).  When a local factor
// vanishes (exactly, or below 1e-12) the partial product is 0 and the
// log-scale bound is meaningless; exact_zero records that.
struct EulerProductValue {
    double value = 1.0;
    uint64_t prime_limit = 0;
    double tail_bound = 0.0;
    uint32_t terms_per_prime = 0;
    bool exact_zero = false;
};

}  // namespace multspec

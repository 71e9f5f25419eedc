#pragma once

#include <cstdint>

#include "multspec/euler_value.hpp"
#include "multspec/mult_func.hpp"

namespace multspec {

// Euler product over p <= y of (sum_k f(p^k) p^-k)(1 - 1/p), each local
// factor summed through the telescoped form
//   1 + sum_{k>=1} (f(p^k) - f(p^{k-1})) p^-k,
// which is algebraically identical and makes f == 1 give exactly 1.0 per
// factor (every difference vanishes).  y < 2 is the empty product.
EulerProductValue euler_theta(const MultiplicativeFunction& f, double y, uint32_t depth = 64);

struct LocalFactor {
    double value = 1.0;
    double tail_bound = 0.0;  // absolute bound on the omitted exponents
};

// Local factor of the residual series at exponent 1/2, for f supported on
// powerful numbers:
//   1 + sum_{k>=3} (f(p^k) - f(p^{k-2}) f(p^2)) p^{-k/2},
// truncated at exponent depth.
LocalFactor residual_factor(const MultiplicativeFunction& f, uint64_t p, uint32_t depth = 64);

// residual_factor normalized to 1 on the all-ones function:
//   residual_factor / (1 + p^{-3/2}) * (1 - 1/p) / (1 - f(p^2)/p).
// For p >= 3 this never exceeds 1; at p = 2 it is bounded below by delta2().
double modified_factor(const MultiplicativeFunction& f, uint64_t p, uint32_t depth = 64);

// Product of modified_factor over p <= prime_limit.  The omitted-prime part
// of tail_bound assumes f(p^2) = 1 beyond prime_limit; that holds for every
// built-in profile once prime_limit >= its p_max (default 10^4).  For rules
// that break the assumption the reported tail only covers truncation depth.
EulerProductValue modified_euler_product(const MultiplicativeFunction& f, uint64_t prime_limit,
                                         uint32_t depth = 64);

struct PerPrimeBounds {
    uint64_t p = 0;
    double residual_factor = 1.0;
    double modified_factor = 1.0;
    bool factor_positive = true;  // residual factor > 0, claimed for p >= 3
    bool within_bounds = true;    // modified factor <= 1 (p >= 3), >= delta2 (p = 2)
};
PerPrimeBounds per_prime_bounds(const MultiplicativeFunction& f, uint64_t p, uint32_t depth = 64);

// The two series attached to the powerful residual r = powerful_residual(f),
// summed over cubefull n <= limit:
//   series      = sum r(n) / sqrt(n)
//   log_series  = -1/2 sum r(n) log(n) / sqrt(n)
// plus a cross-check of series against the Euler product of residual_factor
// over p <= limit^(1/3).  The *_tail fields are empirical Cauchy estimates
// (differences of the partial sums at limit/4, limit/2, limit);
// rigorous_tail is a crude but honest bound on the mass beyond limit, from
// |r(n)| <= d(n) on cubefull support, and is typically far weaker.
struct ResidualSeries {
    double series = 0.0;
    double log_series = 0.0;
    double series_tail = 0.0;
    double log_series_tail = 0.0;
    double rigorous_tail = 0.0;
    double log_rigorous_tail = 0.0;
    double product_value = 1.0;
    double product_tail = 0.0;  // log scale
    uint64_t terms = 0;
};
ResidualSeries residual_series(const MultiplicativeFunction& f, uint64_t limit,
                               uint32_t depth = 64);

// Lower endpoint of the modified local factor at p = 2: -sqrt(2)/(4 + sqrt(2)).
double delta2();

}  // namespace multspec

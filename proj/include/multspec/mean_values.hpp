#pragma once

#include <cstdint>

#include "multspec/mult_func.hpp"

namespace multspec {

// Full iteration over [1, x] (no support flag to shortcut through) is
// refused above this; the segmented walk would still be correct but takes
// minutes and signals a misconfigured experiment.
inline constexpr uint64_t kFullIterationCap = 100'000'000;

// Experiments that need small-prime sums over all p <= x cap x here.
inline constexpr uint64_t kExperimentCap = 10'000'000;

// sum_{n <= x} f(n).  Functions flagged powerful-supported are summed over
// their k-full stream; everything else walks [1, x] by segmented
// factorization (x <= 1e8).
double partial_sum(const MultiplicativeFunction& f, uint64_t x);

// sum_{n <= x} f(n) / n, same dual path.
double harmonic_sum(const MultiplicativeFunction& f, uint64_t x);

// sum_{n <= x} f(n) / sqrt(n) for powerful-supported f.
double sqrt_weighted_sum(const MultiplicativeFunction& f, uint64_t x);

// sum over powerful n <= x of n^{-1/2}, its leading asymptotic
// (the powerful-count coefficient times log sqrt(x)), and the remainder,
// which stays in a fixed window as x grows.
struct PowerfulHarmonic {
    double sum = 0.0;
    double reference = 0.0;
    double remainder = 0.0;
};
PowerfulHarmonic powerful_sqrt_harmonic(uint64_t x);

// ratio = raw_sum / normalizer where raw_sum = sum f(n)/sqrt(n) and
// normalizer is the same sum for f == 1, both over powerful n <= x in one
// pass (so f == 1 gives ratio 1.0 bit-exactly).
struct MeanReport {
    double x = 0.0;
    double raw_sum = 0.0;
    double normalizer = 1.0;
    double ratio = 0.0;
    uint64_t terms = 0;
};
MeanReport normalized_log_mean(const MultiplicativeFunction& f, uint64_t x);

struct IdentityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double relative = 0.0;  // residual / max(1, |lhs|)
};

// Exact rearrangement of sum f(n)/sqrt(n) over powerful n <= x through the
// residual-times-square-extension factorization: the right side runs over
// cubefull d <= x and m <= sqrt(x/d).  Both sides are finite sums of the
// same values, so the residual is pure floating-point noise.
IdentityReport check_sqrt_identity(const MultiplicativeFunction& f, uint64_t x);

// Same rearrangement for x^{-1/2} sum_{n <= x} f(n).
IdentityReport check_mean_identity(const MultiplicativeFunction& f, uint64_t x);

// sum_{p <= y} |1 - f(p)| / p.
double small_prime_distance(const MultiplicativeFunction& f, double y);

// Mean of f against Theta(f, x^eps) times the mean of the small-prime
// smoothing of f.  ratio = residual / scale is the observable; the scale is
// eps * exp(small_prime_distance(f, x)).
struct SeparationReport {
    double lhs = 0.0;
    double main_term = 0.0;
    double residual = 0.0;
    double scale = 0.0;
    double ratio = 0.0;
};
SeparationReport separation_check(const MultiplicativeFunction& f, uint64_t x, double epsilon);

// Logarithmic version: (1/log x) sum f(n)/n against Theta(f, y) times the
// same sum for the smoothing, scale (log y)^3 / log x.
SeparationReport log_separation_check(const MultiplicativeFunction& f, uint64_t x, double y);

struct GapReport {
    double gap = 0.0;
    double scale = 0.0;
    double ratio = 0.0;
};

// |mean up to x minus mean up to x/y|, against (log 2y / log x) e^{s(f,x)}.
GapReport slow_variation_gap(const MultiplicativeFunction& f, uint64_t x, double y);

// x^{-1} |sum_{n<=x} f| - (w/x) |sum_{n<=x/w} f| (signed), against the
// slow-decay envelope in (log 2w / log x).
GapReport decay_gap(const MultiplicativeFunction& f, uint64_t x, double w);

}  // namespace multspec

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "multspec/arith.hpp"

namespace multspec {

// A multiplicative function presented by its rule on prime powers: a finite
// override table consulted first, then a default formula.  f(1) = 1 always.
// Every value is checked against the recorded bound when it is produced;
// a rule that wanders outside raises invariant_error.
//
// Values are plain doubles and rules are expected to keep |f(p^k)| <= 1
// unless a construction (residuals, convolutions) says otherwise.
class MultiplicativeFunction {
public:
    using Rule = std::function<double(uint64_t p, uint32_t e)>;

    struct Traits {
        bool completely_multiplicative = false;
        // 0 = unrestricted; j >= 2 promises f(p^e) = 0 for all e < j, i.e.
        // support inside the j-full numbers.
        uint32_t support_k = 0;
        double uniform_bound = 1.0;
        Rule bound_rule;  // when set, overrides uniform_bound
    };

    MultiplicativeFunction();  // the Dirichlet identity: 1 at n = 1, else 0

    static MultiplicativeFunction from_rule(Rule rule);
    static MultiplicativeFunction from_rule(Rule rule, Traits traits);

    // Value at p^e (e == 0 returns 1).
    double at(uint64_t p, uint32_t e) const;
    // Value at n given its factorization.
    double evaluate(const FactoredInteger& n) const;

    bool completely_multiplicative() const;
    uint32_t support_k() const;
    double bound(uint64_t p, uint32_t e) const;

    // Copy with one prime-power value pinned.  Overrides are validated
    // against the bound and the support flag immediately.
    MultiplicativeFunction with_override(uint64_t p, uint32_t e, double value) const;
    const std::map<std::pair<uint64_t, uint32_t>, double>& overrides() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

// ---- fixed profiles ----
MultiplicativeFunction delta_function();        // 1 at n=1 only
MultiplicativeFunction one_function();          // f == 1 everywhere
MultiplicativeFunction powerful_ones();         // 1 on powerful n, 0 elsewhere
MultiplicativeFunction extremal_minus_at_2();   // powerful support, -1 at 2^k, +1 at odd p^k
MultiplicativeFunction odd_powerful_ones();     // powerful support, 0 at 2^k, 1 at odd p^k

// ---- derived constructions ----

// Dirichlet convolution on prime powers: (f*g)(p^e) = sum f(p^i) g(p^{e-i}).
MultiplicativeFunction convolve(const MultiplicativeFunction& f, const MultiplicativeFunction& g);

// Completely multiplicative extension: p^e -> f(p)^e.
MultiplicativeFunction cm_extension(const MultiplicativeFunction& f);

// Residual of f against its cm extension: 0 at p, f(p^e) - f(p^{e-1}) f(p)
// for e >= 2.  Supported on powerful numbers; f = cm_residual(f) * cm_extension(f).
MultiplicativeFunction cm_residual(const MultiplicativeFunction& f);

// Completely multiplicative, 1 at primes <= y and f(p) above y.
MultiplicativeFunction smooth_small_primes(const MultiplicativeFunction& f, double y);

// Supported on primes <= y: p^e -> f(p)^e - f(p)^{e-1}.  Satisfies
// cm_extension(f) = small_prime_residual * smooth_small_primes.
MultiplicativeFunction small_prime_residual(const MultiplicativeFunction& f, double y);

// Closed form of cm_residual(f) * small_prime_residual(f, y):
//   p <= y: f(p^e) - f(p^{e-1});  p > y: 0 at p, f(p^e) - f(p^{e-1}) f(p).
MultiplicativeFunction combined_residual(const MultiplicativeFunction& f, double y);

// For f supported on powerful numbers: the square extension p^{2k} -> f(p^2)^k
// (odd exponents -> 0), and its compression m -> f~(m^2), i.e. p^e -> f(p^2)^e.
MultiplicativeFunction square_cm_extension(const MultiplicativeFunction& f);
MultiplicativeFunction square_compression(const MultiplicativeFunction& f);

// Residual of powerful-supported f against the square extension: 0 at e <= 2,
// f(p^e) - f(p^{e-2}) f(p^2) for e >= 3.  Supported on cubefull numbers.
MultiplicativeFunction powerful_residual(const MultiplicativeFunction& f);

// ---- seeded random functions ----

enum class Profile {
    general,
    completely_multiplicative,
    powerful_support,
    odd_powerful,
};

// Deterministic pseudorandom function with values in [-1, 1].  Prime powers
// with p <= p_max, e <= k_max get independent hashed values (subject to the
// profile's structure); e > k_max repeats the value at k_max, and p > p_max
// falls back to the profile default (1 on the profile's support).
MultiplicativeFunction random_function(uint64_t seed, Profile profile,
                                       uint64_t p_max = 10'000, uint32_t k_max = 16);

// ---- JSON function documents ----

struct FunctionSpec {
    std::string profile = "all-ones";
    uint64_t seed = 0;
    uint64_t p_max = 10'000;
    uint32_t k_max = 16;
    std::vector<std::tuple<uint64_t, uint32_t, double>> overrides;
};

// profile is one of: delta, one, all-ones (powerful), minus-at-2,
// odd-powerful, random-general, random-cm, random-powerful,
// random-odd-powerful.
MultiplicativeFunction build_function(const FunctionSpec& spec);
FunctionSpec parse_function_spec(const std::string& json_text);
std::string to_json(const FunctionSpec& spec);

}  // namespace multspec

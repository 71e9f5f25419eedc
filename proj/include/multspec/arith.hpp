#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "multspec/euler_value.hpp"

namespace multspec {

// Hard cap on enumeration / counting bounds.  Above this, a^2 b^3 merge
// arithmetic still fits in 64 bits but the smallest-prime-factor table for
// a <= sqrt(bound) stops being a desk-scale allocation.
inline constexpr uint64_t kMaxBound = 1'000'000'000'000'000ULL;  // 10^15

struct PrimePower {
    uint64_t p = 0;
    uint32_t e = 0;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// An integer with its prime factorization: primes strictly increasing,
// exponents >= 1.  value == 1 carries an empty factor list.
struct FactoredInteger {
    uint64_t value = 1;
    std::vector<PrimePower> factors;

    bool valid() const;  // re-checks the invariants, for tests
};

// Primes <= limit, ascending.  limit >= 2; limits above ~2.1e9 are refused
// (the bit array alone would pass 256 MiB).
std::vector<uint64_t> sieve_primes(uint64_t limit);

// Full factorization of any nonzero uint64.  Trial division over a cached
// prime table, then Miller-Rabin / Pollard rho for what survives.
FactoredInteger factorize(uint64_t n);

// All divisors, sorted ascending.
std::vector<uint64_t> divisors(const FactoredInteger& n);

// n is k-full when every prime exponent in n is >= k (1 counts for every k).
bool is_kfull(const FactoredInteger& n, uint32_t k);

// Ordered stream of the k-full integers in [1, bound], starting at 1.
//
// k == 2 walks the parameterization n = a^2 b^3 with b squarefree (every
// powerful number has exactly one such form), merging the per-b arithmetic
// progressions in a by value.  k >= 3 generates all products of prime powers
// p^e, e >= k, up front and sorts them; those sets are tiny.
class KfullStream {
public:
    KfullStream(uint64_t bound, uint32_t k, bool with_factors = true);

    // Next value, or nullopt when exhausted.  factors is filled only when
    // the stream was built with with_factors.
    std::optional<FactoredInteger> next();

    uint64_t bound() const { return bound_; }
    uint32_t k() const { return k_; }

private:
    struct Node {
        uint64_t value;
        uint64_t a;
        uint32_t b_index;
    };
    struct NodeGreater {
        bool operator()(const Node& l, const Node& r) const { return l.value > r.value; }
    };

    FactoredInteger with_factorization(const Node& node) const;
    std::vector<PrimePower> spf_factor(uint64_t n, uint32_t multiplier) const;

    uint64_t bound_;
    uint32_t k_;
    bool with_factors_;

    // k == 2 state
    std::vector<uint64_t> b_values_;   // squarefree b, b^3 <= bound
    std::vector<uint64_t> a_limits_;   // per b: largest admissible a
    std::priority_queue<Node, std::vector<Node>, NodeGreater> heap_;
    std::vector<uint32_t> spf_;        // smallest prime factor, up to sqrt(bound)

    // k >= 3 state
    std::vector<FactoredInteger> pregenerated_;
    size_t cursor_ = 0;
};

// Exact count of k-full integers in [1, x].  For k == 2 this is
// sum over squarefree b <= x^(1/3) of floor(sqrt(x / b^3)).
uint64_t count_kfull(uint64_t x, uint32_t k);

// Leading coefficient of the k-full counting function: the partial product
// over p <= prime_limit of (1 + sum_{m=k+1}^{2k-1} p^(-m/k)).  The inner sum
// is finite, so terms_per_prime = k-1 and tail_bound covers only the primes
// beyond prime_limit.
EulerProductValue kfull_constant(uint32_t k, uint64_t prime_limit);

}  // namespace multspec

#include "multspec/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "multspec/errors.hpp"
#include "multspec/numeric.hpp"

namespace multspec {

namespace {

constexpr uint64_t kSieveLimitMax = 2'147'483'648ULL;  // 2^31, ~256 MiB of bits

// Deterministic Miller-Rabin, valid for the full 64-bit range with this base set.
uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<__uint128_t>(a) * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

uint64_t pollard_rho(uint64_t n) {
    // Brent's variant; n must be odd, composite, not a prime power handled upstream.
    for (uint64_t c = 1;; ++c) {
        auto step = [n, c](uint64_t x) { return (mulmod(x, x, n) + c) % n; };
        uint64_t x = 2, y = 2, d = 1;
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            uint64_t diff = x > y ? x - y : y - x;
            d = std::gcd(diff, n);
        }
        if (d != n) return d;
    }
}

const std::vector<uint64_t>& small_primes() {
    static const std::vector<uint64_t> primes = sieve_primes(1u << 20);
    return primes;
}

}  // namespace

bool FactoredInteger::valid() const {
    __uint128_t prod = 1;
    uint64_t last_p = 0;
    for (const auto& [p, e] : factors) {
        if (p <= last_p || e == 0 || !is_prime_u64(p)) return false;
        last_p = p;
        for (uint32_t i = 0; i < e; ++i) {
            prod *= p;
            if (prod > UINT64_MAX) return false;
        }
    }
    return prod == value;
}

std::vector<uint64_t> sieve_primes(uint64_t limit) {
    if (limit < 2) throw std::domain_error("sieve_primes: limit must be >= 2");
    if (limit > kSieveLimitMax) throw resource_error("sieve_primes: limit above 2^31");
    std::vector<bool> composite(limit + 1, false);
    std::vector<uint64_t> primes;
    primes.reserve(limit > 16 ? static_cast<size_t>(limit / std::log(static_cast<double>(limit)) * 1.2) : 8);
    for (uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

FactoredInteger factorize(uint64_t n) {
    if (n == 0) throw std::domain_error("factorize: 0 has no factorization");
    FactoredInteger out;
    out.value = n;
    if (n == 1) return out;

    for (uint64_t p : small_primes()) {
        if (p * p > n) break;
        if (n % p) continue;
        uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.factors.push_back({p, e});
    }
    if (n == 1) return out;

    // What survives has no prime factor <= 2^20; split it recursively.
    std::vector<uint64_t> rest;
    auto split = [&rest](auto&& self, uint64_t m) -> void {
        if (m == 1) return;
        if (is_prime_u64(m)) {
            rest.push_back(m);
            return;
        }
        // An exact square or cube root here is prime: a composite root would
        // force m past 2^64 given that no factor is below 2^20.
        uint64_t r3 = icbrt(m);
        uint64_t r2 = isqrt(m);
        if (r3 * r3 * r3 == m) {
            rest.insert(rest.end(), 3, r3);
            return;
        }
        if (r2 * r2 == m) {
            rest.insert(rest.end(), 2, r2);
            return;
        }
        uint64_t d = pollard_rho(m);
        self(self, d);
        self(self, m / d);
    };
    split(split, n);
    std::sort(rest.begin(), rest.end());
    for (size_t i = 0; i < rest.size();) {
        size_t j = i;
        while (j < rest.size() && rest[j] == rest[i]) ++j;
        out.factors.push_back({rest[i], static_cast<uint32_t>(j - i)});
        i = j;
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const PrimePower& l, const PrimePower& r) { return l.p < r.p; });
    return out;
}

std::vector<uint64_t> divisors(const FactoredInteger& n) {
    std::vector<uint64_t> divs{1};
    for (const auto& [p, e] : n.factors) {
        size_t base = divs.size();
        uint64_t pk = 1;
        for (uint32_t i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

bool is_kfull(const FactoredInteger& n, uint32_t k) {
    if (k == 0) throw std::domain_error("is_kfull: k must be >= 1");
    return std::all_of(n.factors.begin(), n.factors.end(),
                       [k](const PrimePower& f) { return f.e >= k; });
}

KfullStream::KfullStream(uint64_t bound, uint32_t k, bool with_factors)
    : bound_(bound), k_(k), with_factors_(with_factors) {
    if (k < 2) throw std::domain_error("KfullStream: k must be >= 2");
    if (bound < 1) throw std::domain_error("KfullStream: bound must be >= 1");
    if (bound > kMaxBound) throw std::domain_error("KfullStream: bound above 10^15");

    if (k_ == 2) {
        // The SPF table up to sqrt(bound) exists only to factor the a of
        // a^2 b^3; values-only streams get away with cbrt(bound) for the
        // squarefree test on b.
        uint64_t spf_limit = std::max<uint64_t>(with_factors_ ? isqrt(bound_) : icbrt(bound_), 2);
        spf_.assign(spf_limit + 1, 0);
        for (uint64_t i = 2; i <= spf_limit; ++i) {
            if (spf_[i]) continue;
            for (uint64_t j = i; j <= spf_limit; j += i) {
                if (!spf_[j]) spf_[j] = static_cast<uint32_t>(i);
            }
        }
        uint64_t b_max = icbrt(bound_);
        for (uint64_t b = 1; b <= b_max; ++b) {
            bool squarefree = true;
            for (uint64_t m = b; m > 1;) {
                uint64_t p = spf_[m], e = 0;
                while (m % p == 0) {
                    m /= p;
                    ++e;
                }
                if (e > 1) {
                    squarefree = false;
                    break;
                }
            }
            if (!squarefree) continue;
            uint64_t b3 = b * b * b;
            auto idx = static_cast<uint32_t>(b_values_.size());
            b_values_.push_back(b);
            a_limits_.push_back(isqrt(bound_ / b3));
            heap_.push({b3, 1, idx});
        }
    } else {
        uint64_t p_max = iroot(bound_, k_);
        std::vector<uint64_t> primes = p_max >= 2 ? sieve_primes(p_max) : std::vector<uint64_t>{};
        std::vector<PrimePower> stack;
        // Depth-first over products of p^e, e >= k, with strictly increasing p.
        auto rec = [&](auto&& self, size_t from, uint64_t value) -> void {
            pregenerated_.push_back({value, stack});
            for (size_t i = from; i < primes.size(); ++i) {
                uint64_t p = primes[i];
                __uint128_t pk = 1;
                for (uint32_t e = 0; e < k_; ++e) pk *= p;
                if (pk > bound_ / value) break;
                auto next = static_cast<uint64_t>(pk);
                uint32_t e = k_;
                while (next <= bound_ / value) {
                    stack.push_back({p, e});
                    self(self, i + 1, value * next);
                    stack.pop_back();
                    if (next > bound_ / value / p) break;
                    next *= p;
                    ++e;
                }
            }
        };
        rec(rec, 0, 1);
        std::sort(pregenerated_.begin(), pregenerated_.end(),
                  [](const FactoredInteger& l, const FactoredInteger& r) { return l.value < r.value; });
    }
}

std::vector<PrimePower> KfullStream::spf_factor(uint64_t n, uint32_t multiplier) const {
    std::vector<PrimePower> out;
    while (n > 1) {
        uint64_t p = spf_[n];
        uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e * multiplier});
    }
    return out;
}

FactoredInteger KfullStream::with_factorization(const Node& node) const {
    FactoredInteger out;
    out.value = node.value;
    if (!with_factors_) return out;
    // Merge exponents of a^2 and b^3; a and b need not be coprime.
    std::vector<PrimePower> fa = spf_factor(node.a, 2);
    std::vector<PrimePower> fb = spf_factor(b_values_[node.b_index], 3);
    std::sort(fa.begin(), fa.end(), [](auto& l, auto& r) { return l.p < r.p; });
    std::sort(fb.begin(), fb.end(), [](auto& l, auto& r) { return l.p < r.p; });
    size_t i = 0, j = 0;
    while (i < fa.size() || j < fb.size()) {
        if (j == fb.size() || (i < fa.size() && fa[i].p < fb[j].p)) {
            out.factors.push_back(fa[i++]);
        } else if (i == fa.size() || fb[j].p < fa[i].p) {
            out.factors.push_back(fb[j++]);
        } else {
            out.factors.push_back({fa[i].p, fa[i].e + fb[j].e});
            ++i;
            ++j;
        }
    }
    return out;
}

std::optional<FactoredInteger> KfullStream::next() {
    if (k_ == 2) {
        if (heap_.empty()) return std::nullopt;
        Node top = heap_.top();
        heap_.pop();
        if (top.a < a_limits_[top.b_index]) {
            uint64_t a = top.a + 1;
            uint64_t b3 = b_values_[top.b_index] * b_values_[top.b_index] * b_values_[top.b_index];
            heap_.push({a * a * b3, a, top.b_index});
        }
        return with_factorization(top);
    }
    if (cursor_ >= pregenerated_.size()) return std::nullopt;
    return pregenerated_[cursor_++];
}

uint64_t count_kfull(uint64_t x, uint32_t k) {
    if (k < 2) throw std::domain_error("count_kfull: k must be >= 2");
    if (x < 1) throw std::domain_error("count_kfull: x must be >= 1");
    if (x > kMaxBound) throw std::domain_error("count_kfull: x above 10^15");

    if (k == 2) {
        uint64_t b_max = icbrt(x);
        std::vector<uint32_t> spf(b_max + 1, 0);
        for (uint64_t i = 2; i <= b_max; ++i) {
            if (spf[i]) continue;
            for (uint64_t j = i; j <= b_max; j += i) {
                if (!spf[j]) spf[j] = static_cast<uint32_t>(i);
            }
        }
        uint64_t total = 0;
        for (uint64_t b = 1; b <= b_max; ++b) {
            bool squarefree = true;
            for (uint64_t m = b; m > 1;) {
                uint64_t p = spf[m], e = 0;
                while (m % p == 0) {
                    m /= p;
                    ++e;
                }
                if (e > 1) {
                    squarefree = false;
                    break;
                }
            }
            if (squarefree) total += isqrt(x / (b * b * b));
        }
        return total;
    }

    uint64_t p_max = iroot(x, k);
    std::vector<uint64_t> primes = p_max >= 2 ? sieve_primes(p_max) : std::vector<uint64_t>{};
    auto rec = [&](auto&& self, size_t from, uint64_t value) -> uint64_t {
        uint64_t total = 1;
        for (size_t i = from; i < primes.size(); ++i) {
            uint64_t p = primes[i];
            __uint128_t pk = 1;
            for (uint32_t e = 0; e < k; ++e) pk *= p;
            if (pk > x / value) break;
            auto next = static_cast<uint64_t>(pk);
            while (next <= x / value) {
                total += self(self, i + 1, value * next);
                if (next > x / value / p) break;
                next *= p;
            }
        }
        return total;
    };
    return rec(rec, 0, 1);
}

EulerProductValue kfull_constant(uint32_t k, uint64_t prime_limit) {
    if (k < 2) throw std::domain_error("kfull_constant: k must be >= 2");
    if (prime_limit < 2) throw std::domain_error("kfull_constant: prime_limit must be >= 2");

    KahanSum log_sum;
    for (uint64_t p : sieve_primes(prime_limit)) {
        double factor = 1.0;
        for (uint32_t m = k + 1; m <= 2 * k - 1; ++m) {
            factor += std::pow(static_cast<double>(p), -static_cast<double>(m) / k);
        }
        log_sum.add(std::log(factor));
    }

    // log(true/partial) = sum_{p > P} log(1 + ...) <= sum over the same p of
    // the inner terms, and each sum_{p > P} p^(-m/k) is below the integral
    // of t^(-m/k) from P to infinity.
    double tail = 0.0;
    for (uint32_t m = k + 1; m <= 2 * k - 1; ++m) {
        double s = static_cast<double>(m) / k;
        tail += std::pow(static_cast<double>(prime_limit), 1.0 - s) / (s - 1.0);
    }

    EulerProductValue out;
    out.value = std::exp(log_sum.value());
    out.prime_limit = prime_limit;
    out.tail_bound = tail;
    out.terms_per_prime = k - 1;
    return out;
}

}  // namespace multspec

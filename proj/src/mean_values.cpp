#include "multspec/mean_values.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "multspec/arith.hpp"
#include "multspec/errors.hpp"
#include "multspec/euler.hpp"
#include "multspec/numeric.hpp"

namespace multspec {

namespace {

// Calls fn(n, f(n)) for every n in [1, x], factoring each block by the
// primes <= sqrt(x) and finishing with the surviving large prime.
template <class Fn>
void for_each_value(const MultiplicativeFunction& f, uint64_t x, Fn&& fn) {
    constexpr uint64_t kBlock = 1 << 18;
    std::vector<uint64_t> primes =
        x >= 4 ? sieve_primes(isqrt(x)) : std::vector<uint64_t>{};
    std::vector<uint64_t> rem(kBlock);
    std::vector<double> val(kBlock);
    for (uint64_t lo = 1; lo <= x; lo += kBlock) {
        uint64_t hi = std::min(x, lo + kBlock - 1);
        size_t len = hi - lo + 1;
        for (size_t i = 0; i < len; ++i) {
            rem[i] = lo + i;
            val[i] = 1.0;
        }
        for (uint64_t p : primes) {
            if (p * p > hi) break;
            for (uint64_t m = (lo + p - 1) / p * p; m <= hi; m += p) {
                size_t idx = m - lo;
                uint32_t e = 0;
                while (rem[idx] % p == 0) {
                    rem[idx] /= p;
                    ++e;
                }
                val[idx] *= f.at(p, e);
            }
        }
        for (size_t i = 0; i < len; ++i) {
            double v = rem[i] > 1 ? val[i] * f.at(rem[i], 1) : val[i];
            fn(lo + i, v);
        }
    }
}

void check_sum_domain(uint64_t x) {
    if (x < 1) throw std::domain_error("partial sums need x >= 1");
    if (x > kMaxBound) throw std::domain_error("partial sums cap at x = 10^15");
}

void require_powerful_support(const MultiplicativeFunction& f, const char* who) {
    if (f.support_k() < 2) {
        throw std::domain_error(std::string(who) + ": f must be flagged powerful-supported");
    }
}

double powerful_count_coefficient() {
    static const double c2 = kfull_constant(2, 1'000'000).value;
    return c2;
}

}  // namespace

double partial_sum(const MultiplicativeFunction& f, uint64_t x) {
    check_sum_domain(x);
    KahanSum s;
    if (f.support_k() >= 2) {
        KfullStream st(x, f.support_k());
        while (auto n = st.next()) s.add(f.evaluate(*n));
        return s.value();
    }
    if (x > kFullIterationCap) {
        throw resource_error(
            "partial_sum: full iteration above 1e8; flag the function's support "
            "or lower x");
    }
    for_each_value(f, x, [&s](uint64_t, double v) { s.add(v); });
    return s.value();
}

double harmonic_sum(const MultiplicativeFunction& f, uint64_t x) {
    check_sum_domain(x);
    KahanSum s;
    if (f.support_k() >= 2) {
        KfullStream st(x, f.support_k());
        while (auto n = st.next()) {
            s.add(f.evaluate(*n) / static_cast<double>(n->value));
        }
        return s.value();
    }
    if (x > kFullIterationCap) {
        throw resource_error("harmonic_sum: full iteration above 1e8");
    }
    for_each_value(f, x, [&s](uint64_t n, double v) { s.add(v / static_cast<double>(n)); });
    return s.value();
}

double sqrt_weighted_sum(const MultiplicativeFunction& f, uint64_t x) {
    check_sum_domain(x);
    require_powerful_support(f, "sqrt_weighted_sum");
    KahanSum s;
    KfullStream st(x, f.support_k());
    while (auto n = st.next()) {
        s.add(f.evaluate(*n) / std::sqrt(static_cast<double>(n->value)));
    }
    return s.value();
}

PowerfulHarmonic powerful_sqrt_harmonic(uint64_t x) {
    check_sum_domain(x);
    KahanSum s;
    KfullStream st(x, 2, /*with_factors=*/false);
    while (auto n = st.next()) {
        s.add(1.0 / std::sqrt(static_cast<double>(n->value)));
    }
    PowerfulHarmonic out;
    out.sum = s.value();
    out.reference = powerful_count_coefficient() * std::log(std::sqrt(static_cast<double>(x)));
    out.remainder = out.sum - out.reference;
    return out;
}

MeanReport normalized_log_mean(const MultiplicativeFunction& f, uint64_t x) {
    check_sum_domain(x);
    require_powerful_support(f, "normalized_log_mean");
    KahanSum num, den;
    uint64_t terms = 0;
    KfullStream st(x, 2);
    while (auto n = st.next()) {
        double inv = 1.0 / std::sqrt(static_cast<double>(n->value));
        num.add(f.evaluate(*n) * inv);
        den.add(inv);
        ++terms;
    }
    MeanReport out;
    out.x = static_cast<double>(x);
    out.raw_sum = num.value();
    out.normalizer = den.value();
    out.ratio = out.raw_sum / out.normalizer;
    out.terms = terms;
    return out;
}

IdentityReport check_sqrt_identity(const MultiplicativeFunction& f, uint64_t x) {
    check_sum_domain(x);
    require_powerful_support(f, "check_sqrt_identity");
    auto residual = powerful_residual(f);
    auto compressed = square_compression(f);

    // prefix[m] = sum_{j <= m} compressed(j) / j
    uint64_t m_max = isqrt(x);
    std::vector<double> prefix(m_max + 1, 0.0);
    KahanSum ps;
    for_each_value(compressed, m_max, [&](uint64_t m, double v) {
        ps.add(v / static_cast<double>(m));
        prefix[m] = ps.value();
    });

    KahanSum lhs;
    KfullStream st2(x, 2);
    while (auto n = st2.next()) {
        lhs.add(f.evaluate(*n) / std::sqrt(static_cast<double>(n->value)));
    }

    KahanSum rhs;
    KfullStream st3(x, 3);
    while (auto n = st3.next()) {
        double rv = residual.evaluate(*n);
        if (rv == 0.0) continue;
        // m <= sqrt(x/d) over integers is exactly m <= isqrt(floor(x/d)).
        rhs.add(rv / std::sqrt(static_cast<double>(n->value)) * prefix[isqrt(x / n->value)]);
    }

    IdentityReport out;
    out.lhs = lhs.value();
    out.rhs = rhs.value();
    out.residual = std::abs(out.lhs - out.rhs);
    out.relative = out.residual / std::max(1.0, std::abs(out.lhs));
    return out;
}

IdentityReport check_mean_identity(const MultiplicativeFunction& f, uint64_t x) {
    check_sum_domain(x);
    require_powerful_support(f, "check_mean_identity");
    auto residual = powerful_residual(f);
    auto compressed = square_compression(f);

    uint64_t m_max = isqrt(x);
    std::vector<double> prefix(m_max + 1, 0.0);
    KahanSum ps;
    for_each_value(compressed, m_max, [&](uint64_t m, double v) {
        ps.add(v);
        prefix[m] = ps.value();
    });

    double dx = static_cast<double>(x);
    double lhs = partial_sum(f, x) / std::sqrt(dx);

    KahanSum rhs;
    KfullStream st3(x, 3);
    while (auto n = st3.next()) {
        double rv = residual.evaluate(*n);
        if (rv == 0.0) continue;
        double dn = static_cast<double>(n->value);
        rhs.add(rv / std::sqrt(dn) * std::sqrt(dn / dx) * prefix[isqrt(x / n->value)]);
    }

    IdentityReport out;
    out.lhs = lhs;
    out.rhs = rhs.value();
    out.residual = std::abs(out.lhs - out.rhs);
    out.relative = out.residual / std::max(1.0, std::abs(out.lhs));
    return out;
}

double small_prime_distance(const MultiplicativeFunction& f, double y) {
    if (!(y >= 0)) throw std::domain_error("small_prime_distance: y must be >= 0");
    if (y < 2) return 0.0;
    if (y > static_cast<double>(kExperimentCap)) {
        throw resource_error("small_prime_distance: y above 1e7");
    }
    KahanSum s;
    for (uint64_t p : sieve_primes(static_cast<uint64_t>(y))) {
        s.add(std::abs(1.0 - f.at(p, 1)) / static_cast<double>(p));
    }
    return s.value();
}

SeparationReport separation_check(const MultiplicativeFunction& f, uint64_t x, double epsilon) {
    if (x < 3) throw std::domain_error("separation_check: x must be >= 3");
    if (x > kExperimentCap) throw resource_error("separation_check: x above 1e7");
    double logx = std::log(static_cast<double>(x));
    if (!(epsilon < 1.0) || epsilon * logx < std::log(2.0) - 1e-12) {
        throw std::domain_error("separation_check: epsilon must lie in [log 2 / log x, 1)");
    }

    double y = std::pow(static_cast<double>(x), epsilon);
    auto g = smooth_small_primes(f, y);
    auto theta = euler_theta(f, y);

    SeparationReport out;
    out.lhs = partial_sum(f, x) / static_cast<double>(x);
    out.main_term = theta.value * (partial_sum(g, x) / static_cast<double>(x));
    out.residual = std::abs(out.lhs - out.main_term);
    out.scale = epsilon * std::exp(small_prime_distance(f, static_cast<double>(x)));
    out.ratio = out.residual / out.scale;
    return out;
}

SeparationReport log_separation_check(const MultiplicativeFunction& f, uint64_t x, double y) {
    if (x < 4) throw std::domain_error("log_separation_check: x must be >= 4");
    if (x > kExperimentCap) throw resource_error("log_separation_check: x above 1e7");
    if (!(y >= 2.0) || y > static_cast<double>(x) / 2.0) {
        throw std::domain_error("log_separation_check: need 2 <= y <= x/2");
    }

    auto g = smooth_small_primes(f, y);
    auto theta = euler_theta(f, y);
    double logx = std::log(static_cast<double>(x));

    SeparationReport out;
    out.lhs = harmonic_sum(f, x) / logx;
    out.main_term = theta.value * (harmonic_sum(g, x) / logx);
    out.residual = std::abs(out.lhs - out.main_term);
    out.scale = std::pow(std::log(y), 3.0) / logx;
    out.ratio = out.residual / out.scale;
    return out;
}

GapReport slow_variation_gap(const MultiplicativeFunction& f, uint64_t x, double y) {
    if (!(y >= 1.0) || y > static_cast<double>(x)) {
        throw std::domain_error("slow_variation_gap: need 1 <= y <= x");
    }
    if (x > kExperimentCap && f.support_k() < 2) {
        throw resource_error("slow_variation_gap: x above 1e7 for full iteration");
    }
    double dx = static_cast<double>(x);
    double shrunk = dx / y;
    auto x2 = static_cast<uint64_t>(shrunk);
    GapReport out;
    out.gap = std::abs(partial_sum(f, x) / dx - partial_sum(f, x2) / shrunk);
    // The prime sum in the scale is capped at 1e7; past that the extra
    // contribution grows like log log x and only loosens the envelope.
    out.scale = std::log(2.0 * y) / std::log(dx) *
                std::exp(small_prime_distance(f, std::min(dx, static_cast<double>(kExperimentCap))));
    out.ratio = out.gap / out.scale;
    return out;
}

GapReport decay_gap(const MultiplicativeFunction& f, uint64_t x, double w) {
    if (!(w >= 1.0) || w > static_cast<double>(x) / 10.0) {
        throw std::domain_error("decay_gap: need 1 <= w <= x/10");
    }
    if (x > kExperimentCap && f.support_k() < 2) {
        throw resource_error("decay_gap: x above 1e7 for full iteration");
    }
    double dx = static_cast<double>(x);
    auto x2 = static_cast<uint64_t>(dx / w);
    GapReport out;
    out.gap = std::abs(partial_sum(f, x)) / dx -
              (w / dx) * std::abs(partial_sum(f, x2));
    double logx = std::log(dx);
    double lw = std::log(2.0 * w);
    out.scale = std::pow(lw / logx, 1.0 - 2.0 / M_PI) * std::log(logx / lw) +
                std::log(logx) / std::pow(logx, 2.0 - std::sqrt(3.0));
    out.ratio = out.gap / out.scale;
    return out;
}

}  // namespace multspec

#pragma once

#include <cmath>
#include <cstdint>

namespace multspec {

// Compensated (Kahan) accumulator. The identity checks in this library push
// residuals down to 1e-12 relative over sums with millions of mixed-sign
// terms, where a plain double accumulator loses exactly the digits we assert.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// Product accumulated as sign + log magnitude. Factors may be negative (the
// p = 2 factor of the modified Euler product) or exactly zero.
class SignedLogProduct {
public:
    void multiply(double factor) {
        if (zero_) return;
        if (factor == 0.0) {
            zero_ = true;
            return;
        }
        if (factor < 0.0) sign_ = -sign_;
        log_abs_ += std::log(std::abs(factor));
    }
    bool zero() const { return zero_; }
    int sign() const { return sign_; }
    double log_abs() const { return log_abs_; }
    double value() const { return zero_ ? 0.0 : sign_ * std::exp(log_abs_); }

private:
    bool zero_ = false;
    int sign_ = 1;
    double log_abs_ = 0.0;
};

// Integer square root, exact for the full uint64 range.
inline uint64_t isqrt(uint64_t n) {
    if (n == 0) return 0;
    auto r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<__uint128_t>(r) * r > n) --r;
    while (static_cast<__uint128_t>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Integer cube root, exact for the full uint64 range.
inline uint64_t icbrt(uint64_t n) {
    if (n == 0) return 0;
    auto r = static_cast<uint64_t>(std::cbrt(static_cast<double>(n)));
    while (r > 0 && static_cast<__uint128_t>(r) * r * r > n) --r;
    while (static_cast<__uint128_t>(r + 1) * (r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Integer k-th root: largest r with r^k <= n.
inline uint64_t iroot(uint64_t n, uint32_t k) {
    if (k == 1) return n;
    if (k == 2) return isqrt(n);
    if (k == 3) return icbrt(n);
    if (n == 0) return 0;
    auto pow_le = [n](uint64_t r, uint32_t e) {
        __uint128_t acc = 1;
        for (uint32_t i = 0; i < e; ++i) {
            acc *= r;
            if (acc > n) return false;
        }
        return true;
    };
    auto r = static_cast<uint64_t>(std::pow(static_cast<double>(n), 1.0 / k));
    while (r > 0 && !pow_le(r, k)) --r;
    while (pow_le(r + 1, k)) ++r;
    return r;
}

// Small integer power of a double by repeated multiplication; deterministic
// and exact for dyadic bases, used by the completely multiplicative rules.
inline double ipow(double base, uint32_t e) {
    double acc = 1.0;
    for (uint32_t i = 0; i < e; ++i) acc *= base;
    return acc;
}

}  // namespace multspec

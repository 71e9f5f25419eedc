#include "multspec/euler.hpp"

#include <cmath>
#include <stdexcept>

#include "multspec/arith.hpp"
#include "multspec/errors.hpp"
#include "multspec/numeric.hpp"

namespace multspec {

namespace {

constexpr double kZeroFactor = 1e-12;   // below this a local factor counts as 0
constexpr double kNoGuarantee = 1e9;    // tail marker when no rigorous bound applies

// Contribution of one local factor's truncation to the log-scale tail.
double log_tail_contribution(double tail_abs, double factor) {
    double rel = tail_abs / std::abs(factor);
    if (rel >= 0.5) return kNoGuarantee;
    return -std::log1p(-rel);
}

}  // namespace

EulerProductValue euler_theta(const MultiplicativeFunction& f, double y, uint32_t depth) {
    if (depth < 4) throw std::domain_error("euler_theta: depth must be >= 4");
    if (!(y >= 0)) throw std::domain_error("euler_theta: y must be >= 0");

    EulerProductValue out;
    out.prime_limit = y < 2 ? 0 : static_cast<uint64_t>(y);
    out.terms_per_prime = depth;
    if (y < 2) return out;  // empty product, exactly 1

    SignedLogProduct product;
    KahanSum tail_log;
    for (uint64_t p : sieve_primes(static_cast<uint64_t>(y))) {
        double dp = static_cast<double>(p);
        double inv_p = 1.0 / dp;
        double factor = 1.0;
        double pk = 1.0;
        uint32_t kstop = depth;
        double prev = 1.0;  // f(p^{k-1})
        for (uint32_t k = 1; k <= depth; ++k) {
            pk *= inv_p;
            double cur = f.at(p, k);
            factor += (cur - prev) * pk;
            prev = cur;
            if (pk < 1e-18) {
                kstop = k;
                break;
            }
        }
        if (std::abs(factor) < kZeroFactor) {
            out.value = 0.0;
            out.exact_zero = true;
            out.tail_bound = 0.0;
            return out;
        }
        // Omitted differences are bounded by 2 each.
        double tail_abs = 2.0 * std::pow(dp, -(static_cast<double>(kstop) + 1.0)) / (1.0 - inv_p);
        tail_log.add(log_tail_contribution(tail_abs, factor));
        product.multiply(factor);
    }
    out.value = product.value();
    out.tail_bound = tail_log.value();
    return out;
}

LocalFactor residual_factor(const MultiplicativeFunction& f, uint64_t p, uint32_t depth) {
    if (depth < 4) throw std::domain_error("residual_factor: depth must be >= 4");
    auto r = powerful_residual(f);  // enforces the powerful-support pre
    double dp = static_cast<double>(p);
    LocalFactor out;
    uint32_t kstop = depth;
    for (uint32_t k = 3; k <= depth; ++k) {
        double pk = std::pow(dp, -0.5 * static_cast<double>(k));
        out.value += r.at(p, k) * pk;
        if (pk < 1e-18) {
            kstop = k;
            break;
        }
    }
    double inv_sqrt = std::pow(dp, -0.5);
    out.tail_bound =
        2.0 * std::pow(dp, -0.5 * (static_cast<double>(kstop) + 1.0)) / (1.0 - inv_sqrt);
    return out;
}

double modified_factor(const MultiplicativeFunction& f, uint64_t p, uint32_t depth) {
    double dp = static_cast<double>(p);
    double rf = residual_factor(f, p, depth).value;
    // Grouped as like-terms ratios so the all-ones function gives exactly
    // 1.0 * 1.0: both halves then divide a double by itself.
    double q1 = rf / (1.0 + std::pow(dp, -1.5));
    double q2 = (1.0 - 1.0 / dp) / (1.0 - f.at(p, 2) / dp);
    return q1 * q2;
}

EulerProductValue modified_euler_product(const MultiplicativeFunction& f, uint64_t prime_limit,
                                         uint32_t depth) {
    if (prime_limit < 2) throw std::domain_error("modified_euler_product: prime_limit must be >= 2");

    SignedLogProduct product;
    KahanSum tail_log;
    for (uint64_t p : sieve_primes(prime_limit)) {
        double dp = static_cast<double>(p);
        LocalFactor rf = residual_factor(f, p, depth);
        double q2 = (1.0 - 1.0 / dp) / (1.0 - f.at(p, 2) / dp);
        double factor = rf.value / (1.0 + std::pow(dp, -1.5)) * q2;
        if (std::abs(factor) < kZeroFactor) {
            EulerProductValue out;
            out.value = 0.0;
            out.exact_zero = true;
            out.prime_limit = prime_limit;
            out.terms_per_prime = depth;
            return out;
        }
        double tail_abs = rf.tail_bound / (1.0 + std::pow(dp, -1.5)) * std::abs(q2);
        tail_log.add(log_tail_contribution(tail_abs, factor));
        product.multiply(factor);
    }

    // Primes beyond prime_limit: |factor - 1| <= 6 p^{-3/2} provided
    // f(p^2) = 1 out there, hence sum of |log factor| <= 24 / sqrt(P)
    // once 6 P^{-3/2} <= 1/2 (P >= 7).
    double omitted = prime_limit >= 7
                         ? 24.0 / std::sqrt(static_cast<double>(prime_limit))
                         : kNoGuarantee;

    EulerProductValue out;
    out.value = product.value();
    out.prime_limit = prime_limit;
    out.tail_bound = tail_log.value() + omitted;
    out.terms_per_prime = depth;
    return out;
}

PerPrimeBounds per_prime_bounds(const MultiplicativeFunction& f, uint64_t p, uint32_t depth) {
    PerPrimeBounds out;
    out.p = p;
    out.residual_factor = residual_factor(f, p, depth).value;
    out.modified_factor = modified_factor(f, p, depth);
    if (p >= 3) {
        out.factor_positive = out.residual_factor > 0.0;
        out.within_bounds = out.modified_factor <= 1.0 + 1e-12;
    } else {
        out.factor_positive = true;  // not claimed at p = 2
        out.within_bounds = out.modified_factor >= delta2() - 1e-12;
    }
    return out;
}

namespace {

// Crude global constant for the rigorous tails: the full series
// sum |r(n)| n^{-(1/2 - eta)} over cubefull n with |r(p^k)| <= 2 is at most
// prod_p (1 + 2 sum_{k>=3} p^{-k(1/2-eta)}), eta = 1/12.  Finite product up
// to 1e5 plus an integral bound on the rest, all on the log scale.
double eta_majorant() {
    static const double value = [] {
        const double s = 0.5 - 1.0 / 12.0;  // 5/12
        KahanSum log_sum;
        for (uint64_t p : sieve_primes(100'000)) {
            double dp = static_cast<double>(p);
            double geo = std::pow(dp, -3.0 * s) / (1.0 - std::pow(dp, -s));
            log_sum.add(std::log1p(2.0 * geo));
        }
        double P = 100'000.0;
        double integral = std::pow(P, 1.0 - 3.0 * s) / (3.0 * s - 1.0);
        double tail = 2.0 * integral / (1.0 - std::pow(P, -s));
        return std::exp(log_sum.value() + tail);
    }();
    return value;
}

}  // namespace

ResidualSeries residual_series(const MultiplicativeFunction& f, uint64_t limit, uint32_t depth) {
    if (limit < 8) throw std::domain_error("residual_series: limit must be >= 8");
    auto r = powerful_residual(f);

    ResidualSeries out;
    KahanSum series, log_series;
    uint64_t q1 = limit / 4, q2 = limit / 2;
    double s_q1 = 0.0, s_q2 = 0.0, l_q1 = 0.0, l_q2 = 0.0;
    bool seen_q1 = false, seen_q2 = false;

    KfullStream st(limit, 3);
    while (auto n = st.next()) {
        if (!seen_q1 && n->value > q1) {
            s_q1 = series.value();
            l_q1 = log_series.value();
            seen_q1 = true;
        }
        if (!seen_q2 && n->value > q2) {
            s_q2 = series.value();
            l_q2 = log_series.value();
            seen_q2 = true;
        }
        double v = r.evaluate(*n);
        ++out.terms;
        if (v == 0.0) continue;
        double dn = static_cast<double>(n->value);
        double w = v / std::sqrt(dn);
        series.add(w);
        log_series.add(-0.5 * w * std::log(dn));
    }
    if (!seen_q1) {
        s_q1 = series.value();
        l_q1 = log_series.value();
    }
    if (!seen_q2) {
        s_q2 = series.value();
        l_q2 = log_series.value();
    }

    out.series = series.value();
    out.log_series = log_series.value();
    out.series_tail = std::abs(out.series - s_q2) + std::abs(s_q2 - s_q1);
    out.log_series_tail = std::abs(out.log_series - l_q2) + std::abs(l_q2 - l_q1);

    // sum_{n > N} |r(n)| n^{-1/2} <= N^{-eta} * majorant, eta = 1/12; the log
    // variant additionally uses log(n) <= (24/e) n^{1/24}.
    double nd = static_cast<double>(limit);
    out.rigorous_tail = eta_majorant() * std::pow(nd, -1.0 / 12.0);
    out.log_rigorous_tail = 0.5 * (24.0 / std::exp(1.0)) * eta_majorant() * std::pow(nd, -1.0 / 24.0);

    // Product route over p <= limit^(1/3).
    uint64_t p3 = icbrt(limit);
    SignedLogProduct product;
    KahanSum ptail;
    if (p3 >= 2) {
        for (uint64_t p : sieve_primes(p3)) {
            LocalFactor lf = residual_factor(f, p, depth);
            if (std::abs(lf.value) < kZeroFactor) {
                product.multiply(0.0);
                continue;
            }
            ptail.add(log_tail_contribution(lf.tail_bound, lf.value));
            product.multiply(lf.value);
        }
    }
    // Omitted primes: |I_p - 1| <= 2 p^{-3/2} / (1 - p^{-1/2}), usable once
    // that is below 1/2 (true from p = 5 on).
    double omitted = p3 >= 5 ? 8.0 / ((1.0 - std::pow(static_cast<double>(p3), -0.5)) *
                                      std::sqrt(static_cast<double>(p3)))
                             : kNoGuarantee;
    out.product_value = product.value();
    out.product_tail = ptail.value() + omitted;
    return out;
}

double delta2() { return -std::sqrt(2.0) / (4.0 + std::sqrt(2.0)); }

}  // namespace multspec

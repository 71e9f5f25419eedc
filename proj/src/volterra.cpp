#include "multspec/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "multspec/numeric.hpp"

namespace multspec {

namespace {

constexpr double kGridSlack = 1e-9;

void validate(const ChiSpec& chi) {
    if (chi.breakpoints.size() != chi.values.size()) {
        throw std::invalid_argument("chi: breakpoints and values differ in length");
    }
    double prev = 1.0;
    for (size_t i = 0; i < chi.breakpoints.size(); ++i) {
        double b = chi.breakpoints[i];
        if (!std::isfinite(b) || b < prev || (i > 0 && b == prev)) {
            throw std::invalid_argument("chi: breakpoints must be >= 1 and strictly increasing");
        }
        double v = chi.values[i];
        if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
            throw std::invalid_argument("chi: segment values must lie in [-1, 1]");
        }
        prev = b;
    }
}

double parse_number(const std::string& token, const char* what) {
    size_t used = 0;
    double v;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("chi: cannot parse ") + what + " '" + token +
                                    "'; expected const:1 or step:<b>:<v>[,<b>:<v>...]");
    }
    if (used != token.size()) {
        throw std::invalid_argument(std::string("chi: trailing junk in ") + what + " '" + token +
                                    "'");
    }
    return v;
}

double simpson_panel(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double simpson_rec(F&& f, double a, double m, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson_panel(a, m, fa, flm, fm);
    double right = simpson_panel(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    return simpson_rec(f, a, m, b, fa, fm, fb, simpson_panel(a, b, fa, fm, fb), tol, 40);
}

}  // namespace

double ChiSpec::at(double t) const {
    if (t < 0.0) throw std::domain_error("chi: t must be >= 0");
    double v = 1.0;
    for (size_t i = 0; i < breakpoints.size() && t >= breakpoints[i]; ++i) v = values[i];
    return v;
}

ChiSpec ChiSpec::constant_one() { return {}; }

ChiSpec ChiSpec::parse(const std::string& text) {
    const char* grammar = "chi: expected const:1 or step:<b>:<v>[,<b>:<v>...]";
    auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument(grammar);
    std::string kind = text.substr(0, colon);
    std::string rest = text.substr(colon + 1);
    if (kind == "const") {
        if (parse_number(rest, "constant") != 1.0) {
            throw std::invalid_argument("chi: the only admissible constant is 1 "
                                        "(the kernel is pinned to 1 on [0, 1])");
        }
        return constant_one();
    }
    if (kind != "step" || rest.empty()) throw std::invalid_argument(grammar);

    ChiSpec out;
    size_t pos = 0;
    while (pos <= rest.size()) {
        size_t comma = rest.find(',', pos);
        std::string pair = rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos);
        auto sep = pair.find(':');
        if (sep == std::string::npos) throw std::invalid_argument(grammar);
        out.breakpoints.push_back(parse_number(pair.substr(0, sep), "breakpoint"));
        out.values.push_back(parse_number(pair.substr(sep + 1), "value"));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    validate(out);
    return out;
}

std::string ChiSpec::to_string() const {
    if (breakpoints.empty()) return "const:1";
    std::string out = "step:";
    char buf[64];
    for (size_t i = 0; i < breakpoints.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.15g:%.15g", breakpoints[i], values[i]);
        if (i) out += ',';
        out += buf;
    }
    return out;
}

double SigmaSolution::at(double u) const {
    if (u < 0.0 || u > u_max() + kGridSlack) {
        throw std::domain_error("sigma: u outside the solved range");
    }
    double pos = std::min(u / step, static_cast<double>(values.size() - 1));
    auto j = static_cast<size_t>(pos);
    if (j + 1 >= values.size()) return values.back();
    double frac = pos - static_cast<double>(j);
    return values[j] + frac * (values[j + 1] - values[j]);
}

SigmaSolution solve_sigma(const ChiSpec& chi, double u_max, double step) {
    validate(chi);
    if (!(step > 0.0) || step > 1.0 / 64.0) {
        throw std::domain_error("solve_sigma: step must lie in (0, 1/64]");
    }
    auto per_unit = static_cast<uint64_t>(std::llround(1.0 / step));
    if (std::abs(static_cast<double>(per_unit) * step - 1.0) > kGridSlack) {
        throw std::domain_error("solve_sigma: 1/step must be an integer so u = 1 is a grid point");
    }
    if (!(u_max > 1.0) || u_max > 64.0) {
        throw std::domain_error("solve_sigma: u_max must lie in (1, 64]");
    }

    SigmaSolution sol;
    sol.step = step;
    sol.chi = chi;
    auto n = static_cast<size_t>(std::ceil(u_max / step - kGridSlack));

    // Snap breakpoints to the grid.  Values at jump nodes get the mean of
    // the two one-sided limits; anything else downgrades the trapezoid
    // scheme to first order across the jump.
    std::vector<size_t> break_index(chi.breakpoints.size());
    for (size_t i = 0; i < chi.breakpoints.size(); ++i) {
        double b = chi.breakpoints[i];
        auto idx = static_cast<size_t>(std::llround(b / step));
        if (std::abs(static_cast<double>(idx) * step - b) > kGridSlack) sol.warned = true;
        sol.chi.breakpoints[i] = static_cast<double>(idx) * step;
        break_index[i] = idx;
        if (i > 0 && break_index[i] <= break_index[i - 1]) {
            throw std::invalid_argument("chi: breakpoints collide after grid snapping");
        }
    }

    std::vector<double> chi_node(n + 1);
    for (size_t m = 0; m <= n; ++m) {
        double left = 1.0, here = 1.0;
        for (size_t i = 0; i < break_index.size(); ++i) {
            if (m > break_index[i]) left = sol.chi.values[i];
            if (m >= break_index[i]) here = sol.chi.values[i];
        }
        chi_node[m] = m > 0 && left != here ? 0.5 * (left + here) : here;
    }

    sol.values.assign(n + 1, 1.0);
    // sigma = 1 up to u = 1: chi = 1 on [0, u] there, so the equation reads
    // u sigma(u) = integral of 1.  March beyond that point.
    for (size_t j = per_unit + 1; j <= n; ++j) {
        KahanSum s;
        s.add(0.5 * chi_node[j]);  // t = 0 node, sigma(0) = 1
        for (size_t i = 1; i < j; ++i) s.add(sol.values[i] * chi_node[j - i]);
        double u = static_cast<double>(j) * step;
        // The t = u node contributes step/2 * sigma(u) since chi(0) = 1.
        sol.values[j] = step * s.value() / (u - 0.5 * step);
    }
    return sol;
}

SigmaExtremum sigma_min(const SigmaSolution& sol) {
    size_t m = 0;
    for (size_t j = 1; j < sol.values.size(); ++j) {
        if (sol.values[j] < sol.values[m]) m = j;
    }
    SigmaExtremum out;
    out.value = sol.values[m];
    out.argmin = static_cast<double>(m) * sol.step;
    if (m > 0 && m + 1 < sol.values.size()) {
        double lo = sol.values[m - 1], mid = sol.values[m], hi = sol.values[m + 1];
        double curvature = lo - 2.0 * mid + hi;
        if (curvature > 0.0) {
            double offset = std::clamp(0.5 * (lo - hi) / curvature, -0.5, 0.5);
            out.argmin += offset * sol.step;
            out.value = mid - 0.25 * (lo - hi) * offset;
        }
    }
    return out;
}

double sigma_average(const SigmaSolution& sol, double u) {
    if (!(u > 0.0) || u > sol.u_max() + kGridSlack) {
        throw std::domain_error("sigma_average: need 0 < u <= u_max");
    }
    u = std::min(u, sol.u_max());
    auto j = std::min(static_cast<size_t>(u / sol.step), sol.values.size() - 1);
    KahanSum s;
    if (j >= 1) {
        s.add(0.5 * sol.values[0]);
        for (size_t i = 1; i < j; ++i) s.add(sol.values[i]);
        s.add(0.5 * sol.values[j]);
    }
    double integral = sol.step * s.value();
    double grid_u = static_cast<double>(j) * sol.step;
    if (u > grid_u) {
        double w = u - grid_u;
        integral += w * 0.5 * (sol.at(grid_u) + sol.at(u));
    }
    return integral / u;
}

double delta1_quadrature(double tol) {
    if (tol < 1e-12) throw std::domain_error("delta1_quadrature: tol must be >= 1e-12");
    double root_e = std::sqrt(std::exp(1.0));
    double integral =
        adaptive_simpson([](double t) { return std::log(t) / (t + 1.0); }, 1.0, root_e, tol / 8.0);
    return 1.0 - 2.0 * std::log1p(root_e) + 4.0 * integral;
}

}  // namespace multspec

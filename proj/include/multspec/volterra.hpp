#pragma once

#include <string>
#include <vector>

namespace multspec {

// Piecewise-constant right-continuous kernel: 1 on [0, b1), values[i] on
// [b_i, b_{i+1}).  The leading segment is pinned to 1, so an empty
// breakpoint list is the constant-one kernel.
struct ChiSpec {
    std::vector<double> breakpoints;  // strictly increasing, first >= 1
    std::vector<double> values;       // same length, each in [-1, 1]

    double at(double t) const;

    static ChiSpec constant_one();
    // Grammar: "const:1" or "step:<b>:<v>[,<b>:<v>...]".  Malformed text or
    // out-of-range numbers throw std::invalid_argument naming the grammar.
    static ChiSpec parse(const std::string& text);
    std::string to_string() const;
};

struct SigmaSolution {
    double step = 0.0;
    std::vector<double> values;  // sigma at 0, step, 2*step, ...
    ChiSpec chi;                 // breakpoints as actually used (post-snap)
    bool warned = false;         // true if a breakpoint had to be moved to the grid

    double u_max() const { return step * static_cast<double>(values.size() - 1); }
    double at(double u) const;  // linear interpolation, 0 <= u <= u_max
};

// Forward-marching trapezoid scheme for u sigma(u) = integral_0^u
// sigma(t) chi(u-t) dt.  sigma = 1 on [0, 1] exactly (the equation forces
// it there); each later grid value solves the trapezoid-discretized
// equation explicitly since chi(0) = 1.  Global error O(step^2).
// Requires step <= 1/64 with 1/step an integer (within 1e-9), and
// 1 < u_max <= 64; u_max is rounded up to the grid.
SigmaSolution solve_sigma(const ChiSpec& chi, double u_max, double step);

struct SigmaExtremum {
    double value = 0.0;
    double argmin = 0.0;
};

// Smallest grid value, refined by a parabola through the neighboring
// points when the curvature supports it.
SigmaExtremum sigma_min(const SigmaSolution& sol);

// (1/u) integral_0^u sigma(t) dt over the stored grid, 0 < u <= u_max.
double sigma_average(const SigmaSolution& sol, double u);

// 1 - 2 log(1 + sqrt(e)) + 4 * integral_1^sqrt(e) log(t)/(t+1) dt by
// adaptive quadrature; tol >= 1e-12.
double delta1_quadrature(double tol = 1e-10);

}  // namespace multspec

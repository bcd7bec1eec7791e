// Small numerical toolbox: bracketing root scans, bisection, golden-section
// minimisation, Gauss-Legendre nodes, trapezoid rules, least-squares line
// fits and an adaptive Cash-Karp RK45 for scalar ODEs.  These are pinned to
// the exact algorithmic recipes the rest of the library documents (scan
// resolutions, tolerances), which is why they live here instead of behind a
// third-party API.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "sit/core.hpp"

namespace sit::num {

// Brackets of sign changes of f over [a,b] sampled at n+1 uniform points.
// Nodes that are exactly zero are returned as degenerate brackets.
template <class F>
std::vector<std::pair<double, double>> sign_change_brackets(F&& f, double a, double b, int n) {
    std::vector<std::pair<double, double>> out;
    double prev_x = a;
    double prev_f = f(a);
    for (int i = 1; i <= n; ++i) {
        const double x = a + (b - a) * static_cast<double>(i) / n;
        const double fx = f(x);
        if (prev_f == 0.0)
            out.emplace_back(prev_x, prev_x);
        else if (std::isfinite(prev_f) && std::isfinite(fx) && prev_f * fx < 0.0)
            out.emplace_back(prev_x, x);
        prev_x = x;
        prev_f = fx;
    }
    if (prev_f == 0.0) out.emplace_back(prev_x, prev_x);
    return out;
}

// Bisection to |b-a| <= tol; requires f(a)*f(b) <= 0.
template <class F>
double bisect(F&& f, double a, double b, double tol) {
    double fa = f(a);
    if (fa == 0.0) return a;
    double fb = f(b);
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw numerical_error("bisect: interval does not bracket a root");
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if (fa * fm < 0.0) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

// Golden-section minimisation of a unimodal f on [a,b] to |b-a| <= tol.
template <class F>
double golden_min(F&& f, double a, double b, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// Gauss-Legendre nodes and weights on [a,b] (Newton iteration on P_n).
struct quadrature_rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
quadrature_rule gauss_legendre(int n, double a, double b);

double trapezoid(const std::vector<double>& x, const std::vector<double>& y);
std::vector<double> cumulative_trapezoid(const std::vector<double>& x, const std::vector<double>& y);

struct linear_fit_result {
    double slope;
    double intercept;
    double residual_rms;
};
linear_fit_result fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Vertex offset of the parabola through (-h,ym),(0,y0),(+h,yp); result in
// the same units as h and clamped to [-h,h].
double parabolic_peak_offset(double h, double ym, double y0, double yp);

// Adaptive Cash-Karp RK45 for a scalar ODE y' = f(x,y).  Returns n_out+1
// samples at uniform x including both endpoints.
std::vector<std::pair<double, double>> integrate_ode45(
    const std::function<double(double, double)>& f, double y0, double x0, double x1,
    int n_out, double rel_tol = 1e-12, double abs_tol = 1e-14);

// Runs f(i) for i in [0,n) on a small thread pool; each index is handled
// exactly once, so writes to per-index slots are race-free and results are
// deterministic regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace sit::num

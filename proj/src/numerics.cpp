#include "sit/numerics.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <mutex>
#include <thread>

namespace sit::num {

quadrature_rule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw validation_error("gauss_legendre: n must be >= 1");
    quadrature_rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on the recurrence for P_n.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double x_lo = 0.5 * (b - a) * (-z) + 0.5 * (a + b);
        const double x_hi = 0.5 * (b - a) * (+z) + 0.5 * (a + b);
        const double w = (b - a) / ((1.0 - z * z) * pp * pp);
        rule.nodes[i] = x_lo;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x_hi;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw validation_error("trapezoid: need matching arrays of length >= 2");
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return acc;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw validation_error("cumulative_trapezoid: need matching arrays of length >= 2");
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return out;
}

linear_fit_result fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw validation_error("fit_line: need matching arrays of length >= 2");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw numerical_error("fit_line: degenerate abscissae");
    linear_fit_result r{};
    r.slope = (n * sxy - sx * sy) / denom;
    r.intercept = (sy - r.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (r.slope * x[i] + r.intercept);
        ss += e * e;
    }
    r.residual_rms = std::sqrt(ss / n);
    return r;
}

double parabolic_peak_offset(double h, double ym, double y0, double yp) {
    const double denom = ym - 2.0 * y0 + yp;
    if (denom == 0.0) return 0.0;
    const double off = 0.5 * h * (ym - yp) / denom;
    return std::clamp(off, -h, h);
}

std::vector<std::pair<double, double>> integrate_ode45(
    const std::function<double(double, double)>& f, double y0, double x0, double x1,
    int n_out, double rel_tol, double abs_tol) {
    if (n_out < 1) throw validation_error("integrate_ode45: n_out must be >= 1");
    if (!(x1 > x0)) throw validation_error("integrate_ode45: need x1 > x0");

    // Cash-Karp tableau.
    static constexpr std::array<double, 6> c{0.0, 1.0 / 5, 3.0 / 10, 3.0 / 5, 1.0, 7.0 / 8};
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 3.0 / 10, a42 = -9.0 / 10, a43 = 6.0 / 5;
    static constexpr double a51 = -11.0 / 54, a52 = 5.0 / 2, a53 = -70.0 / 27, a54 = 35.0 / 27;
    static constexpr double a61 = 1631.0 / 55296, a62 = 175.0 / 512, a63 = 575.0 / 13824,
                            a64 = 44275.0 / 110592, a65 = 253.0 / 4096;
    static constexpr std::array<double, 6> b5{37.0 / 378, 0.0, 250.0 / 621, 125.0 / 594, 0.0, 512.0 / 1771};
    static constexpr std::array<double, 6> b4{2825.0 / 27648, 0.0, 18575.0 / 48384, 13525.0 / 55296,
                                              277.0 / 14336, 1.0 / 4};

    std::vector<std::pair<double, double>> out;
    out.reserve(n_out + 1);
    out.emplace_back(x0, y0);

    double x = x0;
    double y = y0;
    double h = (x1 - x0) / (8.0 * n_out);
    for (int seg = 1; seg <= n_out; ++seg) {
        const double x_target = x0 + (x1 - x0) * static_cast<double>(seg) / n_out;
        while (x < x_target) {
            bool clipped = false;
            if (x + h >= x_target) {
                h = x_target - x;
                clipped = true;
            }
            const double k1 = f(x + c[0] * h, y);
            const double k2 = f(x + c[1] * h, y + h * a21 * k1);
            const double k3 = f(x + c[2] * h, y + h * (a31 * k1 + a32 * k2));
            const double k4 = f(x + c[3] * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
            const double k5 = f(x + c[4] * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const double k6 = f(x + c[5] * h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const double y5 = y + h * (b5[0] * k1 + b5[2] * k3 + b5[3] * k4 + b5[5] * k6);
            const double y4 = y + h * (b4[0] * k1 + b4[2] * k3 + b4[3] * k4 + b4[4] * k5 + b4[5] * k6);
            const double scale = abs_tol + rel_tol * std::max(std::abs(y), std::abs(y5));
            const double err = std::abs(y5 - y4) / scale;
            if (err <= 1.0) {
                x += h;
                y = y5;
                const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                if (!clipped) h *= std::clamp(grow, 0.2, 5.0);
            } else {
                h *= std::clamp(0.9 * std::pow(err, -0.25), 0.1, 0.9);
                if (!(h > 0.0) || x + h == x)
                    throw numerical_error("integrate_ode45: step size underflow");
            }
        }
        out.emplace_back(x_target, y);
    }
    return out;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
    if (n == 0) return;
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(hw, n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    // The first exception thrown by any worker is rethrown on the calling
    // thread after the pool drains; later workers keep running (each index
    // stays handled at most once).
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) f(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace sit::num

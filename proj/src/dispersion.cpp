#include "sit/dispersion.hpp"

#include <cmath>
#include <limits>

#include "sit/numerics.hpp"

namespace sit {

namespace {

constexpr double scan_hi = 5.0;
constexpr int scan_points = 2000;
constexpr double root_tol = 1e-10;

double velocity_denominator(const medium_params& m, const pulse_params& p, double avg_f) {
    return p.x - m.nu * m.s0 * avg_f * p.tau0 * p.tau0;
}

// ln(1/y)/(1-y), series branch across y = 1 (mirrors averages_analytic).
double log_ratio_factor(double y) {
    const double e = y - 1.0;
    if (std::abs(e) < 1e-6) return 1.0 + e * (-0.5 + e * (1.0 / 3.0 - 0.25 * e));
    return -std::log1p(e) / (1.0 - y);
}

std::optional<double> broadened_k_literal(const medium_params& m, const pulse_params& p) {
    const double tau_star = *m.omega0_tau_star;
    const double y = p.tau0 / tau_star;
    // x^2 + (4 s0 nu tau*/pi) y^4 ln(y)/(y^2-1); note ln(y)/(y^2-1) =
    // [ln(y)/(y-1)]/(y+1) and is positive for all y > 0.
    const double tail = (4.0 * m.s0 * m.nu * tau_star / M_PI) * std::pow(y, 4) *
                        log_ratio_factor(y) / (1.0 + y);
    const double rad = p.x * p.x + tail;
    if (rad < 0.0) return std::nullopt;
    return std::sqrt(rad);
}

double radicand_sharp_absorber(double x, double nu, double tau0) {
    medium_params m;
    m.nu = nu;
    m.s0 = -1.0;
    pulse_params p{x, tau0};
    return dispersion_radicand(m, p, line_averages(m, p));
}

}  // namespace

lineshape_averages line_averages(const medium_params& medium, const pulse_params& pulse) {
    validate(medium, pulse);
    if (medium.lineshape == lineshape_kind::sharp_line)
        return sharp_line_averages(1.0 - pulse.x, pulse.tau0);
    return averages_analytic(pulse.tau0, *medium.omega0_tau_star);
}

double gamma_from_soliton(const medium_params& medium, const pulse_params& pulse, double avg_f) {
    return medium.nu * medium.s0 * avg_f * pulse.tau0 * pulse.tau0 / pulse.x;
}

double dispersion_radicand(const medium_params& medium, const pulse_params& pulse,
                           const lineshape_averages& avg) {
    return pulse.x * pulse.x -
           2.0 * avg.delta_tilde * medium.nu * medium.s0 * avg.avg_f * pulse.tau0 * pulse.tau0;
}

std::optional<double> k_from_averages(const medium_params& medium, const pulse_params& pulse,
                                      const lineshape_averages& avg) {
    const double rad = dispersion_radicand(medium, pulse, avg);
    if (rad < 0.0) return std::nullopt;
    return std::sqrt(rad);
}

std::optional<double> v_from_averages(const medium_params& medium, const pulse_params& pulse,
                                      const lineshape_averages& avg) {
    const auto k = k_from_averages(medium, pulse, avg);
    if (!k) return std::nullopt;
    const double denom = velocity_denominator(medium, pulse, avg.avg_f);
    if (denom == 0.0) return std::nullopt;
    return *k / denom;
}

std::optional<double> sharp_line_k(const medium_params& medium, const pulse_params& pulse) {
    validate(medium, pulse);
    return k_from_averages(medium, pulse, sharp_line_averages(1.0 - pulse.x, pulse.tau0));
}

std::optional<double> sharp_line_v(const medium_params& medium, const pulse_params& pulse) {
    validate(medium, pulse);
    return v_from_averages(medium, pulse, sharp_line_averages(1.0 - pulse.x, pulse.tau0));
}

std::optional<double> broadened_k(const medium_params& medium, const pulse_params& pulse,
                                  broadened_form form) {
    validate(medium, pulse);
    if (medium.lineshape != lineshape_kind::lorentzian)
        throw validation_error("broadened_k: medium is not lorentzian");
    if (form == broadened_form::literal_y4) return broadened_k_literal(medium, pulse);
    return k_from_averages(medium, pulse, averages_analytic(pulse.tau0, *medium.omega0_tau_star));
}

std::optional<double> broadened_v(const medium_params& medium, const pulse_params& pulse,
                                  broadened_form form) {
    validate(medium, pulse);
    if (medium.lineshape != lineshape_kind::lorentzian)
        throw validation_error("broadened_v: medium is not lorentzian");
    const auto k = broadened_k(medium, pulse, form);
    if (!k) return std::nullopt;
    const auto avg = averages_analytic(pulse.tau0, *medium.omega0_tau_star);
    const double denom = velocity_denominator(medium, pulse, avg.avg_f);
    if (denom == 0.0) return std::nullopt;
    return *k / denom;
}

alt_dispersion_roots alt_dispersion_k(double x, double v, double delta_tilde) {
    if (!(x > 0.0)) throw validation_error("alt_dispersion_k: x must be > 0");
    if (v == 0.0) throw validation_error("alt_dispersion_k: v must be nonzero");
    alt_dispersion_roots out;
    const double dv = delta_tilde / v;
    const double disc = dv * dv - 2.0 * x * delta_tilde + x * x;
    if (disc < 0.0) return out;
    out.exists = true;
    const double s = std::sqrt(disc);
    out.k_plus = dv + s;
    out.k_minus = dv - s;
    return out;
}

bool existence_condition(double k, double x, double v, double s0) {
    if (v == 0.0) throw validation_error("existence_condition: v must be nonzero");
    return (1.0 - k / (x * v)) * s0 > 0.0;
}

std::optional<double> critical_width(double x, double nu) {
    if (!(nu > 0.0)) throw validation_error("critical_width: nu must be > 0");
    if (!(x > 0.0)) throw validation_error("critical_width: x must be > 0");
    const double xm = x - 1.0;
    const double denom = 2.0 * nu * xm - xm * xm * x * x;
    if (denom <= 0.0) return std::nullopt;  // no finite stopping width at this x
    return x / std::sqrt(denom);
}

critical_width_result min_critical_width(double nu) {
    if (!(nu > 0.0)) throw validation_error("min_critical_width: nu must be > 0");
    // Domain upper edge: the real root of x^3 - x^2 - 2 nu = 0, where the
    // tau0 -> inf wavevector first fails to vanish.
    auto cubic = [nu](double x) { return x * x * x - x * x - 2.0 * nu; };
    const double hi_bracket = std::max(scan_hi, 2.0 + std::cbrt(2.0 * nu));
    const double x_cubic = num::bisect(cubic, 1.0, hi_bracket, root_tol);
    auto width = [nu](double x) {
        const auto t = critical_width(x, nu);
        return t ? *t : std::numeric_limits<double>::infinity();
    };
    const double pad = 1e-9;
    critical_width_result out;
    out.x_domain_lo = 1.0;
    out.x_domain_hi = x_cubic;
    out.x_at_min = num::golden_min(width, 1.0 + pad, x_cubic - pad, 1e-8);
    out.tau0_crit = width(out.x_at_min);
    return out;
}

stopping_roots_result stopping_roots(double nu, double tau0) {
    if (!(nu > 0.0) || !(tau0 > 0.0))
        throw validation_error("stopping_roots: nu and tau0 must be > 0");
    stopping_roots_result out;

    auto rad = [&](double x) { return radicand_sharp_absorber(x, nu, tau0); };
    const double lo = scan_hi / scan_points;
    auto brackets = num::sign_change_brackets(rad, lo, scan_hi, scan_points - 1);
    std::vector<double> roots;
    for (const auto& [a, b] : brackets)
        roots.push_back(a == b ? a : num::bisect(rad, a, b, root_tol));
    if (!roots.empty()) out.finite_width.x1 = roots.front();
    if (roots.size() > 1) out.finite_width.x2 = roots[1];
    out.finite_width.description =
        "zeros of the sharp-line absorber K at tau0=" + std::to_string(tau0) + " (" +
        std::to_string(roots.size()) + " found; K^2 < 0 between x1 and x2)";

    auto cubic = [nu](double x) { return x * x * x - x * x - 2.0 * nu; };
    const double hi_bracket = std::max(scan_hi, 2.0 + std::cbrt(2.0 * nu));
    auto cubic_brackets = num::sign_change_brackets(cubic, lo, hi_bracket, scan_points - 1);
    std::vector<double> cubic_roots;
    for (const auto& [a, b] : cubic_brackets)
        cubic_roots.push_back(a == b ? a : num::bisect(cubic, a, b, root_tol));
    if (!cubic_roots.empty()) out.infinite_width.x1 = cubic_roots.front();
    if (cubic_roots.size() > 1) out.infinite_width.x2 = cubic_roots[1];
    out.infinite_width.description =
        "real roots of x^3 - x^2 - 2*nu = 0 (stopping threshold in the infinite-width limit)";
    return out;
}

std::optional<double> superluminal_threshold(const medium_params& medium, double tau0) {
    if (!(tau0 > 0.0)) throw validation_error("superluminal_threshold: tau0 must be > 0");
    medium_params amp = medium;
    amp.s0 = 1.0;  // threshold is defined for the amplifying medium
    auto v_minus_1 = [&](double x) -> double {
        pulse_params p{x, tau0};
        const auto v = medium.lineshape == lineshape_kind::sharp_line
                           ? sharp_line_v(amp, p)
                           : broadened_v(amp, p, broadened_form::canonical);
        return v ? *v - 1.0 : std::numeric_limits<double>::quiet_NaN();
    };
    const double lo = scan_hi / scan_points;
    auto brackets = num::sign_change_brackets(v_minus_1, lo, scan_hi, scan_points - 1);
    for (const auto& [a, b] : brackets) {
        const double x_root = a == b ? a : num::bisect(v_minus_1, a, b, root_tol);
        // A genuine V = 1 crossing, not the velocity pole (where V-1 blows up).
        if (std::abs(v_minus_1(x_root)) < 1e-6) return x_root;
    }
    return std::nullopt;
}

dispersion_solution solve_dispersion(const medium_params& medium, const pulse_params& pulse,
                                     broadened_form form) {
    validate(medium, pulse);
    dispersion_solution sol;
    const auto avg = line_averages(medium, pulse);
    const auto k = medium.lineshape == lineshape_kind::lorentzian && form == broadened_form::literal_y4
                       ? broadened_k_literal(medium, pulse)
                       : k_from_averages(medium, pulse, avg);
    if (!k) {
        sol.failure = "no propagating carrier: K^2 < 0";
        return sol;
    }
    const double denom = velocity_denominator(medium, pulse, avg.avg_f);
    if (denom == 0.0) {
        sol.failure = "velocity pole: x - nu*s0*<F>*tau0^2 = 0";
        return sol;
    }
    sol.exists = true;
    sol.k_dimless = *k;
    sol.v_dimless = *k / denom;
    sol.gamma_factor = gamma_from_soliton(medium, pulse, avg.avg_f);
    sol.g_factor = (pulse.x * pulse.x - *k * *k) / (2.0 * pulse.x);
    sol.regime = classify_regime(sol.v_dimless);
    return sol;
}

}  // namespace sit

#include "sit/lineshape.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

namespace sit {

namespace {

// ln(1/y)/(1-y), stable across the removable singularity at y = 1.
double log_ratio_factor(double y) {
    const double e = y - 1.0;
    if (std::abs(e) < 1e-6) {
        // ln(1/y)/(1-y) = 1 - e/2 + e^2/3 - e^3/4 + ...
        return 1.0 + e * (-0.5 + e * (1.0 / 3.0 - 0.25 * e));
    }
    return -std::log1p(e) / (1.0 - y);
}

double quadrature_00_to_inf(const std::function<double(double)>& f, double tau_star,
                            double rel_tol, const char* what) {
    // u = delta*tau*/(1 + delta*tau*) maps [0, inf) to [0, 1).
    auto mapped = [&](double u) {
        if (u >= 1.0) return 0.0;
        const double one_m = 1.0 - u;
        const double delta = u / (tau_star * one_m);
        const double jacobian = 1.0 / (tau_star * one_m * one_m);
        return f(delta) * jacobian;
    };
    using rule = boost::math::quadrature::gauss_kronrod<double, 15>;
    double error = 0.0, l1 = 0.0;
    const double value = rule::integrate(mapped, 0.0, 1.0, 15, rel_tol, &error, &l1);
    if (l1 > 0.0 && error > rel_tol * l1 * 10.0) {
        std::ostringstream msg;
        msg << what << ": quadrature did not reach rel_tol=" << rel_tol
            << " (achieved error estimate " << error / l1 << ")";
        throw numerical_error(msg.str());
    }
    return value;
}

}  // namespace

double lorentzian_g(double delta, double tau_star) {
    if (!(tau_star > 0.0)) throw validation_error("lorentzian_g: tau_star must be > 0");
    const double dt = delta * tau_star;
    return (2.0 * tau_star / M_PI) / (1.0 + dt * dt);
}

double spectral_response_f(double delta, double tau_p) {
    if (!(tau_p > 0.0)) throw validation_error("spectral_response_f: tau_p must be > 0");
    const double dt = delta * tau_p;
    return 1.0 / (1.0 + dt * dt);
}

lineshape_averages averages_analytic(double tau_p, double tau_star) {
    if (!(tau_p > 0.0) || !(tau_star > 0.0))
        throw validation_error("averages_analytic: tau_p and tau_star must be > 0");
    const double y = tau_p / tau_star;
    lineshape_averages out;
    out.avg_f = 1.0 / (1.0 + y);
    out.delta_tilde = (2.0 / (M_PI * tau_star)) * log_ratio_factor(y);
    out.avg_delta_f = out.delta_tilde * out.avg_f;
    return out;
}

lineshape_averages averages_quadrature(double tau_p, double tau_star, double rel_tol) {
    if (!(tau_p > 0.0) || !(tau_star > 0.0))
        throw validation_error("averages_quadrature: tau_p and tau_star must be > 0");
    auto gf = [&](double d) { return lorentzian_g(d, tau_star) * spectral_response_f(d, tau_p); };
    auto gdf = [&](double d) { return d * lorentzian_g(d, tau_star) * spectral_response_f(d, tau_p); };
    lineshape_averages out;
    out.avg_f = quadrature_00_to_inf(gf, tau_star, rel_tol, "averages_quadrature <F>");
    const double avg_df = quadrature_00_to_inf(gdf, tau_star, rel_tol, "averages_quadrature <dF>");
    out.delta_tilde = avg_df / out.avg_f;
    out.avg_delta_f = out.delta_tilde * out.avg_f;
    return out;
}

lineshape_averages sharp_line_averages(double delta, double tau_p) {
    lineshape_averages out;
    out.avg_f = spectral_response_f(delta, tau_p);
    out.delta_tilde = delta;
    out.avg_delta_f = out.delta_tilde * out.avg_f;
    return out;
}

double lorentzian_average(const std::function<double(double)>& f, double tau_star, double rel_tol) {
    if (!(tau_star > 0.0)) throw validation_error("lorentzian_average: tau_star must be > 0");
    auto gf = [&](double d) { return lorentzian_g(d, tau_star) * f(d); };
    return quadrature_00_to_inf(gf, tau_star, rel_tol, "lorentzian_average");
}

}  // namespace sit

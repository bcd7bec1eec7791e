#include "sit/soliton.hpp"

#include <cmath>

#include "sit/numerics.hpp"

namespace sit {

soliton_profile build_soliton(const medium_params& medium, const pulse_params& pulse,
                              const dispersion_solution& dispersion, soliton_grid grid) {
    validate(medium, pulse);
    if (!dispersion.exists)
        throw validation_error("build_soliton: dispersion solution does not exist");
    if (!(dispersion.gamma_factor * medium.s0 > 0.0))
        throw numerical_error("build_soliton: amplitude radicand negative: no soliton");
    if (grid.n < 2) throw validation_error("build_soliton: grid.n must be >= 2");

    soliton_profile out;
    out.tau_p = pulse.tau0;
    out.e0 = soliton_peak_field(pulse.tau0);
    out.tau.resize(grid.n);
    out.envelope.resize(grid.n);
    const double half = grid.half_width * out.tau_p;
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double t = -half + 2.0 * half * static_cast<double>(i) / (grid.n - 1);
        out.tau[i] = t;
        out.envelope[i] = out.e0 / std::cosh(t / out.tau_p);
    }
    out.area = 0.5 * num::trapezoid(out.tau, out.envelope);
    return out;
}

double peak_amplitude_from_inversion(const medium_params& medium, const pulse_params& pulse,
                                     double gamma_factor, double avg_f) {
    const double gamma = coupling_gamma(medium.nu);
    const double rad = 4.0 * gamma * medium.s0 * avg_f / (pulse.x * gamma_factor);
    if (!(rad > 0.0))
        throw numerical_error("peak_amplitude_from_inversion: amplitude radicand negative: no soliton");
    return std::sqrt(rad);
}

std::vector<double> sz_profile(const soliton_profile& profile, const medium_params& medium,
                               const pulse_params& pulse, double gamma_factor, double f_ratio) {
    std::vector<double> out(profile.envelope.size());
    const double coeff = pulse.x * gamma_factor / (8.0 * medium.nu) * f_ratio;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = medium.s0 - coeff * profile.envelope[i] * profile.envelope[i];
    return out;
}

bloch_trajectory bloch_angle_trajectory(const soliton_profile& profile, double s0) {
    bloch_trajectory out;
    out.theta = num::cumulative_trapezoid(profile.tau, profile.envelope);
    for (auto& th : out.theta) th *= -0.5;  // theta_dot = -(kappa/2) E
    out.sy.resize(out.theta.size());
    out.sz.resize(out.theta.size());
    for (std::size_t i = 0; i < out.theta.size(); ++i) {
        out.sy[i] = -s0 * std::sin(out.theta[i]);
        out.sz[i] = s0 * std::cos(out.theta[i]);
    }
    return out;
}

}  // namespace sit

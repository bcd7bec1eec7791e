// Hyperbolic-secant soliton profile construction and the associated Bloch
// variables: inversion profile, Bloch rotation angle, and the 2*pi pulse
// area.  The area convention is the Bloch-angle magnitude theta =
// (kappa/2) * integral E dt, under which the sech soliton carries exactly
// 2*pi.

#pragma once

#include <cstddef>
#include <vector>

#include "sit/core.hpp"

namespace sit {

struct soliton_grid {
    double half_width = 20.0;  // in units of tau_p
    std::size_t n = 4096;      // sample count
};

struct soliton_profile {
    std::vector<double> tau;       // retarded-time grid, units 1/omega0
    std::vector<double> envelope;  // kappa*E/omega0 samples
    double e0 = 0.0;               // peak amplitude 4/tau_p
    double tau_p = 0.0;            // width (== tau0 in internal units)
    double area = 0.0;             // (kappa/2) * integral E dtau
};

// Samples E(tau) = e0 * sech(tau/tau_p) on a symmetric uniform grid.
// Requires an existing dispersion solution whose soliton amplitude radicand
// is positive (gamma_factor * s0 > 0).
soliton_profile build_soliton(const medium_params& medium, const pulse_params& pulse,
                              const dispersion_solution& dispersion, soliton_grid grid = {});

// Peak amplitude from the inversion form sqrt(4*gamma*s0*<F>/(kappa*omega*
// Gamma)); algebraically identical to 4/tau_p when Gamma takes its soliton
// value, kept as an independent route for consistency tests.
double peak_amplitude_from_inversion(const medium_params& medium, const pulse_params& pulse,
                                     double gamma_factor, double avg_f);

// Inversion along the pulse for an atom with spectral response ratio
// f_ratio = F(delta)/<F>:
//   S_z(tau) = s0 - (x*Gamma/(8*nu)) * f_ratio * E(tau)^2.
std::vector<double> sz_profile(const soliton_profile& profile, const medium_params& medium,
                               const pulse_params& pulse, double gamma_factor, double f_ratio);

struct bloch_trajectory {
    std::vector<double> theta;  // theta(tau) = -(kappa/2) int_-inf^tau E
    std::vector<double> sy;     // -s0 * sin(theta)
    std::vector<double> sz;     //  s0 * cos(theta)
};

// Resonant-atom Bloch rotation driven by the profile (sine-Gordon pendulum
// closed form).
bloch_trajectory bloch_angle_trajectory(const soliton_profile& profile, double s0);

}  // namespace sit

// Inhomogeneous line shape and the spectral averages that enter the
// dispersion law.
//
// The broadened medium uses a Lorentzian line G(delta) = (2 tau*/pi) /
// (1 + delta^2 tau*^2), normalised to 1 on the one-sided domain [0, inf),
// and the spectral response of the hyperbolic-secant pulse factorises as
// F(delta) = 1/(1 + delta^2 tau_p^2).  Two routes to the averages <F> and
// <delta F> are provided: the closed forms and an independent adaptive
// quadrature, so the closed forms are never the only witness for their own
// values.

#pragma once

#include <functional>

#include "sit/core.hpp"

namespace sit {

// The invariant delta_tilde * avg_f == avg_delta_f holds exactly: both
// constructions derive the three fields from the single pair (avg_f,
// delta_tilde).
struct lineshape_averages {
    double avg_f = 0.0;        // <F> in (0, 1]
    double avg_delta_f = 0.0;  // <delta F>, units of omega0
    double delta_tilde = 0.0;  // effective detuning <delta F>/<F>
};

// Lorentzian line shape; integrates to 1 over [0, inf).
double lorentzian_g(double delta, double tau_star);

// Spectral response of a sech pulse of width tau_p.
double spectral_response_f(double delta, double tau_p);

// Closed forms: <F> = 1/(1+y), delta_tilde = (2/(pi tau*)) ln(tau*/tau_p)/(1-y)
// with y = tau_p/tau*.  The y = 1 point is a removable singularity
// (delta_tilde -> 2/(pi tau*)); a series branch is used for |y-1| < 1e-6.
lineshape_averages averages_analytic(double tau_p, double tau_star);

// Independent oracle: adaptive Gauss-Kronrod on [0, inf) mapped through
// u = delta*tau*/(1 + delta*tau*).  Throws numerical_error (reporting the
// achieved error estimate) if the requested tolerance is not met.
lineshape_averages averages_quadrature(double tau_p, double tau_star, double rel_tol = 1e-10);

// Sharp-line (delta line shape) limit: <F> = F(delta), delta_tilde = delta.
lineshape_averages sharp_line_averages(double delta, double tau_p);

// G-weighted average of an arbitrary function over [0, inf); used by tests
// (normalisation <1> = 1) and by ensemble cross-checks.
double lorentzian_average(const std::function<double(double)>& f, double tau_star,
                          double rel_tol = 1e-10);

}  // namespace sit

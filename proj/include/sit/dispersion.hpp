// Closed-form dispersion law of the sech soliton: carrier wavevector K(x)
// and lab-frame velocity V(x) for sharp-line and Lorentzian-broadened
// two-level media, together with the critical-width / stopping machinery.
//
// Everything follows from the resonance condition delta_tilde - G/Gamma = 0
// with G = (x^2 - K^2)/(2x) and the soliton value Gamma = nu*s0*<F>*tau0^2/x,
// which gives
//
//     K^2 = x^2 - 2*delta_tilde*nu*s0*<F>*tau0^2,
//     V   = K / (x - nu*s0*<F>*tau0^2).

#pragma once

#include <optional>
#include <string>

#include "sit/core.hpp"
#include "sit/lineshape.hpp"

namespace sit {

// Which closed form the broadened-medium wavevector uses.  canonical is the
// direct substitution of the Lorentzian averages into the radicand above
// (y^2 scaling); literal_y4 is the alternate printed variant with a y^4
// factor and opposite sign, kept selectable for figure-replication studies.
// The two genuinely disagree; canonical is the one the oracles cross-check.
enum class broadened_form { canonical, literal_y4 };

// Averages entering the dispersion law for this medium/pulse: sharp line
// evaluates at delta = 1 - x, lorentzian uses the closed-form averages.
lineshape_averages line_averages(const medium_params& medium, const pulse_params& pulse);

// Gamma = nu*s0*<F>*omega0^2*tau_p^2/x (internal units).
double gamma_from_soliton(const medium_params& medium, const pulse_params& pulse, double avg_f);

// Radicand x^2 - 2*delta_tilde*nu*s0*<F>*tau0^2 from explicit averages;
// exposed so independent (quadrature) averages can drive the same formula.
double dispersion_radicand(const medium_params& medium, const pulse_params& pulse,
                           const lineshape_averages& avg);

// K and V from explicit averages; nullopt when the radicand is negative
// (no propagating carrier) or, for the velocity, when K does not exist or
// the denominator vanishes (velocity pole).
std::optional<double> k_from_averages(const medium_params& medium, const pulse_params& pulse,
                                      const lineshape_averages& avg);
std::optional<double> v_from_averages(const medium_params& medium, const pulse_params& pulse,
                                      const lineshape_averages& avg);

std::optional<double> sharp_line_k(const medium_params& medium, const pulse_params& pulse);
std::optional<double> sharp_line_v(const medium_params& medium, const pulse_params& pulse);
std::optional<double> broadened_k(const medium_params& medium, const pulse_params& pulse,
                                  broadened_form form = broadened_form::canonical);
std::optional<double> broadened_v(const medium_params& medium, const pulse_params& pulse,
                                  broadened_form form = broadened_form::canonical);

// Both roots of the quadratic K^2 - (2*delta_tilde/V)K + (2x*delta_tilde -
// x^2) = 0, the alternate (x,V)-parameterised form of the dispersion law.
// Used as a consistency cross-check of K/V pairs from the closed forms.
struct alt_dispersion_roots {
    bool exists = false;
    double k_plus = 0.0;
    double k_minus = 0.0;
};
alt_dispersion_roots alt_dispersion_k(double x, double v, double delta_tilde);

// Soliton existence condition (1 - K/(xV)) * s0 > 0.
bool existence_condition(double k, double x, double v, double s0);

// Critical width on the stopping branch: tau0_crit(x)^2 = x^2 /
// (2*nu*(x-1) - (x-1)^2*x^2).  The denominator is written for the x > 1
// domain where stopping exists; with (1-x) in place of (x-1) it would be
// negative on that whole domain.  nullopt out of domain.
std::optional<double> critical_width(double x, double nu);

struct critical_width_result {
    double x_at_min = 0.0;    // frequency ratio minimising tau0_crit
    double tau0_crit = 0.0;   // the minimal critical width
    double x_domain_lo = 0.0; // stopping domain (x_domain_lo, x_domain_hi)
    double x_domain_hi = 0.0;
};

// Minimum of critical_width over its domain (1, x_cubic) by golden-section
// search to 1e-8 in x.
critical_width_result min_critical_width(double nu);

struct branch_roots {
    std::optional<double> x1;  // smaller root, if any
    std::optional<double> x2;  // larger root, if any
    std::string description;
};

struct stopping_roots_result {
    branch_roots finite_width;    // zeros of sharp-line K at the given tau0, s0 = -1
    branch_roots infinite_width;  // real roots of x^3 - x^2 - 2*nu = 0 (tau0 -> inf limit)
};

// Zeros of the sharp-line absorber wavevector: bracketing scan over
// x in (0, 5] with 2000 uniform points, each bracket bisected to 1e-10.
stopping_roots_result stopping_roots(double nu, double tau0);

// Lowest x at which V(x) = 1 for the amplifying medium (s0 forced to +1),
// located by the same scan-and-bisect recipe on V(x) - 1.  Pole crossings
// (denominator sign changes) are rejected; nullopt when no crossing exists
// in (0, 5].
std::optional<double> superluminal_threshold(const medium_params& medium, double tau0);

// Full solution assembly for one parameter point.
dispersion_solution solve_dispersion(const medium_params& medium, const pulse_params& pulse,
                                     broadened_form form = broadened_form::canonical);

}  // namespace sit

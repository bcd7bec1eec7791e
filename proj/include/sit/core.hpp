// Core parameter types and the internal unit convention shared by every module.
//
// All quantities are dimensionless: frequencies in units of the two-level
// transition frequency omega0, velocities in units of c, field envelopes in
// units of omega0/kappa.  With omega0 = c = kappa = 1 the medium coupling
// constant reduces to gamma = 4*nu and the hyperbolic-secant soliton peak
// amplitude to E0 = 4/tau_p.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace sit {

inline constexpr const char* version_string = "0.1.0";

// Thrown when inputs violate a documented precondition (CLI exit code 2).
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when a numerical procedure fails to converge or a run goes
// unstable (CLI exit code 3).
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class lineshape_kind { sharp_line, lorentzian };

// Propagation regime of a dispersion solution.  luminal is reachable only in
// the free limit nu -> 0 where V == 1 exactly.
enum class regime_kind { subluminal, luminal, superluminal };

struct medium_params {
    // coupling nu = gamma*kappa/(4*omega0); nu = 0 is the vacuum limit where
    // K = x and V = 1 exactly
    double nu = 1.0;
    double s0 = -1.0;  // initial inversion: -1 absorbing, +1 amplifying
    lineshape_kind lineshape = lineshape_kind::sharp_line;
    // dimensionless inverse linewidth omega0*tau_star; required in
    // lorentzian mode, ignored (conceptually infinite) in sharp_line mode
    std::optional<double> omega0_tau_star{};
};

struct pulse_params {
    double x = 1.0;     // carrier to transition frequency ratio omega/omega0
    double tau0 = 1.0;  // dimensionless initial pulse width omega0*tau_p
};

// Width ratio y = tau_p/tau_star; defined only for a lorentzian medium.
double width_ratio(const medium_params& medium, const pulse_params& pulse);

struct unit_convention {
    double omega0;
    double c;
    double kappa;
};

// Fixes omega0 = c = kappa = 1.  Everything downstream assumes these values.
constexpr unit_convention internal_units() { return {1.0, 1.0, 1.0}; }

// gamma = 4*nu*omega0/kappa; equals 4*nu in internal units.
constexpr double coupling_gamma(double nu) { return 4.0 * nu; }

// Soliton peak amplitude E0 = 4/(kappa*tau_p); equals 4/tau0 internally.
constexpr double soliton_peak_field(double tau0) { return 4.0 / tau0; }

// Closed-form dispersion solution for one (medium, pulse) point.
// exists == false carries the reason in `failure` and leaves the numeric
// members zero; nonexistence is always an explicit state, never a NaN.
struct dispersion_solution {
    bool exists = false;
    double k_dimless = 0.0;     // K = k*c/omega0
    double v_dimless = 0.0;     // V = v/c
    double gamma_factor = 0.0;  // Gamma = 1 - c^2 k/(omega v)
    double g_factor = 0.0;      // G = (omega^2 - c^2 k^2)/(2 omega omega0)
    regime_kind regime = regime_kind::subluminal;
    std::string failure;
};

regime_kind classify_regime(double v_dimless);

// Validate parameter-level invariants (positivity, s0 in {-1,+1},
// lorentzian mode has a positive finite omega0_tau_star).  Throws
// validation_error naming the failed invariant.  Idempotent: validating an
// already-validated value is a no-op.
void validate(const medium_params& medium);
void validate(const pulse_params& pulse);
void validate(const medium_params& medium, const pulse_params& pulse);

}  // namespace sit

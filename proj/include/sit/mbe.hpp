// Reduced Maxwell-Bloch propagation in the retarded frame (xi = x,
// tau = t - x*omega/(k c^2)) used as the independent dynamical check of the
// closed-form dispersion law, plus the pulse-area evolution law.
//
// Marching equations (internal units, gamma = 4 nu):
//     dE/dxi   = (2 nu / K) <S_y>,
//     dphi/dxi = (x G / K) + (2 nu / K) <S_x> / E,
// with per-atom Bloch dynamics along tau,
//     S_x' = -(delta + phi') S_y,
//     S_y' =  (delta + phi') S_x + (E/2) S_z,
//     S_z' = -(E/2) S_y.
// The integrator advances the equivalent phase-rotated cartesian pair
// (sigma = (S_x + i S_y) e^{-i phi}, A = E e^{i phi}), which removes the
// division by E at the pulse wings:
//     sigma' = i delta sigma + (i/2) S_z conj(A),
//     S_z'   = -(1/2) Im(A sigma),
//     dA/dxi = i (x G / K) A + i (2 nu / K) conj(<sigma>).

#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "sit/core.hpp"

namespace sit {

struct bloch_ensemble {
    std::vector<double> deltas;                 // detunings, units of omega0
    std::vector<double> weights;                // sums to 1
    std::vector<std::array<double, 3>> states;  // (S_x, S_y, S_z)
};

// Detuning discretisation of the lineshape measure.  Lorentzian media place
// n_atoms Gauss-Legendre nodes through the line's CDF on [0, cutoff]
// (cutoff <= 0 selects the default 50/tau_star) and add the truncated tail
// mass to the outermost node so the weights sum to exactly 1; the sharp
// line is the single atom at delta = omega0*(1 - x).  All states start at
// (0, 0, s0).
bloch_ensemble build_ensemble(const medium_params& medium, const pulse_params& pulse,
                              int n_atoms, double cutoff = 0.0);

// Literal Bloch right-hand side (kappa = 1).
std::array<double, 3> bloch_rhs(const std::array<double, 3>& s, double delta, double phi_dot,
                                double envelope);

struct field_state {
    double position = 0.0;
    std::vector<double> tau;       // uniform retarded-time grid
    std::vector<double> envelope;  // E = |A|
    std::vector<double> phase;     // arg(A), radians
};

struct snapshot_state : field_state {
    std::vector<double> avg_sy;  // ensemble-averaged S_y along the grid
};

struct propagation_record {
    std::vector<snapshot_state> snapshots;
    std::vector<std::pair<double, double>> peak_trajectory;  // (position, tau of peak)
    std::vector<std::pair<double, double>> area_history;     // (position, Bloch-angle area)
    double measured_velocity = 0.0;  // filled by measure_velocity
    double x = 0.0;                  // carrier frequency ratio of the run
    double k = 0.0;                  // carrier wavevector of the run
};

struct propagate_config {
    double k = 0.0;          // carrier wavevector (normally the dispersion-law K)
    int steps = 0;           // position steps
    double dx = 0.0;         // position step; must satisfy dx <= dtau * x/K
    int snapshot_every = 0;  // 0 keeps only the first and last states
    int n_atoms = 200;       // lorentzian ensemble size
    double cutoff = 0.0;     // detuning cutoff; <= 0 -> 50/tau_star
};

// Space-marching propagation: per position step every atom is integrated
// over the full tau grid by RK4 from the fresh (0,0,s0) state, and the
// field advances by a midpoint predictor-corrector in xi.  Aborts with
// numerical_error if the field energy of an absorbing run grows beyond
// 1e3 x its launch value.
propagation_record propagate(const medium_params& medium, const pulse_params& pulse,
                             const field_state& initial, const propagate_config& config);

struct velocity_fit {
    double v_dimless = 0.0;
    double slope = 0.0;  // retarded-frame peak drift d tau_peak / d xi = 1/V - x/K
    double residual_rms = 0.0;
};

// Least-squares fit of the peak trajectory, converted to the lab frame via
// V = 1/(slope + x/K).  Requires at least 3 recorded peaks.
velocity_fit measure_velocity(propagation_record& record);

// Pulse-area evolution d theta/dx = +(beta/2) sin(theta), integrated with
// adaptive RK45; returns n_out+1 (x, theta) samples.  Non-finite beta is
// rejected as "infinite absorption: pulse stopped".
std::vector<std::pair<double, double>> area_theorem_evolve(double theta0, double beta,
                                                           double x_max, int n_out);

// tan(theta/2) = tan(theta0/2) exp(beta x / 2), continuous in x, with
// theta0 = n*pi fixed points preserved exactly.
double area_theorem_closed_form(double theta0, double beta, double x);

// beta = 2*gamma*omega0^2*tau_star/(kappa^2 c^2 k) = 8*nu*(omega0 tau*)/K in
// internal units (gamma/kappa^2 = 4 nu with kappa = 1).  K = 0 returns +inf,
// the infinite-absorption signal.
double beta_coefficient(const medium_params& medium, double k_dimless, double tau_star);

// Sech launch profile of the given Bloch-angle area on a uniform grid
// (area = 2*pi reproduces the soliton amplitude 4/tau_p).
field_state make_sech_field(double tau_min, double tau_max, std::size_t n, double tau_p,
                            double tau_center = 0.0, double area = 2.0 * std::numbers::pi);

// Largest |dphi/dtau| over grid nodes whose envelope is at least
// envelope_floor_rel times the snapshot peak; the phase-stationarity
// diagnostic.
double max_phase_rate(const snapshot_state& snap, double envelope_floor_rel = 1e-3);

// One file per run: '#' header lines echoing version and parameters, then
// (position, tau, envelope, phase, avg_sy) rows for every snapshot in the
// shared CSV dialect.
void write_snapshots(std::ostream& os, const propagation_record& record,
                     const std::vector<std::pair<std::string, std::string>>& params);

}  // namespace sit

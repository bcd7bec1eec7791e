#include "sit/mbe.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "sit/format.hpp"
#include "sit/numerics.hpp"

namespace sit {

namespace {

constexpr double pi = std::numbers::pi;
using cplx = std::complex<double>;

// RK4 sweep of one atom along the tau grid in the phase-rotated frame
// sigma = p + i q, starting from (0, 0, s0); row[j] receives sigma at node j.
// Midpoint field values are linear interpolants, consistent with the O(h^4)
// local error of the sweep.
void sweep_atom(const std::vector<cplx>& field, double dtau, double delta, double s0,
                cplx* row) {
    const std::size_t n = field.size();
    double p = 0.0, q = 0.0, w = s0;
    row[0] = cplx(0.0, 0.0);
    const double h = dtau;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double a0 = field[j].real(), b0 = field[j].imag();
        const double a1 = field[j + 1].real(), b1 = field[j + 1].imag();
        const double am = 0.5 * (a0 + a1), bm = 0.5 * (b0 + b1);

        auto rhs = [delta](double pp, double qq, double ww, double a, double b, double& dp,
                           double& dq, double& dw) {
            dp = -delta * qq + 0.5 * b * ww;
            dq = delta * pp + 0.5 * a * ww;
            dw = -0.5 * (a * qq + b * pp);
        };

        double k1p, k1q, k1w, k2p, k2q, k2w, k3p, k3q, k3w, k4p, k4q, k4w;
        rhs(p, q, w, a0, b0, k1p, k1q, k1w);
        rhs(p + 0.5 * h * k1p, q + 0.5 * h * k1q, w + 0.5 * h * k1w, am, bm, k2p, k2q, k2w);
        rhs(p + 0.5 * h * k2p, q + 0.5 * h * k2q, w + 0.5 * h * k2w, am, bm, k3p, k3q, k3w);
        rhs(p + h * k3p, q + h * k3q, w + h * k3w, a1, b1, k4p, k4q, k4w);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        row[j + 1] = cplx(p, q);
    }
}

// Ensemble-averaged sigma along the grid.  Atoms run in parallel into
// per-atom rows; the weighted reduction is serial and in atom order, so the
// result is bit-stable across thread schedules.
void trace_ensemble(const std::vector<cplx>& field, double dtau, const bloch_ensemble& ens,
                    double s0, std::vector<cplx>& rows, std::vector<cplx>& sigma_avg) {
    const std::size_t n = field.size();
    const std::size_t n_atoms = ens.deltas.size();
    num::parallel_for(n_atoms, [&](std::size_t i) {
        sweep_atom(field, dtau, ens.deltas[i], s0, rows.data() + i * n);
    });
    std::fill(sigma_avg.begin(), sigma_avg.end(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < n_atoms; ++i) {
        const double wgt = ens.weights[i];
        const cplx* row = rows.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) sigma_avg[j] += wgt * row[j];
    }
}

// dA/dxi = i (x G / K) A + i (2 nu / K) conj(<sigma>)
void field_rhs(const std::vector<cplx>& field, const std::vector<cplx>& sigma_avg,
               double carrier_rate, double coupling_rate, std::vector<cplx>& out) {
    constexpr cplx iu(0.0, 1.0);
    for (std::size_t j = 0; j < field.size(); ++j)
        out[j] = iu * (carrier_rate * field[j] + coupling_rate * std::conj(sigma_avg[j]));
}

double field_energy(const std::vector<cplx>& field, double dtau) {
    double e = 0.0;
    for (const cplx& a : field) e += std::norm(a);
    return e * dtau;
}

double bloch_area(const std::vector<cplx>& field, double dtau) {
    cplx integral(0.0, 0.0);
    for (std::size_t j = 0; j + 1 < field.size(); ++j)
        integral += 0.5 * dtau * (field[j] + field[j + 1]);
    return 0.5 * std::abs(integral);  // kappa/2 * |integral of A dtau|, kappa = 1
}

double peak_tau(const std::vector<double>& tau, const std::vector<cplx>& field, double dtau) {
    std::size_t j0 = 0;
    double best = -1.0;
    for (std::size_t j = 0; j < field.size(); ++j) {
        const double m = std::abs(field[j]);
        if (m > best) {
            best = m;
            j0 = j;
        }
    }
    if (j0 == 0 || j0 + 1 == field.size()) return tau[j0];
    const double off = num::parabolic_peak_offset(dtau, std::abs(field[j0 - 1]), best,
                                                  std::abs(field[j0 + 1]));
    return tau[j0] + off;
}

snapshot_state make_snapshot(double position, const std::vector<double>& tau,
                             const std::vector<cplx>& field, const std::vector<cplx>& sigma_avg) {
    snapshot_state s;
    s.position = position;
    s.tau = tau;
    const std::size_t n = field.size();
    s.envelope.resize(n);
    s.phase.resize(n);
    s.avg_sy.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        s.envelope[j] = std::abs(field[j]);
        s.phase[j] = (field[j] == cplx(0.0, 0.0)) ? 0.0 : std::arg(field[j]);
        // S_x + i S_y = sigma e^{i phi}
        s.avg_sy[j] = std::imag(sigma_avg[j] * std::polar(1.0, s.phase[j]));
    }
    return s;
}

}  // namespace

bloch_ensemble build_ensemble(const medium_params& medium, const pulse_params& pulse,
                              int n_atoms, double cutoff) {
    validate(medium);
    validate(pulse);
    bloch_ensemble ens;
    if (medium.lineshape == lineshape_kind::sharp_line) {
        ens.deltas = {1.0 - pulse.x};
        ens.weights = {1.0};
    } else {
        if (n_atoms < 1) throw validation_error("build_ensemble: n_atoms must be >= 1");
        const double tau_star = *medium.omega0_tau_star;
        const double cut = cutoff > 0.0 ? cutoff : 50.0 / tau_star;
        if (!(cut > 0.0) || !std::isfinite(cut))
            throw validation_error("build_ensemble: cutoff must be finite and positive");
        // Nodes are Gauss-Legendre points mapped through the lineshape CDF
        // C(delta) = (2/pi) atan(delta tau*); the truncated tail mass is
        // folded onto the outermost node so the weights sum to exactly 1.
        const double mass = (2.0 / pi) * std::atan(cut * tau_star);
        const auto rule = num::gauss_legendre(n_atoms, 0.0, mass);
        ens.deltas.resize(n_atoms);
        ens.weights = rule.weights;
        for (int i = 0; i < n_atoms; ++i)
            ens.deltas[i] = std::tan(0.5 * pi * rule.nodes[i]) / tau_star;
        ens.weights.back() += 1.0 - mass;
    }
    ens.states.assign(ens.deltas.size(), {0.0, 0.0, medium.s0});
    return ens;
}

std::array<double, 3> bloch_rhs(const std::array<double, 3>& s, double delta, double phi_dot,
                                double envelope) {
    const double d = delta + phi_dot;
    return {-d * s[1], d * s[0] + 0.5 * envelope * s[2], -0.5 * envelope * s[1]};
}

propagation_record propagate(const medium_params& medium, const pulse_params& pulse,
                             const field_state& initial, const propagate_config& config) {
    validate(medium);
    validate(pulse);
    const std::size_t n = initial.tau.size();
    if (n < 8) throw validation_error("propagate: tau grid needs at least 8 nodes");
    if (initial.envelope.size() != n || initial.phase.size() != n)
        throw validation_error("propagate: envelope/phase sizes must match the tau grid");
    const double dtau = initial.tau[1] - initial.tau[0];
    if (!(dtau > 0.0)) throw validation_error("propagate: tau grid must be increasing");
    for (std::size_t j = 0; j + 1 < n; ++j)
        if (std::abs(initial.tau[j + 1] - initial.tau[j] - dtau) > 1e-9 * dtau)
            throw validation_error("propagate: tau grid must be uniform");
    if (!(config.k > 0.0) || !std::isfinite(config.k))
        throw validation_error("propagate: carrier wavevector k must be finite and positive");
    if (config.steps < 1) throw validation_error("propagate: steps must be >= 1");
    if (!(config.dx > 0.0) || !std::isfinite(config.dx))
        throw validation_error("propagate: dx must be finite and positive");
    // The retarded frame tilts characteristics by x/K; resolving them needs
    // dx <= dtau * x / K.
    if (config.dx > dtau * pulse.x / config.k * (1.0 + 1e-9))
        throw validation_error("propagate: dx exceeds the characteristic bound dtau*x/k");

    const bloch_ensemble ens = build_ensemble(medium, pulse, config.n_atoms, config.cutoff);
    const std::size_t n_atoms = ens.deltas.size();

    const double g_factor = (pulse.x * pulse.x - config.k * config.k) / (2.0 * pulse.x);
    const double carrier_rate = pulse.x * g_factor / config.k;
    const double coupling_rate = 2.0 * medium.nu / config.k;

    std::vector<cplx> field(n);
    for (std::size_t j = 0; j < n; ++j)
        field[j] = std::polar(initial.envelope[j], initial.phase[j]);

    std::vector<cplx> rows(n_atoms * n);
    std::vector<cplx> sigma_avg(n), sigma_pred(n), rhs1(n), rhs2(n), predicted(n);

    propagation_record rec;
    rec.x = pulse.x;
    rec.k = config.k;
    rec.peak_trajectory.reserve(config.steps + 1);
    rec.area_history.reserve(config.steps + 1);

    const double energy0 = field_energy(field, dtau);
    double xi = initial.position;

    for (int step = 0;; ++step) {
        trace_ensemble(field, dtau, ens, medium.s0, rows, sigma_avg);
        rec.peak_trajectory.emplace_back(xi, peak_tau(initial.tau, field, dtau));
        rec.area_history.emplace_back(xi, bloch_area(field, dtau));
        const bool last = step == config.steps;
        if (step == 0 || last || (config.snapshot_every > 0 && step % config.snapshot_every == 0))
            rec.snapshots.push_back(make_snapshot(xi, initial.tau, field, sigma_avg));
        if (last) break;

        field_rhs(field, sigma_avg, carrier_rate, coupling_rate, rhs1);
        for (std::size_t j = 0; j < n; ++j) predicted[j] = field[j] + config.dx * rhs1[j];
        trace_ensemble(predicted, dtau, ens, medium.s0, rows, sigma_pred);
        field_rhs(predicted, sigma_pred, carrier_rate, coupling_rate, rhs2);
        for (std::size_t j = 0; j < n; ++j)
            field[j] += 0.5 * config.dx * (rhs1[j] + rhs2[j]);
        xi += config.dx;

        if (medium.s0 < 0.0 && energy0 > 0.0 && field_energy(field, dtau) > 1e3 * energy0)
            throw numerical_error(
                "propagate: field energy grew beyond 1e3x launch in an absorbing medium");
    }
    return rec;
}

velocity_fit measure_velocity(propagation_record& record) {
    if (record.peak_trajectory.size() < 3)
        throw validation_error("measure_velocity: need at least 3 peak samples");
    if (!(record.k > 0.0) || !(record.x > 0.0))
        throw validation_error("measure_velocity: record carries no carrier parameters");
    std::vector<double> xs, taus;
    xs.reserve(record.peak_trajectory.size());
    taus.reserve(record.peak_trajectory.size());
    for (const auto& [xi, tp] : record.peak_trajectory) {
        xs.push_back(xi);
        taus.push_back(tp);
    }
    const auto fit = num::fit_line(xs, taus);
    // tau_peak(xi) drifts at 1/V - x/K in the retarded frame.
    const double denom = fit.slope + record.x / record.k;
    if (denom == 0.0 || !std::isfinite(denom))
        throw numerical_error("measure_velocity: peak drift cancels the frame speed");
    velocity_fit out;
    out.slope = fit.slope;
    out.residual_rms = fit.residual_rms;
    out.v_dimless = 1.0 / denom;
    record.measured_velocity = out.v_dimless;
    return out;
}

std::vector<std::pair<double, double>> area_theorem_evolve(double theta0, double beta,
                                                           double x_max, int n_out) {
    if (!std::isfinite(beta)) throw numerical_error("infinite absorption: pulse stopped");
    if (!std::isfinite(theta0)) throw validation_error("area_theorem_evolve: theta0 not finite");
    if (!(x_max > 0.0) || !std::isfinite(x_max))
        throw validation_error("area_theorem_evolve: x_max must be finite and positive");
    if (n_out < 1) throw validation_error("area_theorem_evolve: n_out must be >= 1");
    return num::integrate_ode45(
        [beta](double, double theta) { return 0.5 * beta * std::sin(theta); }, theta0, 0.0,
        x_max, n_out, 1e-12, 1e-14);
}

double area_theorem_closed_form(double theta0, double beta, double x) {
    // theta = 2 atan(tan(theta0/2) e^{beta x/2}), lifted back onto the branch
    // containing theta0 so the result is continuous in x.
    const double half = 0.5 * theta0;
    const double principal0 = 2.0 * std::atan(std::tan(half));
    const double offset = theta0 - principal0;
    if (std::abs(std::sin(half)) < 1e-15 || std::abs(std::cos(half)) < 1e-15)
        return theta0;  // multiples of pi are fixed points
    return offset + 2.0 * std::atan(std::tan(half) * std::exp(0.5 * beta * x));
}

double beta_coefficient(const medium_params& medium, double k_dimless, double tau_star) {
    validate(medium);
    if (!(tau_star > 0.0) || !std::isfinite(tau_star))
        throw validation_error("beta_coefficient: tau_star must be finite and positive");
    if (k_dimless < 0.0 || !std::isfinite(k_dimless))
        throw validation_error("beta_coefficient: k must be finite and non-negative");
    if (k_dimless == 0.0) return std::numeric_limits<double>::infinity();
    return 8.0 * medium.nu * tau_star / k_dimless;
}

field_state make_sech_field(double tau_min, double tau_max, std::size_t n, double tau_p,
                            double tau_center, double area) {
    if (!(tau_max > tau_min)) throw validation_error("make_sech_field: empty tau interval");
    if (n < 2) throw validation_error("make_sech_field: need at least 2 nodes");
    if (!(tau_p > 0.0)) throw validation_error("make_sech_field: tau_p must be positive");
    field_state f;
    f.tau.resize(n);
    f.envelope.resize(n);
    f.phase.assign(n, 0.0);
    const double e0 = 2.0 * area / (pi * tau_p);  // area 2*pi gives the soliton peak 4/tau_p
    for (std::size_t j = 0; j < n; ++j) {
        f.tau[j] = tau_min + (tau_max - tau_min) * static_cast<double>(j) /
                                 static_cast<double>(n - 1);
        f.envelope[j] = e0 / std::cosh((f.tau[j] - tau_center) / tau_p);
    }
    return f;
}

double max_phase_rate(const snapshot_state& snap, double envelope_floor_rel) {
    const std::size_t n = snap.tau.size();
    if (n < 3 || snap.envelope.size() != n || snap.phase.size() != n)
        throw validation_error("max_phase_rate: malformed snapshot");
    const double dtau = snap.tau[1] - snap.tau[0];
    double peak = 0.0;
    for (double e : snap.envelope) peak = std::max(peak, e);
    const double floor = envelope_floor_rel * peak;
    // Central difference on A = E e^{i phi}: phi' = Im(conj(A) A') / |A|^2,
    // immune to 2*pi wraps in the stored phase.
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        if (snap.envelope[j] < floor || snap.envelope[j] == 0.0) continue;
        const cplx a = std::polar(snap.envelope[j], snap.phase[j]);
        const cplx am = std::polar(snap.envelope[j - 1], snap.phase[j - 1]);
        const cplx ap = std::polar(snap.envelope[j + 1], snap.phase[j + 1]);
        const double rate = std::imag(std::conj(a) * (ap - am) / (2.0 * dtau)) / std::norm(a);
        worst = std::max(worst, std::abs(rate));
    }
    return worst;
}

void write_snapshots(std::ostream& os, const propagation_record& record,
                     const std::vector<std::pair<std::string, std::string>>& params) {
    os << "# sit " << version_string << "\n";
    os << "# kind=mbe_snapshots\n";
    for (const auto& [key, value] : params) os << "# " << key << "=" << value << "\n";
    os << "position (c/omega0),tau (1/omega0),envelope (omega0/kappa),phase (rad),"
          "avg_sy (dimensionless)\n";
    for (const snapshot_state& s : record.snapshots)
        for (std::size_t j = 0; j < s.tau.size(); ++j)
            os << format_e12(s.position) << ',' << format_e12(s.tau[j]) << ','
               << format_e12(s.envelope[j]) << ',' << format_e12(s.phase[j]) << ','
               << format_e12(s.avg_sy[j]) << "\n";
}

}  // namespace sit

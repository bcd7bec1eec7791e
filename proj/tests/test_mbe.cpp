#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "sit/dispersion.hpp"
#include "sit/lineshape.hpp"
#include "sit/mbe.hpp"

using namespace sit;

namespace {

constexpr double pi = std::numbers::pi;

medium_params broadened(double nu, double s0, double tau_star) {
    medium_params m;
    m.nu = nu;
    m.s0 = s0;
    m.lineshape = lineshape_kind::lorentzian;
    m.omega0_tau_star = tau_star;
    return m;
}

}  // namespace

TEST_CASE("lorentzian ensemble: weights normalize and reproduce <F>") {
    const auto m = broadened(0.05, -1.0, 10.0);
    const pulse_params p{1.0, 5.0};
    const auto ens = build_ensemble(m, p, 200);
    REQUIRE(ens.deltas.size() == 200);
    REQUIRE(ens.weights.size() == 200);
    REQUIRE(ens.states.size() == 200);

    double wsum = 0.0, f_disc = 0.0;
    for (std::size_t i = 0; i < ens.deltas.size(); ++i) {
        CHECK(ens.deltas[i] >= 0.0);
        CHECK(ens.weights[i] > 0.0);
        wsum += ens.weights[i];
        f_disc += ens.weights[i] / (1.0 + ens.deltas[i] * ens.deltas[i] * p.tau0 * p.tau0);
        CHECK(ens.states[i] == std::array<double, 3>{0.0, 0.0, -1.0});
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-10));
    const auto an = averages_analytic(p.tau0, *m.omega0_tau_star);
    CHECK(f_disc == doctest::Approx(an.avg_f).epsilon(1e-4));
}

TEST_CASE("sharp-line ensemble is the single detuned atom") {
    medium_params m;
    m.nu = 1.0;
    const auto ens = build_ensemble(m, {0.8, 1.0}, 50);
    REQUIRE(ens.deltas.size() == 1);
    CHECK(ens.deltas[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(ens.weights[0] == 1.0);
    CHECK(ens.states[0] == std::array<double, 3>{0.0, 0.0, -1.0});
}

TEST_CASE("bloch right-hand side is the printed system") {
    // dark ground state
    const auto dark = bloch_rhs({0.0, 0.0, -1.0}, 0.1, 0.0, 0.0);
    CHECK(dark == std::array<double, 3>{0.0, 0.0, 0.0});
    // free precession
    const auto prec = bloch_rhs({0.0, 1.0, 0.0}, 1.0, 0.0, 0.0);
    CHECK(prec[0] == doctest::Approx(-1.0));
    CHECK(prec[1] == doctest::Approx(0.0));
    CHECK(prec[2] == doctest::Approx(0.0));
    // norm is conserved for any state
    const std::array<double, 3> s{0.3, -0.5, 0.7};
    const auto d = bloch_rhs(s, 0.4, 0.2, 1.7);
    CHECK(std::abs(s[0] * d[0] + s[1] * d[1] + s[2] * d[2]) <= 1e-15);
}

TEST_CASE("sech launch profile carries the requested area") {
    const auto f = make_sech_field(-20.0, 24.0, 2048, 1.0, 0.0, 2.0 * pi);
    REQUIRE(f.tau.size() == 2048);
    CHECK(f.envelope[0] <= 1e-7);
    double integral = 0.0;
    for (std::size_t j = 0; j + 1 < f.tau.size(); ++j)
        integral += 0.5 * (f.envelope[j] + f.envelope[j + 1]) * (f.tau[j + 1] - f.tau[j]);
    CHECK(0.5 * integral == doctest::Approx(2.0 * pi).epsilon(1e-7));
    double peak = 0.0;
    for (double e : f.envelope) peak = std::max(peak, e);
    CHECK(peak == doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("vacuum field stays dark and atoms stay put") {
    medium_params m;
    m.nu = 0.2;
    const pulse_params p{1.0, 1.0};
    field_state f = make_sech_field(-10.0, 10.0, 256, 1.0);
    std::fill(f.envelope.begin(), f.envelope.end(), 0.0);
    propagate_config cfg;
    cfg.k = 1.0;
    cfg.steps = 20;
    cfg.dx = 0.05;
    const auto rec = propagate(m, p, f, cfg);
    for (const auto& snap : rec.snapshots)
        for (std::size_t j = 0; j < snap.envelope.size(); ++j) {
            CHECK(snap.envelope[j] == 0.0);
            CHECK(snap.avg_sy[j] == 0.0);
        }
}

TEST_CASE("internal phase-rotated integration equals the literal Bloch sweep") {
    // One off-resonant sharp-line atom, phase-flat launch field: the
    // snapshot <S_y> at step zero must match an RK4 of bloch_rhs over the
    // same grid with the same midpoint field interpolation.
    medium_params m;
    m.nu = 0.3;
    const pulse_params p{0.8, 1.0};  // delta = 0.2
    const field_state f = make_sech_field(-12.0, 12.0, 1024, 1.0);
    propagate_config cfg;
    cfg.k = 1.0;
    cfg.steps = 1;
    cfg.dx = 0.01;
    const auto rec = propagate(m, p, f, cfg);
    const auto& snap = rec.snapshots.front();

    std::array<double, 3> s{0.0, 0.0, -1.0};
    const double h = f.tau[1] - f.tau[0];
    const double delta = 0.2;
    double max_err = std::abs(snap.avg_sy[0] - s[1]);
    for (std::size_t j = 0; j + 1 < f.tau.size(); ++j) {
        const double e0 = f.envelope[j], e1 = f.envelope[j + 1], em = 0.5 * (e0 + e1);
        const auto k1 = bloch_rhs(s, delta, 0.0, e0);
        std::array<double, 3> t1{s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1],
                                 s[2] + 0.5 * h * k1[2]};
        const auto k2 = bloch_rhs(t1, delta, 0.0, em);
        std::array<double, 3> t2{s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1],
                                 s[2] + 0.5 * h * k2[2]};
        const auto k3 = bloch_rhs(t2, delta, 0.0, em);
        std::array<double, 3> t3{s[0] + h * k3[0], s[1] + h * k3[1], s[2] + h * k3[2]};
        const auto k4 = bloch_rhs(t3, delta, 0.0, e1);
        for (int c = 0; c < 3; ++c)
            s[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        max_err = std::max(max_err, std::abs(snap.avg_sy[j + 1] - s[1]));
    }
    CHECK(max_err <= 1e-10);
}

TEST_CASE("per-atom Bloch norm stays on the unit sphere through a run") {
    medium_params m;
    m.nu = 0.2;
    const pulse_params p{1.0, 1.0};
    const field_state f = make_sech_field(-15.0, 18.0, 1024, 1.0);
    propagate_config cfg;
    cfg.k = 1.0;
    cfg.steps = 60;
    cfg.dx = 0.02;
    const auto rec = propagate(m, p, f, cfg);
    // resonant sharp line: S_x = 0, so S_y^2 + S_z^2 = 1; at the grid end
    // the atom has completed the 2*pi rotation back to the ground state
    const auto& snap = rec.snapshots.back();
    double worst = 0.0;
    for (std::size_t j = 0; j < snap.avg_sy.size(); ++j) {
        const double sy = snap.avg_sy[j];
        worst = std::max(worst, std::abs(sy) > 1.0 ? std::abs(sy) - 1.0 : 0.0);
    }
    CHECK(worst <= 1e-8);
    CHECK(std::abs(snap.avg_sy.back()) <= 1e-4);
}

TEST_CASE("CFL-style step bound is enforced") {
    medium_params m;
    m.nu = 0.2;
    const pulse_params p{1.0, 1.0};
    const field_state f = make_sech_field(-10.0, 10.0, 256, 1.0);
    const double dtau = f.tau[1] - f.tau[0];
    propagate_config cfg;
    cfg.k = 1.0;
    cfg.steps = 5;
    cfg.dx = 2.0 * dtau;  // violates dx <= dtau * x/K
    CHECK_THROWS_AS(propagate(m, p, f, cfg), validation_error);
}

TEST_CASE("measured velocity is stable under grid refinement") {
    medium_params m;
    m.nu = 0.2;
    const pulse_params p{1.0, 1.0};
    const auto sol = solve_dispersion(m, p);
    REQUIRE(sol.exists);

    auto measure = [&](std::size_t n_tau, double dx, int steps) {
        const field_state f = make_sech_field(-15.0, 18.0, n_tau, 1.0);
        propagate_config cfg;
        cfg.k = sol.k_dimless;
        cfg.steps = steps;
        cfg.dx = dx;
        auto rec = propagate(m, p, f, cfg);
        return measure_velocity(rec).v_dimless;
    };
    const double coarse = measure(512, 0.06, 100);
    const double fine = measure(1024, 0.03, 200);
    CHECK(std::abs(fine - coarse) / std::abs(fine) < 5e-3);
    CHECK(fine == doctest::Approx(sol.v_dimless).epsilon(2e-2));
}

TEST_CASE("broadened absorber attenuates a 0.9 pi pulse monotonically") {
    const auto m = broadened(0.3, -1.0, 5.0);
    const pulse_params p{1.0, 2.5};  // y = 0.5
    const auto sol = solve_dispersion(m, p);
    REQUIRE(sol.exists);
    const field_state f = make_sech_field(-25.0, 25.0, 512, p.tau0, 0.0, 0.9 * pi);
    propagate_config cfg;
    cfg.k = sol.k_dimless;
    cfg.steps = 25;
    cfg.dx = 0.06;
    cfg.n_atoms = 60;
    const auto rec = propagate(m, p, f, cfg);
    REQUIRE(rec.area_history.size() == 26);
    for (std::size_t i = 1; i < rec.area_history.size(); ++i)
        CHECK(rec.area_history[i].second < rec.area_history[i - 1].second);
    // the one-sided line reshapes as well as absorbs, so only the direction
    // of the drift is pinned here, not its rate
    CHECK(rec.area_history.back().second < 0.8 * rec.area_history.front().second);
}

TEST_CASE("area theorem ODE matches the separable closed form") {
    for (const double theta0 : {0.1 * pi, 0.5 * pi, 0.9 * pi}) {
        const auto sol = area_theorem_evolve(theta0, 1.0, 10.0, 100);
        REQUIRE(sol.size() == 101);
        double sup = 0.0;
        for (const auto& [x, th] : sol)
            sup = std::max(sup, std::abs(th - area_theorem_closed_form(theta0, 1.0, x)));
        CHECK(sup <= 1e-6);
    }
    // fixed points stay fixed
    for (const double theta0 : {0.0, pi}) {
        const auto sol = area_theorem_evolve(theta0, 1.0, 10.0, 50);
        for (const auto& [x, th] : sol) CHECK(std::abs(th - theta0) <= 1e-12);
    }
    // negative beta drives the area toward zero
    const auto damped = area_theorem_evolve(0.5 * pi, -2.0, 8.0, 50);
    CHECK(damped.back().second < 1e-3);
}

TEST_CASE("absorption coefficient scales as 1/K and diverges at stopping") {
    medium_params m;
    m.nu = 1.0;
    CHECK(beta_coefficient(m, 1.0, 1.0) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(beta_coefficient(m, 2.0, 1.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(std::isinf(beta_coefficient(m, 0.0, 1.0)));
    CHECK_THROWS_WITH_AS(area_theorem_evolve(0.5 * pi, beta_coefficient(m, 0.0, 1.0), 1.0, 10),
                         "infinite absorption: pulse stopped", numerical_error);
}

TEST_CASE("snapshot persistence emits the self-describing CSV") {
    medium_params m;
    m.nu = 0.2;
    const pulse_params p{1.0, 1.0};
    const field_state f = make_sech_field(-10.0, 10.0, 64, 1.0);
    propagate_config cfg;
    cfg.k = 1.0;
    cfg.steps = 4;
    cfg.dx = 0.05;
    cfg.snapshot_every = 2;
    const auto rec = propagate(m, p, f, cfg);
    std::ostringstream os;
    write_snapshots(os, rec, {{"nu", "0.2"}});
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == std::string("# sit ") + version_string);
    std::getline(in, line);
    CHECK(line == "# kind=mbe_snapshots");
    std::getline(in, line);
    CHECK(line == "# nu=0.2");
    std::getline(in, line);
    CHECK(line.find("position") == 0);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 4);
    }
    CHECK(rows == rec.snapshots.size() * 64);
}

#include "doctest.h"

#include <array>
#include <cmath>
#include <numbers>

#include "sit/dispersion.hpp"
#include "sit/mbe.hpp"
#include "sit/soliton.hpp"

using namespace sit;

namespace {

constexpr double pi = std::numbers::pi;

soliton_profile resonant_soliton(double nu, double tau0, soliton_grid grid = {}) {
    medium_params m;
    m.nu = nu;
    const pulse_params p{1.0, tau0};
    const auto sol = solve_dispersion(m, p);
    return build_soliton(m, p, sol, grid);
}

}  // namespace

TEST_CASE("sech soliton carries area 2*pi and peak 4/tau_p") {
    for (const double tau0 : {0.5, 1.0, 3.0}) {
        const auto prof = resonant_soliton(0.2, tau0);
        CHECK(prof.e0 == doctest::Approx(4.0 / tau0).epsilon(1e-14));
        CHECK(prof.area == doctest::Approx(2.0 * pi).epsilon(1e-8));
        CHECK(prof.envelope.front() <= 1e-7 * prof.e0);  // wings die off
    }
}

TEST_CASE("inversion route reproduces the peak amplitude exactly") {
    medium_params m;
    m.nu = 0.7;
    const pulse_params p{0.8, 1.3};
    const auto sol = solve_dispersion(m, p);
    REQUIRE(sol.exists);
    const auto avg = line_averages(m, p);
    const double e0 = peak_amplitude_from_inversion(m, p, sol.gamma_factor, avg.avg_f);
    CHECK(e0 == doctest::Approx(4.0 / p.tau0).epsilon(1e-12));
}

TEST_CASE("resonant absorber is fully inverted at the pulse peak") {
    medium_params m;
    m.nu = 0.2;
    const pulse_params p{1.0, 1.0};
    const auto sol = solve_dispersion(m, p);
    REQUIRE(sol.exists);
    // odd sample count puts tau = 0 (the exact peak) on the grid
    const auto prof = build_soliton(m, p, sol, {20.0, 4097});
    const auto sz = sz_profile(prof, m, p, sol.gamma_factor, 1.0);
    double peak_sz = -2.0;
    for (double v : sz) peak_sz = std::max(peak_sz, v);
    CHECK(peak_sz == doctest::Approx(1.0).epsilon(1e-9));  // S_z swings -1 -> +1
    CHECK(sz.front() == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("bloch angle trajectory matches direct integration of the literal equations") {
    // odd sample count keeps tau = 0 on the grid; the fine step makes the
    // two O(h^2) routes (cumulative trapezoid vs interpolated RK4) agree
    // far below their individual truncation scales at coarser grids
    const auto prof = resonant_soliton(0.2, 1.0, {20.0, 32769});
    const auto traj = bloch_angle_trajectory(prof, -1.0);

    // RK4 of the printed Bloch system for the resonant atom (delta = 0,
    // phi_dot = 0) across the same grid, with linear midpoint field values
    std::array<double, 3> s{0.0, 0.0, -1.0};
    const double h = prof.tau[1] - prof.tau[0];
    double max_err_sy = 0.0, max_err_sz = 0.0;
    for (std::size_t j = 0; j + 1 < prof.tau.size(); ++j) {
        const double e0 = prof.envelope[j];
        const double e1 = prof.envelope[j + 1];
        const double em = 0.5 * (e0 + e1);
        const auto k1 = bloch_rhs(s, 0.0, 0.0, e0);
        std::array<double, 3> t1{s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1],
                                 s[2] + 0.5 * h * k1[2]};
        const auto k2 = bloch_rhs(t1, 0.0, 0.0, em);
        std::array<double, 3> t2{s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1],
                                 s[2] + 0.5 * h * k2[2]};
        const auto k3 = bloch_rhs(t2, 0.0, 0.0, em);
        std::array<double, 3> t3{s[0] + h * k3[0], s[1] + h * k3[1], s[2] + h * k3[2]};
        const auto k4 = bloch_rhs(t3, 0.0, 0.0, e1);
        for (int c = 0; c < 3; ++c)
            s[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        max_err_sy = std::max(max_err_sy, std::abs(s[1] - traj.sy[j + 1]));
        max_err_sz = std::max(max_err_sz, std::abs(s[2] - traj.sz[j + 1]));
    }
    CHECK(max_err_sy <= 2e-7);
    CHECK(max_err_sz <= 2e-7);
    // the 2*pi pulse returns the atom to the ground state
    CHECK(traj.sz.back() == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(std::abs(traj.theta.back() + 2.0 * pi) <= 1e-7);
}

TEST_CASE("soliton construction rejects degenerate inputs") {
    medium_params m;
    m.nu = 1.0;
    const pulse_params p{1.3, 3.0};  // inside the stopping gap
    const auto sol = solve_dispersion(m, p);
    REQUIRE_FALSE(sol.exists);
    CHECK_THROWS_AS(build_soliton(m, p, sol), validation_error);

    m.nu = 0.0;  // vacuum: no medium, no soliton amplitude
    const auto vac = solve_dispersion(m, {1.0, 1.0});
    REQUIRE(vac.exists);
    CHECK_THROWS_AS(build_soliton(m, {1.0, 1.0}, vac), numerical_error);
}

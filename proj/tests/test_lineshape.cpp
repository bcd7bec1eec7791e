#include "doctest.h"

#include <cmath>
#include <vector>

#include "sit/lineshape.hpp"

using namespace sit;

namespace {

// Log-spaced y grid spanning both wings of the removable singularity at y=1.
std::vector<double> y_grid() {
    std::vector<double> ys;
    for (int i = 0; i <= 40; ++i)
        ys.push_back(std::pow(10.0, -2.0 + 4.0 * static_cast<double>(i) / 40.0));
    ys.push_back(1.0 - 1e-6);
    ys.push_back(1.0);
    ys.push_back(1.0 + 1e-6);
    return ys;
}

}  // namespace

TEST_CASE("lorentzian weight is normalized to one") {
    const double one = lorentzian_average([](double) { return 1.0; }, 7.3);
    CHECK(one == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("analytic averages match the quadrature oracle across y") {
    const double tau_star = 10.0;
    for (const double y : y_grid()) {
        CAPTURE(y);
        const double tau_p = y * tau_star;
        const auto an = averages_analytic(tau_p, tau_star);
        const auto qu = averages_quadrature(tau_p, tau_star);
        CHECK(an.avg_f == doctest::Approx(qu.avg_f).epsilon(1e-7));
        CHECK(an.avg_delta_f == doctest::Approx(qu.avg_delta_f).epsilon(1e-7));
        CHECK(an.delta_tilde == doctest::Approx(qu.delta_tilde).epsilon(1e-7));
    }
}

TEST_CASE("closed forms in y") {
    // <F> = 1/(1+y) and delta_tilde = (2/(pi tau*)) ln(1/y)/(1-y)
    const double tau_star = 4.0;
    const auto a = averages_analytic(2.0, tau_star);  // y = 0.5
    CHECK(a.avg_f == doctest::Approx(1.0 / 1.5).epsilon(1e-12));
    CHECK(a.delta_tilde ==
          doctest::Approx(2.0 / (M_PI * tau_star) * std::log(2.0) / 0.5).epsilon(1e-12));
    CHECK(a.avg_delta_f == doctest::Approx(a.avg_f * a.delta_tilde).epsilon(1e-12));
}

TEST_CASE("removable singularity at y = 1 is continuous") {
    const double tau_star = 10.0;
    const auto mid = averages_analytic(tau_star, tau_star);
    // L(1) = 1 exactly
    CHECK(mid.delta_tilde == doctest::Approx(2.0 / (M_PI * tau_star)).epsilon(1e-12));
    for (const double eps : {1e-8, -1e-8}) {
        const auto near = averages_analytic(tau_star * (1.0 + eps), tau_star);
        CHECK(near.delta_tilde == doctest::Approx(mid.delta_tilde).epsilon(1e-6));
        CHECK(near.avg_f == doctest::Approx(mid.avg_f).epsilon(1e-6));
    }
}

TEST_CASE("averages decrease as the pulse gets longer") {
    const double tau_star = 10.0;
    double prev_f = 2.0, prev_dt = 1e300;
    for (double y = 0.05; y < 20.0; y *= 1.7) {
        const auto a = averages_analytic(y * tau_star, tau_star);
        CHECK(a.avg_f < prev_f);
        CHECK(a.delta_tilde < prev_dt);
        CHECK(a.avg_f > 0.0);
        CHECK(a.delta_tilde > 0.0);
        prev_f = a.avg_f;
        prev_dt = a.delta_tilde;
    }
}

TEST_CASE("sharp-line averages evaluate the response at one detuning") {
    const auto s = sharp_line_averages(0.2, 1.0);
    CHECK(s.avg_f == doctest::Approx(1.0 / 1.04).epsilon(1e-12));
    CHECK(s.delta_tilde == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(s.avg_delta_f == doctest::Approx(0.2 / 1.04).epsilon(1e-12));
}

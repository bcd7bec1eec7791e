#include "sit/core.hpp"

#include <cmath>

namespace sit {

double width_ratio(const medium_params& medium, const pulse_params& pulse) {
    if (medium.lineshape != lineshape_kind::lorentzian)
        throw validation_error("width_ratio: y = tau_p/tau_star is defined only for a lorentzian medium");
    if (!medium.omega0_tau_star)
        throw validation_error("width_ratio: lorentzian medium lacks omega0_tau_star");
    return pulse.tau0 / *medium.omega0_tau_star;
}

regime_kind classify_regime(double v_dimless) {
    if (v_dimless < 1.0) return regime_kind::subluminal;
    if (v_dimless > 1.0) return regime_kind::superluminal;
    return regime_kind::luminal;
}

void validate(const medium_params& medium) {
    if (!(medium.nu >= 0.0) || !std::isfinite(medium.nu))
        throw validation_error("medium.nu must be a non-negative finite number");
    if (medium.s0 != -1.0 && medium.s0 != 1.0)
        throw validation_error("medium.s0 must be exactly -1 or +1");
    if (medium.lineshape == lineshape_kind::lorentzian) {
        if (!medium.omega0_tau_star)
            throw validation_error("lorentzian medium requires omega0_tau_star");
        if (!(*medium.omega0_tau_star > 0.0) || !std::isfinite(*medium.omega0_tau_star))
            throw validation_error("medium.omega0_tau_star must be a positive finite number");
    }
}

void validate(const pulse_params& pulse) {
    if (!(pulse.x > 0.0) || !std::isfinite(pulse.x))
        throw validation_error("pulse.x must be a positive finite number");
    if (!(pulse.tau0 > 0.0) || !std::isfinite(pulse.tau0))
        throw validation_error("pulse.tau0 must be a positive finite number");
}

void validate(const medium_params& medium, const pulse_params& pulse) {
    validate(medium);
    validate(pulse);
}

}  // namespace sit

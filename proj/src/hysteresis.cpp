#include "magneto/hysteresis.hpp"
#include "magneto/errors.hpp"

#include <algorithm>
#include <cmath>

namespace magneto {

void HysteresisParams::validate() const {
    if (m_s <= 0.0) throw ConfigError("hysteresis: M_s must be positive");
    if (a <= 0.0) throw ConfigError("hysteresis: a must be positive");
    if (k <= 0.0) throw ConfigError("hysteresis: k must be positive");
    if (c < 0.0 || c > 1.0) throw ConfigError("hysteresis: c must lie in [0, 1]");
}

double hysteresis_step(HysteresisState& state, double h, const HysteresisParams& p) {
    const double dh = h - state.h_prev;
    const double delta = dh < 0.0 ? -1.0 : 1.0;

    const double h_e = h + p.alpha * state.m;
    const double t = std::tanh(h_e / p.a);
    const double m_an = p.m_s * t;
    const double dman_dh = p.m_s * (1.0 - t * t) / p.a;

    const double diff = m_an - state.m;
    const double denom = (1.0 - p.c) * delta * p.k - p.alpha * diff;

    double dm_dh;
    if (std::fabs(denom) < 1e-12) {
        dm_dh = p.c * dman_dh; // reversible term only
    } else {
        dm_dh = (1.0 - p.c) * diff / denom + p.c * dman_dh;
    }

    state.m = std::clamp(state.m + dm_dh * dh, -p.m_s, p.m_s);
    state.h_prev = h;
    return state.m;
}

} // namespace magneto

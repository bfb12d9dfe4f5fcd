#pragma once

namespace magneto {

/// Jiles-Atherton loop parameters.
struct HysteresisParams {
    double m_s = 1.0;     // saturation level
    double a = 0.3;       // anhysteretic shape
    double alpha = 0.016; // mean-field coupling
    double k = 0.3;       // coercivity
    double c = 0.2;       // reversibility in [0, 1]

    void validate() const;
};

/// Magnetization state; |m| stays clamped to [-m_s, m_s].
struct HysteresisState {
    double m = 0.0;
    double h_prev = 0.0;
};

// One explicit Euler step in field H:
//   dM/dH = [(1-c)(M_an - M)] / [(1-c) delta k - alpha (M_an - M)] + c dM_an/dH
// with M_an(H_e) = M_s tanh(H_e / a), H_e = H + alpha M and
// delta = sign(H - H_prev) (+1 when equal). If the irreversible denominator
// collapses (< 1e-12 in magnitude) only the reversible term is used.
double hysteresis_step(HysteresisState& state, double h, const HysteresisParams& p);

} // namespace magneto

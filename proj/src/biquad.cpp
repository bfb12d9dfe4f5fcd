#include "magneto/biquad.hpp"

#include <cmath>
#include <complex>

namespace magneto {

static constexpr double kPi = 3.14159265358979323846;

BiquadCoeffs design_lowpass(double fc_hz, double q, int fs) {
    const double w0 = 2.0 * kPi * fc_hz / fs;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double cw = std::cos(w0);
    const double a0 = 1.0 + alpha;
    BiquadCoeffs c;
    c.b0 = (1.0 - cw) / 2.0 / a0;
    c.b1 = (1.0 - cw) / a0;
    c.b2 = c.b0;
    c.a1 = -2.0 * cw / a0;
    c.a2 = (1.0 - alpha) / a0;
    return c;
}

BiquadCoeffs design_highpass(double fc_hz, double q, int fs) {
    const double w0 = 2.0 * kPi * fc_hz / fs;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double cw = std::cos(w0);
    const double a0 = 1.0 + alpha;
    BiquadCoeffs c;
    c.b0 = (1.0 + cw) / 2.0 / a0;
    c.b1 = -(1.0 + cw) / a0;
    c.b2 = c.b0;
    c.a1 = -2.0 * cw / a0;
    c.a2 = (1.0 - alpha) / a0;
    return c;
}

static BiquadCoeffs design_shelf(double fc_hz, double gain_db, int fs, bool low) {
    const double A = std::pow(10.0, gain_db / 40.0);
    const double w0 = 2.0 * kPi * fc_hz / fs;
    const double cw = std::cos(w0);
    const double sw = std::sin(w0);
    const double s = 1.0; // shelf slope
    const double alpha = sw / 2.0 * std::sqrt((A + 1.0 / A) * (1.0 / s - 1.0) + 2.0);
    const double two_sqrtA_alpha = 2.0 * std::sqrt(A) * alpha;
    BiquadCoeffs c;
    double a0;
    if (low) {
        a0 = (A + 1.0) + (A - 1.0) * cw + two_sqrtA_alpha;
        c.b0 = A * ((A + 1.0) - (A - 1.0) * cw + two_sqrtA_alpha) / a0;
        c.b1 = 2.0 * A * ((A - 1.0) - (A + 1.0) * cw) / a0;
        c.b2 = A * ((A + 1.0) - (A - 1.0) * cw - two_sqrtA_alpha) / a0;
        c.a1 = -2.0 * ((A - 1.0) + (A + 1.0) * cw) / a0;
        c.a2 = ((A + 1.0) + (A - 1.0) * cw - two_sqrtA_alpha) / a0;
    } else {
        a0 = (A + 1.0) - (A - 1.0) * cw + two_sqrtA_alpha;
        c.b0 = A * ((A + 1.0) + (A - 1.0) * cw + two_sqrtA_alpha) / a0;
        c.b1 = -2.0 * A * ((A - 1.0) + (A + 1.0) * cw) / a0;
        c.b2 = A * ((A + 1.0) + (A - 1.0) * cw - two_sqrtA_alpha) / a0;
        c.a1 = 2.0 * ((A - 1.0) - (A + 1.0) * cw) / a0;
        c.a2 = ((A + 1.0) - (A - 1.0) * cw - two_sqrtA_alpha) / a0;
    }
    return c;
}

BiquadCoeffs design_low_shelf(double fc_hz, double gain_db, int fs) {
    return design_shelf(fc_hz, gain_db, fs, true);
}

BiquadCoeffs design_high_shelf(double fc_hz, double gain_db, int fs) {
    return design_shelf(fc_hz, gain_db, fs, false);
}

BiquadCoeffs design_gain(double gain_linear) {
    BiquadCoeffs c;
    c.b0 = gain_linear;
    return c;
}

double cascade_magnitude(const std::vector<BiquadCoeffs>& cascade, double f_hz, int fs) {
    const std::complex<double> z = std::polar(1.0, -2.0 * kPi * f_hz / fs);
    std::complex<double> h(1.0, 0.0);
    for (const auto& c : cascade) {
        const std::complex<double> num = c.b0 + c.b1 * z + c.b2 * z * z;
        const std::complex<double> den = 1.0 + c.a1 * z + c.a2 * z * z;
        h *= num / den;
    }
    return std::abs(h);
}

void run_cascade(const std::vector<BiquadCoeffs>& cascade, std::vector<float>& x) {
    for (const auto& coeffs : cascade) {
        Biquad bq(coeffs);
        for (auto& v : x) v = bq.process(v);
    }
}

} // namespace magneto

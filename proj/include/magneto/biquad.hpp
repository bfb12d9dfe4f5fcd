#pragma once

#include <cstddef>
#include <vector>

namespace magneto {

/// Direct form II transposed biquad, coefficients normalized so a0 = 1.
struct BiquadCoeffs {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

class Biquad {
public:
    Biquad() = default;
    explicit Biquad(const BiquadCoeffs& c) : c_(c) {}

    float process(float x) {
        const double y = c_.b0 * x + s1_;
        s1_ = c_.b1 * x - c_.a1 * y + s2_;
        s2_ = c_.b2 * x - c_.a2 * y;
        return float(y);
    }

    void reset() { s1_ = s2_ = 0.0; }

private:
    BiquadCoeffs c_;
    double s1_ = 0.0, s2_ = 0.0;
};

// RBJ cookbook designs.
BiquadCoeffs design_lowpass(double fc_hz, double q, int fs);
BiquadCoeffs design_highpass(double fc_hz, double q, int fs);
BiquadCoeffs design_low_shelf(double fc_hz, double gain_db, int fs);
BiquadCoeffs design_high_shelf(double fc_hz, double gain_db, int fs);
BiquadCoeffs design_gain(double gain_linear);

// |H(e^{j2pi f/fs})| for a cascade.
double cascade_magnitude(const std::vector<BiquadCoeffs>& cascade, double f_hz, int fs);

// Runs a cascade over a channel in place.
void run_cascade(const std::vector<BiquadCoeffs>& cascade, std::vector<float>& x);

} // namespace magneto

#pragma once

#include "magneto/trajectory.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace magneto {

using SystemFn = std::function<std::vector<float>(const std::vector<float>&)>;

/// One cycle of a hysteresis loop plus scalar metrics over the final cycle.
struct RampedSineResult {
    struct Cycle {
        std::vector<float> input;
        std::vector<float> output;
    };
    std::vector<Cycle> cycles;
    double loop_area = 0.0;        // shoelace area of the final cycle
    double loop_width = 0.0;       // input distance between branch zero crossings
    double saturation_level = 0.0; // max |output| on the final cycle
    double origin_slope = 0.0;     // small-signal dy/dx near zero input, final cycle
    double large_signal_slope = 0.0;
};

// Drives a sine at f0 whose amplitude ramps linearly 0 -> peak over `cycles`
// periods and splits the response into per-cycle loops. fs must be an
// integer multiple of f0.
RampedSineResult ramped_sine_analysis(const SystemFn& system, double f0_hz, int cycles,
                                      double peak, int sample_rate);

struct SweepSpec {
    double f_start_hz = 20.0;
    double f_end_hz = 20000.0;
    double duration_s = 4.0;
    double amplitude = 1.0;

    void validate(int sample_rate) const;
};

/// Farina swept-sine measurement: linear magnitude response plus isolated
/// harmonic responses (orders 2..5) windowed out of the deconvolved IR.
struct SweptSineResult {
    std::vector<double> freqs_hz;
    std::vector<double> magnitude_db;                  // fundamental
    std::map<int, std::vector<double>> harmonics_db;   // per order, same axis
};

SweptSineResult swept_sine_analysis(const SystemFn& system, const SweepSpec& spec,
                                    int sample_rate);

struct BandLevel {
    double center_hz;
    double level_db; // 10*log10(band power)
    double power;
};

// Welch-averaged power spectrum (8192-point FFT, 50% overlap, Hann) folded
// into fractional-octave bands. All bins are assigned to a band so the band
// powers sum to the broadband signal power.
std::vector<BandLevel> long_term_spectrum(const std::vector<float>& x, int sample_rate,
                                          int fraction = 6);

struct TrajectorySpectrumStats {
    std::vector<double> freqs_hz;
    std::vector<double> mean_db;
    std::vector<double> std_db;
};

// Per-trajectory magnitude spectra (mean removed, Hann window, 4x zero
// padding), then bin-wise mean and standard deviation in dB.
TrajectorySpectrumStats trajectory_spectrum_stats(const std::vector<std::vector<double>>& batch,
                                                  double rate_hz);

// Frequency of the highest bin with 3-point parabolic refinement.
double spectrum_peak_hz(const std::vector<double>& freqs, const std::vector<double>& level_db);

// CSV with one `# meta:` JSON comment line, then named columns.
void write_analysis_csv(const std::string& path, const std::string& meta_json,
                        const std::vector<std::string>& column_names,
                        const std::vector<std::vector<double>>& columns);

} // namespace magneto

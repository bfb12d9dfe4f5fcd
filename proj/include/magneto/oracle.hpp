#pragma once

#include "magneto/audio.hpp"
#include "magneto/biquad.hpp"
#include "magneto/hysteresis.hpp"
#include "magneto/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace magneto {

struct WowConfig {
    double depth_samples = 20.0;
    double rate_hz = 1.0;
    double variance = 0.25; // slow random amplitude modulation of the wow sine
};

struct FlutterConfig {
    double depth_samples = 1.5;
    double bandwidth_hz = 20.0;
};

struct HissConfig {
    double level_rms = 0.0; // 0 disables
    double hum_hz = 50.0;
    double hum_level = 0.0; // linear amplitude of the hum fundamental
};

/// Reference "toy tape" machine configuration. Values are oracle-internal,
/// tuned to show a visible deadzone and saturation at full scale; no
/// physical accuracy is claimed.
struct OracleConfig {
    HysteresisParams hysteresis;
    double drive_gain = 1.0;
    double bias_amount = 0.0; // 0 = under-biased (wide loop), 1 = narrow loop
    std::vector<BiquadCoeffs> pre_filter;
    std::vector<BiquadCoeffs> post_filter;
    bool timing_enabled = false;
    WowConfig wow;
    FlutterConfig flutter;
    double base_delay_samples = 100.0;
    HissConfig hiss;
    std::uint64_t seed = 0;
    double pulse_rate_hz = 100.0; // trajectory sampling rate

    static OracleConfig defaults(int sample_rate = 44100);
    void validate() const;
};

struct TapeResult {
    AudioBuffer output;
    std::optional<DelayTrajectory> trajectory;
    double effective_coercivity = 0.0;
    int delay_capacity = 0;
};

// Full record/playback chain per channel: pre filter, drive, hysteresis
// (bias as loop-width reduction), post filter, then the synthesized timing
// path and additive hiss when enabled. The returned trajectory is exactly
// the one applied.
TapeResult process_tape(const AudioBuffer& x, const OracleConfig& cfg);

// base_delay + amplitude-modulated wow sine + band-limited flutter noise,
// clamped at zero.
DelayTrajectory synth_trajectory(const OracleConfig& cfg, std::size_t length_points,
                                 std::uint64_t seed);

// Pink noise (cascaded first-order sections) scaled to level_rms plus hum
// at hum_hz and its 2nd/3rd harmonics.
AudioBuffer synth_hiss(const HissConfig& cfg, std::size_t length, std::uint64_t seed,
                       int sample_rate);

} // namespace magneto

#pragma once

#include "magneto/audio.hpp"
#include "magneto/trajectory.hpp"

#include <cstddef>
#include <vector>

namespace magneto {

/// Probe signal: unit impulses spaced T = 1/f apart.
struct PulseTrainSpec {
    double pulse_rate_hz = 100.0;
    double amplitude = 1.0;
    double duration_s = 1.0;
    int sample_rate = 44100;

    // Integer pulse spacing is required (fs divisible by f).
    int spacing_samples() const;
    void validate() const;
};

AudioBuffer generate_pulse_train(const PulseTrainSpec& spec);

/// Detected pulse times in (fractional) sample indices. Windows where no
/// pulse rose above threshold are listed in `gaps`; their entry in `times`
/// holds the running estimate so downstream gap filling stays aligned.
struct PulseDetection {
    std::vector<double> times;
    std::vector<std::size_t> gaps;
};

// Tracks the expected pulse grid, searches +-T/2 around the running
// estimate, picks the max-|x| sample and refines it with a 3-point
// parabolic fit.
PulseDetection detect_pulses(const std::vector<float>& x, const PulseTrainSpec& spec,
                             double threshold);

// values[k] = output_times[k] - input_times[k]; windows flagged as gaps on
// either side are filled by linear interpolation of neighbouring delays
// (constant at the ends) and reported in `filled`.
DelayTrajectory extract_trajectory(const PulseDetection& input_times,
                                   const PulseDetection& output_times,
                                   const PulseTrainSpec& spec,
                                   std::vector<std::size_t>* filled = nullptr);

} // namespace magneto

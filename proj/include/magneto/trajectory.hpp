#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace magneto {

/// Record-to-playback transport delay in audio samples, sampled at the
/// probing pulse rate (typically 100 Hz).
struct DelayTrajectory {
    std::vector<double> values;     // delay in audio samples, >= 0, finite
    double rate_hz = 100.0;         // trajectory sampling rate
    int audio_sample_rate = 44100;

    std::size_t size() const { return values.size(); }
    double max_value() const;
    double mean_value() const;
    void validate() const;
};

// File format: first line is the literal column header
// "rate_hz,audio_sample_rate", the second line carries those two values,
// and every following line is one delay-in-samples value. LF endings.
void write_trajectory_csv(const std::string& path, const DelayTrajectory& traj);
DelayTrajectory read_trajectory_csv(const std::string& path);

// Linear interpolation between trajectory points onto the audio-rate grid,
// constant extrapolation at both ends. Output has exactly `length` samples.
std::vector<double> upsample_trajectory(const DelayTrajectory& traj, int fs,
                                        std::size_t length);

} // namespace magneto

#pragma once

#include <cstddef>
#include <vector>

namespace magneto {

// Error-to-signal ratio: sum((t - p)^2) / sum(t^2). No pre-emphasis.
// Throws on length mismatch or an all-zero target.
double esr_loss(const std::vector<float>& pred, const std::vector<float>& target);

/// Multi-resolution STFT loss configuration. Defaults follow the reference
/// library's documented settings.
struct MrStftConfig {
    std::vector<std::size_t> fft_sizes = {1024, 2048, 512};
    std::vector<std::size_t> hop_sizes = {120, 240, 50};
    std::vector<std::size_t> win_lengths = {600, 1200, 240};
    double magnitude_floor = 1e-8;

    void validate() const;
};

// Mean over resolutions of spectral convergence + log-magnitude L1.
double mrstft_loss(const std::vector<float>& pred, const std::vector<float>& target,
                   const MrStftConfig& cfg = {});

} // namespace magneto

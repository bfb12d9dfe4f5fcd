#pragma once

#include "magneto/oracle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace magneto {

struct SplitSpec {
    std::string name;
    double minutes = 1.0;
};

/// Declarative description of a generated train/val/test dataset.
struct DatasetManifest {
    OracleConfig oracle_config;
    std::uint64_t seed = 0;
    std::vector<SplitSpec> splits;
    std::string out_dir;
    int sample_rate = 44100;
    double file_seconds = 15.0;

    void validate() const;
};

// Random program material: sine mixtures, chirps, filtered noise bursts and
// AM tones across 40 Hz..10 kHz with peaks up to 0 dBFS.
std::vector<float> synth_program(std::size_t length, int sample_rate, std::uint64_t seed);

// Writes <split>/input_###.wav (left: program, right: pulse train),
// <split>/target_###.wav, <split>/traj_###.csv (when timing is enabled) and
// manifest.lock.json. Fully deterministic for a given manifest.
// Returns the lock-file path.
std::string build_dataset(const DatasetManifest& manifest);

} // namespace magneto
